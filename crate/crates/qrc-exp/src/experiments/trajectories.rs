//! Sub-step-resolved Z-observable traces across a few input injections.

use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Result};
use rayon::prelude::*;

use qrc_core::linalg::{PauliLetter, PauliString};
use qrc_core::noise::{noisy_interval, NoiseSpec};
use qrc_core::reservoir::{
    encode_input, inject_input, run_reservoir_on, ObservableSet, ObservableSetKind, RunConfig,
    RunOptions,
};
use qrc_core::spin::{sample_hamiltonian, ModelParams};
use qrc_core::streams::uniform_sequence;

use crate::config::ExperimentConfig;
use crate::manifest::{fmt_f64, BundleWriter, ResultBundle};

struct TraceRow {
    disorder_width: f64,
    axis: String,
    p_err: f64,
    step: usize,
    substep_time: f64,
    observable: String,
    value: f64,
}

/// Dump ⟨σ^z_i⟩ for every qubit at every trotter sub-step over a window of
/// input injections, for each requested (disorder, noise) cell. Values right
/// after each injection are included (sub-step 0), which is where the
/// erase-and-write discontinuity of the input qubit shows.
pub fn run_trajectory_dump(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ResultBundle> {
    let section =
        cfg.trajectories.as_ref().ok_or_else(|| anyhow!("missing [trajectories] section"))?;
    let mut bundle = BundleWriter::create(out_dir, cfg)?;
    let t0 = Instant::now();

    let n = cfg.model.n_qubits;
    let eta = cfg.run.eta;
    let delta_t = cfg.run.delta_t;
    let washout = cfg.run.washout;
    let injections = section.injections;
    let inputs = uniform_sequence(cfg.master_seed, "input", washout + injections);
    let z_obs: Vec<PauliString> = (0..n)
        .map(|q| PauliString::single(n, q, PauliLetter::Z))
        .collect::<qrc_core::Result<_>>()?;

    let rows: Result<Vec<Vec<TraceRow>>> = section
        .cells
        .par_iter()
        .map(|cell| {
            let model = ModelParams {
                n_qubits: n,
                h: cfg.model.h,
                disorder_width: cell.disorder_width,
                symmetry_break: cfg.model.symmetry_break,
                seed: 0,
            }
            .with_realization(cfg.master_seed, 0);
            let hr = sample_hamiltonian(&model)?;
            let noise = NoiseSpec { axis: cell.axis, p_err: cell.p_err, eta };

            // reach the stationary regime with the fast engine, then walk
            // the window sub-step by sub-step
            let warm_cfg = RunConfig {
                model,
                delta_t,
                washout: washout.saturating_sub(1),
                len: 1,
                encoding: cfg.run.encoding,
                noise,
                observables: ObservableSet::new(ObservableSetKind::Z),
                sigma_bar: 0.0,
                input_seed: cfg.master_seed,
                readout_noise_seed: 0,
            };
            let warm =
                run_reservoir_on(&hr, &warm_cfg, &inputs[..washout], None, &RunOptions::default())?;
            let mut rho = warm.final_state;

            let substep = NoiseSpec { eta: 1, ..noise };
            let dt_sub = delta_t / eta as f64;
            let mut out = Vec::with_capacity(injections * (eta as usize + 1) * n);
            for (step, &s) in inputs[washout..].iter().enumerate() {
                let rho1 = encode_input(s, cfg.run.encoding)?;
                rho = inject_input(&rho, &rho1)?;
                let t_base = (washout + step) as f64 * delta_t;
                for j in 0..=eta {
                    if j > 0 {
                        rho = noisy_interval(&rho, &hr, dt_sub, &substep)?;
                    }
                    for obs in &z_obs {
                        out.push(TraceRow {
                            disorder_width: cell.disorder_width,
                            axis: cell.axis.to_string(),
                            p_err: cell.p_err,
                            step,
                            substep_time: t_base + j as f64 * dt_sub,
                            observable: obs.to_string(),
                            value: obs.compile().expectation(rho.matrix()),
                        });
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let rows: Vec<TraceRow> = rows?.into_iter().flatten().collect();
    bundle.record_timing("trajectories", t0.elapsed().as_millis());

    bundle.write_csv(
        "trajectories",
        "trajectories.csv",
        &["W", "axis", "p_err", "step", "substep_time", "observable", "value"],
        rows.iter().map(|r| {
            vec![
                fmt_f64(r.disorder_width),
                r.axis.clone(),
                fmt_f64(r.p_err),
                r.step.to_string(),
                fmt_f64(r.substep_time),
                r.observable.clone(),
                fmt_f64(r.value),
            ]
        }),
    )?;
    bundle.finish()
}
