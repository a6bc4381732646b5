//! Phase diagram over (h, W): adjacent-gap ratio and stationary coherence.

use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Result};
use rayon::prelude::*;

use qrc_core::correlations::l1_coherence;
use qrc_core::noise::NoiseSpec;
use qrc_core::reservoir::{
    run_reservoir_on, ObservableSet, ObservableSetKind, RunConfig, RunOptions,
};
use qrc_core::spin::{phase_scan, sample_hamiltonian, ModelParams, PhaseScanConfig};
use qrc_core::streams::uniform_sequence;

use crate::config::ExperimentConfig;
use crate::manifest::{fmt_f64, BundleWriter, ResultBundle};
use crate::pipeline::mean_stderr;

/// Gap-ratio and coherence tables on the configured (h, W) grid.
pub fn run_phase_diagram(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ResultBundle> {
    let section = cfg
        .phase_diagram
        .as_ref()
        .ok_or_else(|| anyhow!("missing [phase_diagram] section"))?;
    let mut bundle = BundleWriter::create(out_dir, cfg)?;

    let t0 = Instant::now();
    let scan_cfg = PhaseScanConfig {
        n_qubits: cfg.model.n_qubits,
        h_values: section.h_values.clone(),
        w_values: section.w_values.clone(),
        n_realizations: cfg.n_realizations,
        seed: cfg.master_seed,
        spectral: section.spectral,
        symmetry_break: cfg.model.symmetry_break,
    };
    let cells = phase_scan(&scan_cfg)?;
    bundle.write_csv(
        "gap_ratio",
        "gap_ratio.csv",
        &["h", "W", "mean_r", "stderr_r", "n_realizations", "seed"],
        cells.iter().map(|c| {
            vec![
                fmt_f64(c.h),
                fmt_f64(c.w),
                fmt_f64(c.mean_r),
                fmt_f64(c.stderr_r),
                c.n_realizations.to_string(),
                cfg.master_seed.to_string(),
            ]
        }),
    )?;
    bundle.record_timing("gap_ratio_scan", t0.elapsed().as_millis());

    // Stationary coherence panel: mean normalized l1 coherence over a
    // window of consecutive steps, same input sequence for every cell.
    let t0 = Instant::now();
    let washout = section.coherence_washout;
    let window = section.coherence_window;
    let inputs = uniform_sequence(cfg.master_seed, "input", washout + window);
    let grid: Vec<(f64, f64)> = section
        .h_values
        .iter()
        .flat_map(|&h| section.w_values.iter().map(move |&w| (h, w)))
        .collect();
    let coherence: Result<Vec<(f64, f64, f64, f64)>> = grid
        .par_iter()
        .map(|&(h, w)| {
            let mut per_real = Vec::with_capacity(cfg.n_realizations);
            for r in 0..cfg.n_realizations {
                let model = ModelParams {
                    n_qubits: cfg.model.n_qubits,
                    h,
                    disorder_width: w,
                    symmetry_break: cfg.model.symmetry_break,
                    seed: 0,
                }
                .with_realization(cfg.master_seed, r);
                let hr = sample_hamiltonian(&model)?;
                let run_cfg = RunConfig {
                    model,
                    delta_t: cfg.run.delta_t,
                    washout,
                    len: window,
                    encoding: cfg.run.encoding,
                    noise: NoiseSpec::noiseless(),
                    observables: ObservableSet::new(ObservableSetKind::Z),
                    sigma_bar: 0.0,
                    input_seed: cfg.master_seed,
                    readout_noise_seed: 0,
                };
                let opts = RunOptions { log_states: Some(washout..washout + window) };
                let out = run_reservoir_on(&hr, &run_cfg, &inputs, None, &opts)?;
                let mean_c = out
                    .logged_states
                    .iter()
                    .map(|(_, s)| l1_coherence(s, true))
                    .sum::<f64>()
                    / out.logged_states.len() as f64;
                per_real.push(mean_c);
            }
            let (mean, stderr) = mean_stderr(&per_real);
            Ok((h, w, mean, stderr))
        })
        .collect();
    let coherence = coherence?;
    bundle.write_csv(
        "coherence",
        "coherence.csv",
        &["h", "W", "mean_c_l1_normalized", "stderr", "n_realizations", "seed"],
        coherence.iter().map(|&(h, w, m, se)| {
            vec![
                fmt_f64(h),
                fmt_f64(w),
                fmt_f64(m),
                fmt_f64(se),
                cfg.n_realizations.to_string(),
                cfg.master_seed.to_string(),
            ]
        }),
    )?;
    bundle.record_timing("coherence_scan", t0.elapsed().as_millis());

    bundle.finish()
}
