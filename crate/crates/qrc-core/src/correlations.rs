//! Coherence and correlation diagnostics of reservoir states.
//!
//! All entropic quantities are in bits. The hookup M (distance to the
//! closest incoherent product state) is computed through the algebraic
//! identity `M = S(Δ[π[ρ]]) − S(ρ)`, which is exact because the dephased
//! product of marginals is the product of the dephased marginals; the same
//! shared entropies make the identities `M = T + C_L` and `M = C_rel + K`
//! hold to floating-point accuracy.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{eigvalsh, entropy_of_distribution, DensityMatrix};
use crate::noise::{NoiseAxis, NoiseSpec};
use crate::reservoir::{
    run_reservoir_on, Encoding, ObservableSet, ObservableSetKind, RunConfig, RunOptions,
};
use crate::spin::{sample_hamiltonian, ModelParams};
use crate::streams::uniform_sequence;
use crate::{Error, Result};

/// `Σ_{i≠j} |ρ_ij|`; with `normalized` the result is divided by the maximum
/// `2^N − 1`.
pub fn l1_coherence(rho: &DensityMatrix, normalized: bool) -> f64 {
    let dim = rho.dim();
    let mut sum = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            if r != c {
                sum += rho.matrix().at(r, c).norm();
            }
        }
    }
    if normalized {
        sum / (dim as f64 - 1.0)
    } else {
        sum
    }
}

/// Relative-entropy coherence `S(Δ[ρ]) − S(ρ)` (bits), with Δ the full
/// dephasing in the computational basis.
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> f64 {
    entropy_of_distribution(&rho.diagonal()) - rho.von_neumann_entropy()
}

/// Total mutual information `T = Σ_i S(ρ_i) − S(ρ)` (bits).
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    Ok(correlation_report(rho)?.mutual_information)
}

/// Quantum hookup `M = S(Δ[π[ρ]]) − S(ρ)` (bits).
pub fn quantum_hookup(rho: &DensityMatrix) -> Result<f64> {
    Ok(correlation_report(rho)?.hookup)
}

/// Totally classical correlations `K = T(Δ[ρ])` (bits).
pub fn classical_correlations(rho: &DensityMatrix) -> Result<f64> {
    Ok(correlation_report(rho)?.classical)
}

/// Negativity averaged over all unordered nontrivial bipartitions
/// (2^{N−1} − 1 of them; 15 for N = 5).
pub fn mean_negativity(rho: &DensityMatrix) -> Result<f64> {
    let n = rho.n_qubits();
    if n < 2 {
        return Err(Error::InvalidSubsystem);
    }
    // subsets containing qubit 0 enumerate each bipartition once
    let mut acc = 0.0;
    let mut count = 0usize;
    for bits in 0..(1usize << (n - 1)) {
        let mut subset = vec![0usize];
        for q in 1..n {
            if bits & (1 << (q - 1)) != 0 {
                subset.push(q);
            }
        }
        if subset.len() == n {
            continue;
        }
        let pt = rho.partial_transpose(&subset)?;
        let evals = eigvalsh(&pt)?;
        let trace_norm: f64 = evals.iter().map(|l| l.abs()).sum();
        acc += (0.5 * (trace_norm - 1.0)).max(0.0);
        count += 1;
    }
    Ok(acc / count as f64)
}

/// All correlation measures of one state, sharing one set of entropies so
/// the algebraic identities among them are exact.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct CorrelationReport {
    /// l1 coherence (what the noise figures plot).
    pub c_l1: f64,
    /// l1 coherence over its maximum 2^N − 1.
    pub c_l1_normalized: f64,
    /// Relative-entropy coherence (bits); makes M = C_rel + K exact.
    pub c_rel: f64,
    /// Total mutual information T (bits).
    pub mutual_information: f64,
    /// Quantum hookup M (bits).
    pub hookup: f64,
    /// Totally classical correlations K (bits).
    pub classical: f64,
    /// Local coherence C_L = C_rel(π[ρ]) (bits).
    pub local_coherence: f64,
    /// Bipartition-averaged negativity.
    pub negativity: f64,
}

pub const CORRELATION_FIELDS: [&str; 8] =
    ["c_l1", "c_l1_normalized", "c_rel", "mutual_information", "hookup", "classical", "local_coherence", "negativity"];

impl CorrelationReport {
    pub fn as_array(&self) -> [f64; 8] {
        [
            self.c_l1,
            self.c_l1_normalized,
            self.c_rel,
            self.mutual_information,
            self.hookup,
            self.classical,
            self.local_coherence,
            self.negativity,
        ]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        Self {
            c_l1: a[0],
            c_l1_normalized: a[1],
            c_rel: a[2],
            mutual_information: a[3],
            hookup: a[4],
            classical: a[5],
            local_coherence: a[6],
            negativity: a[7],
        }
    }
}

/// Compute every measure of [`CorrelationReport`] for one state.
pub fn correlation_report(rho: &DensityMatrix) -> Result<CorrelationReport> {
    let n = rho.n_qubits();
    let s_rho = rho.von_neumann_entropy();
    let s_diag = entropy_of_distribution(&rho.diagonal());

    let mut s_marginals = 0.0;
    let mut s_dephased_marginals = 0.0;
    for q in 0..n {
        let m = rho.single_qubit_marginal(q)?;
        let evals = eigvalsh(&m)?;
        s_marginals += entropy_of_distribution(&evals);
        s_dephased_marginals += entropy_of_distribution(&[m.at(0, 0).re, m.at(1, 1).re]);
    }

    let mutual_information = (s_marginals - s_rho).max(0.0);
    let hookup = s_dephased_marginals - s_rho;
    let classical = (s_dephased_marginals - s_diag).max(0.0);
    let c_rel = s_diag - s_rho;
    let local_coherence = s_dephased_marginals - s_marginals;
    let negativity = if n >= 2 { mean_negativity(rho)? } else { 0.0 };

    Ok(CorrelationReport {
        c_l1: l1_coherence(rho, false),
        c_l1_normalized: l1_coherence(rho, true),
        c_rel,
        mutual_information,
        hookup,
        classical,
        local_coherence,
        negativity,
    })
}

/// Sweep configuration for the stationary correlation study.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationSweepConfig {
    pub n_qubits: usize,
    pub h: f64,
    pub disorder_width: f64,
    #[serde(default)]
    pub symmetry_break: f64,
    pub delta_t: f64,
    /// Wash-out steps before the averaging window.
    pub washout: usize,
    /// Number of consecutive stationary states averaged.
    pub window: usize,
    pub encoding: Encoding,
    pub eta: u32,
    pub p_err_grid: Vec<f64>,
    pub axes: Vec<NoiseAxis>,
    pub n_realizations: usize,
    pub master_seed: u64,
}

/// One (axis, p_err) cell of the sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepCell {
    pub axis: NoiseAxis,
    pub p_err: f64,
    pub mean: CorrelationReport,
    pub stderr: CorrelationReport,
    pub n_realizations: usize,
    pub window: usize,
}

/// Correlation measures in the stationary regime for every (axis, p_err)
/// cell, averaged over `window` consecutive steps and the disorder ensemble.
/// The input sequence is drawn once and shared by all cells.
pub fn stationary_correlation_sweep(cfg: &CorrelationSweepConfig) -> Result<Vec<SweepCell>> {
    let total_steps = cfg.washout + cfg.window;
    let inputs = uniform_sequence(cfg.master_seed, "input", total_steps);
    let mut cells: Vec<(NoiseAxis, f64)> = Vec::new();
    for &axis in &cfg.axes {
        for &p in &cfg.p_err_grid {
            cells.push((axis, p));
        }
    }
    cells
        .par_iter()
        .map(|&(axis, p_err)| {
            let mut per_real: Vec<[f64; 8]> = Vec::with_capacity(cfg.n_realizations);
            for r in 0..cfg.n_realizations {
                let model = ModelParams {
                    n_qubits: cfg.n_qubits,
                    h: cfg.h,
                    disorder_width: cfg.disorder_width,
                    symmetry_break: cfg.symmetry_break,
                    seed: 0,
                }
                .with_realization(cfg.master_seed, r);
                let hr = sample_hamiltonian(&model)?;
                let run_cfg = RunConfig {
                    model,
                    delta_t: cfg.delta_t,
                    washout: cfg.washout,
                    len: cfg.window,
                    encoding: cfg.encoding,
                    noise: NoiseSpec { axis, p_err, eta: cfg.eta },
                    observables: ObservableSet::new(ObservableSetKind::Z),
                    sigma_bar: 0.0,
                    input_seed: cfg.master_seed,
                    readout_noise_seed: 0,
                };
                let opts = RunOptions { log_states: Some(cfg.washout..total_steps) };
                let out = run_reservoir_on(&hr, &run_cfg, &inputs, None, &opts)?;
                let mut acc = [0.0; 8];
                for (_, state) in &out.logged_states {
                    let rep = correlation_report(state)?.as_array();
                    for (a, v) in acc.iter_mut().zip(rep) {
                        *a += v;
                    }
                }
                for a in acc.iter_mut() {
                    *a /= out.logged_states.len() as f64;
                }
                per_real.push(acc);
            }
            let nr = per_real.len() as f64;
            let mut mean = [0.0; 8];
            for rep in &per_real {
                for (m, v) in mean.iter_mut().zip(rep) {
                    *m += v / nr;
                }
            }
            let mut stderr = [0.0; 8];
            if per_real.len() > 1 {
                for rep in &per_real {
                    for ((se, v), m) in stderr.iter_mut().zip(rep).zip(mean) {
                        *se += (v - m) * (v - m);
                    }
                }
                for se in stderr.iter_mut() {
                    *se = (*se / (nr - 1.0) / nr).sqrt();
                }
            }
            Ok(SweepCell {
                axis,
                p_err,
                mean: CorrelationReport::from_array(mean),
                stderr: CorrelationReport::from_array(stderr),
                n_realizations: cfg.n_realizations,
                window: cfg.window,
            })
        })
        .collect()
}
