//! Bit-flip and phase-flip decoherence in a trotterized alternation with the
//! unitary dynamics.
//!
//! The Lindblad generator `ρ̇ = -i[H,ρ] + γ Σ_i (σ^α_i ρ σ^α_i − ρ)` is
//! approximated by splitting each input interval ΔT into η sub-steps: evolve
//! unitarily for δt = ΔT/η, then apply the single-qubit flip channel
//! `ρ → (1−p) ρ + p σ^α_q ρ σ^α_q` to every qubit in turn. The per-qubit
//! channels commute, so the sequential form equals the full multi-qubit
//! dissipative map at a cost of O(N·4^N) instead of O(8^N). The sub-step
//! flip probability relates to the rate as `p = (1 − e^{−2γδt})/2`.

use serde::{Deserialize, Serialize};

use crate::linalg::planar::{conjugate_in_place, PlanarMatrix};
use crate::linalg::DensityMatrix;
use crate::spin::HamiltonianRealization;
use crate::{Error, Result};

/// Flip axis: X is the bit flip channel, Z the phase flip channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseAxis {
    None,
    X,
    Z,
}

impl std::fmt::Display for NoiseAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NoiseAxis::None => write!(f, "none"),
            NoiseAxis::X => write!(f, "x"),
            NoiseAxis::Z => write!(f, "z"),
        }
    }
}

/// Channel specification for one run.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub axis: NoiseAxis,
    /// Per-sub-step flip probability, in [0, 0.5].
    pub p_err: f64,
    /// Trotter sub-steps per input interval.
    pub eta: u32,
}

impl NoiseSpec {
    pub const DEFAULT_ETA: u32 = 50;

    pub fn noiseless() -> Self {
        Self { axis: NoiseAxis::None, p_err: 0.0, eta: Self::DEFAULT_ETA }
    }

    pub fn new(axis: NoiseAxis, p_err: f64, eta: u32) -> Result<Self> {
        let spec = Self { axis, p_err, eta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.5).contains(&self.p_err) {
            return Err(Error::InvalidParameter(format!(
                "p_err must be in [0, 0.5], got {}",
                self.p_err
            )));
        }
        if self.eta < 1 {
            return Err(Error::InvalidParameter("eta must be >= 1".into()));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.axis == NoiseAxis::None || self.p_err == 0.0
    }
}

/// Per-sub-step flip probability from the Lindblad rate: `(1 − e^{−2γδt})/2`.
pub fn perr_from_gamma(gamma: f64, delta_t: f64) -> Result<f64> {
    if gamma < 0.0 || delta_t <= 0.0 {
        return Err(Error::InvalidParameter(
            "perr_from_gamma needs gamma >= 0 and delta_t > 0".into(),
        ));
    }
    Ok(0.5 * (1.0 - (-2.0 * gamma * delta_t).exp()))
}

/// Inverse of [`perr_from_gamma`]; p = 0.5 is unreachable at finite rate.
pub fn gamma_from_perr(p: f64, delta_t: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&p) || delta_t <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gamma_from_perr needs 0 <= p < 0.5 and delta_t > 0, got p={p}"
        )));
    }
    Ok(-(1.0 - 2.0 * p).ln() / (2.0 * delta_t))
}

fn flip_bit(n_qubits: usize, qubit: usize) -> usize {
    1usize << (n_qubits - 1 - qubit)
}

pub(crate) fn apply_flip_planar(rho: &mut PlanarMatrix, axis: NoiseAxis, p: f64, qubit_bit: usize) {
    let dim = rho.n;
    match axis {
        NoiseAxis::None => {}
        NoiseAxis::X => {
            // ρ ← (1−p) ρ + p X_q ρ X_q pairs (i, j) with (i^m, j^m)
            let q = 1.0 - p;
            for i in 0..dim {
                if i & qubit_bit != 0 {
                    continue;
                }
                let i2 = i ^ qubit_bit;
                for j in 0..dim {
                    let j2 = j ^ qubit_bit;
                    let (a, b) = (i * dim + j, i2 * dim + j2);
                    let (ra, rb) = (rho.re[a], rho.re[b]);
                    rho.re[a] = q * ra + p * rb;
                    rho.re[b] = q * rb + p * ra;
                    let (ia, ib) = (rho.im[a], rho.im[b]);
                    rho.im[a] = q * ia + p * ib;
                    rho.im[b] = q * ib + p * ia;
                }
            }
        }
        NoiseAxis::Z => {
            // Z_q ρ Z_q negates entries where the q-bits of row and column
            // differ, so the channel damps exactly those by (1 − 2p).
            let damp = 1.0 - 2.0 * p;
            for i in 0..dim {
                for j in 0..dim {
                    if (i ^ j) & qubit_bit != 0 {
                        let k = i * dim + j;
                        rho.re[k] *= damp;
                        rho.im[k] *= damp;
                    }
                }
            }
        }
    }
}

/// Single-qubit flip channel `(1−p) ρ + p σ^α_q ρ σ^α_q` (trace preserving,
/// completely positive).
pub fn apply_flip_channel(
    rho: &DensityMatrix,
    axis: NoiseAxis,
    p: f64,
    qubit: usize,
) -> Result<DensityMatrix> {
    if qubit >= rho.n_qubits() {
        return Err(Error::InvalidQubit { index: qubit, n_qubits: rho.n_qubits() });
    }
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must be in [0, 0.5], got {p}")));
    }
    let mut planar = PlanarMatrix::from_complex(rho.matrix());
    apply_flip_planar(&mut planar, axis, p, flip_bit(rho.n_qubits(), qubit));
    Ok(DensityMatrix::from_matrix_unchecked(planar.to_complex(), rho.n_qubits()))
}

/// Cached propagator + channel for repeated interval evolution.
///
/// One interval of length ΔT is split into `blocks` equal parts (time
/// multiplexing measures after each block); a noisy block runs `eta/blocks`
/// sub-steps of {unitary δt, flip channel on every qubit}, a noiseless block
/// is a single exact conjugation by `e^{-iHΔT/blocks}`.
pub(crate) struct IntervalEvolver {
    n_qubits: usize,
    u: PlanarMatrix,
    u_dag: PlanarMatrix,
    substeps_per_block: u32,
    axis: NoiseAxis,
    p_err: f64,
}

impl IntervalEvolver {
    pub fn new(
        hr: &HamiltonianRealization,
        delta_t: f64,
        spec: &NoiseSpec,
        blocks: u32,
    ) -> Result<Self> {
        spec.validate()?;
        if blocks < 1 {
            return Err(Error::InvalidParameter("multiplex factor must be >= 1".into()));
        }
        let n_qubits = hr.params.n_qubits;
        if spec.is_noiseless() {
            let u = PlanarMatrix::from_complex(&hr.propagator(delta_t / blocks as f64));
            let u_dag = u.adjoint();
            return Ok(Self {
                n_qubits,
                u,
                u_dag,
                substeps_per_block: 1,
                axis: NoiseAxis::None,
                p_err: 0.0,
            });
        }
        if spec.eta % blocks != 0 {
            return Err(Error::IncommensurateMultiplex { v: blocks, eta: spec.eta });
        }
        let u = PlanarMatrix::from_complex(&hr.propagator(delta_t / spec.eta as f64));
        let u_dag = u.adjoint();
        Ok(Self {
            n_qubits,
            u,
            u_dag,
            substeps_per_block: spec.eta / blocks,
            axis: spec.axis,
            p_err: spec.p_err,
        })
    }

    /// Advance ρ by ΔT/blocks in place.
    pub fn evolve_block(&self, rho: &mut PlanarMatrix, scratch: &mut PlanarMatrix) {
        for _ in 0..self.substeps_per_block {
            conjugate_in_place(rho, &self.u, &self.u_dag, scratch);
            if self.p_err > 0.0 {
                for q in 0..self.n_qubits {
                    apply_flip_planar(rho, self.axis, self.p_err, flip_bit(self.n_qubits, q));
                }
            }
        }
    }
}

/// One noisy input interval: η repetitions of {unitary δt = ΔT/η, then the
/// per-qubit flip channel}. With `p_err = 0` (or axis `None`) this equals
/// the exact unitary conjugation `e^{-iHΔT} ρ e^{iHΔT}`.
pub fn noisy_interval(
    rho: &DensityMatrix,
    hr: &HamiltonianRealization,
    delta_t: f64,
    spec: &NoiseSpec,
) -> Result<DensityMatrix> {
    if rho.n_qubits() != hr.params.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1usize << hr.params.n_qubits,
            actual: rho.dim(),
        });
    }
    let evolver = IntervalEvolver::new(hr, delta_t, spec, 1)?;
    let mut planar = PlanarMatrix::from_complex(rho.matrix());
    let mut scratch = PlanarMatrix::zeros(planar.n);
    evolver.evolve_block(&mut planar, &mut scratch);
    planar.hermitize();
    Ok(DensityMatrix::from_matrix_unchecked(planar.to_complex(), rho.n_qubits()))
}
