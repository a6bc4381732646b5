//! Brute-force reference integrators for tests (feature `oracle`).
//!
//! This module exists so that test suites can check the trotterized channel
//! against a dense fixed-step integration of the continuous master equation
//! `ρ̇ = -i[H,ρ] + γ Σ_i (σ^α_i ρ σ^α_i − ρ)`. It is compiled only when the
//! `oracle` feature is enabled (dev-dependencies of the test crates);
//! production paths never touch it.

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, DensityMatrix, PauliLetter, PauliString};
use crate::noise::NoiseAxis;
use crate::Result;

/// Dense RK4 integration of the Lindblad equation over `t_total` with a
/// fixed step, for per-qubit flip channels of rate `gamma` along `axis`.
pub fn lindblad_rk4(
    rho0: &DensityMatrix,
    h: &ComplexMatrix,
    axis: NoiseAxis,
    gamma: f64,
    t_total: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    let n = rho0.n_qubits();
    let letter = match axis {
        NoiseAxis::X => PauliLetter::X,
        NoiseAxis::Z => PauliLetter::Z,
        NoiseAxis::None => PauliLetter::I,
    };
    let jump_ops: Vec<ComplexMatrix> = (0..n)
        .map(|q| PauliString::single(n, q, letter).map(|p| p.to_operator()))
        .collect::<Result<Vec<_>>>()?;

    let rhs = |rho: &ComplexMatrix| -> ComplexMatrix {
        // -i (Hρ - ρH)
        let comm = h.mul(rho).sub(&rho.mul(h));
        let mut out = comm.scale(Complex64::new(0.0, -1.0));
        if gamma > 0.0 && axis != NoiseAxis::None {
            for sigma in &jump_ops {
                let jump = sigma.mul(rho).mul(sigma);
                out = out.add(&jump.sub(rho).scale(Complex64::new(gamma, 0.0)));
            }
        }
        out
    };

    let steps = (t_total / dt).round() as usize;
    let mut rho = rho0.matrix().clone();
    let half = Complex64::new(0.5 * dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    for _ in 0..steps {
        let k1 = rhs(&rho);
        let k2 = rhs(&rho.add(&k1.scale(half)));
        let k3 = rhs(&rho.add(&k2.scale(half)));
        let k4 = rhs(&rho.add(&k3.scale(Complex64::new(dt, 0.0))));
        let incr = k1
            .add(&k2.scale(Complex64::new(2.0, 0.0)))
            .add(&k3.scale(Complex64::new(2.0, 0.0)))
            .add(&k4)
            .scale(sixth);
        rho = rho.add(&incr);
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho, n))
}
