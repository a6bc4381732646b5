//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Matrices here are at most 2^10 on a side and usually 32x32, where Jacobi
//! is simple, numerically excellent (reconstruction residuals near machine
//! epsilon) and has no trouble with clustered eigenvalues.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

pub struct Eigendecomposition {
    /// Real eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

const MAX_SWEEPS: usize = 64;

/// Eigenvalues and eigenvectors of a Hermitian matrix.
///
/// Fails if the input deviates from Hermiticity by more than `1e-9` relative
/// to its largest element.
pub fn eigh(m: &ComplexMatrix) -> Result<Eigendecomposition> {
    jacobi(m, true).map(|(vals, vecs)| Eigendecomposition {
        eigenvalues: vals,
        eigenvectors: vecs.expect("vectors requested"),
    })
}

/// Eigenvalues only (ascending); cheaper than [`eigh`] when the basis is not
/// needed, e.g. for entropies and trace norms.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    jacobi(m, false).map(|(vals, _)| vals)
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    let n = m.dim();
    let scale = m.max_abs().max(1.0);
    let defect = m.hermiticity_defect();
    if defect > 1e-9 * scale {
        return Err(Error::NotHermitian { deviation: defect });
    }

    // Work on the Hermitian part so roundoff-level asymmetry cannot leak in.
    let mut a = m.clone();
    a.hermitize();
    let mut a = a.data_mut().to_vec();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    if n == 1 {
        return Ok((vec![a[0].re], v));
    }

    let stop = 1e-15 * scale;
    for _sweep in 0..MAX_SWEEPS {
        let mut largest = 0.0f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                largest = largest.max(a[p * n + q].norm());
            }
        }
        if largest <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= stop {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U is identity except U[p,p]=c, U[p,q]=s, U[q,p]=-s e^{-iφ},
                // U[q,q]=c e^{-iφ}; apply A ← U† A U and V ← V U.
                let spc = s * phase.conj();
                let cpc = c * phase.conj();
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - spc * aiq;
                    a[i * n + q] = s * aip + cpc * aiq;
                }
                let sp = s * phase;
                let cp = c * phase;
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = c * apj - sp * aqj;
                    a[q * n + j] = s * apj + cp * aqj;
                }
                a[p * n + q] = Complex64::ZERO;
                a[q * n + p] = Complex64::ZERO;
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);

                if let Some(vm) = v.as_mut() {
                    let vd = vm.data_mut();
                    for i in 0..n {
                        let vip = vd[i * n + p];
                        let viq = vd[i * n + q];
                        vd[i * n + p] = c * vip - spc * viq;
                        vd[i * n + q] = s * vip + cpc * viq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = v.map(|vm| {
        ComplexMatrix::from_fn(n, |r, c| vm.at(r, order[c]))
    });
    Ok((eigenvalues, eigenvectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn diagonal_input_sorted() {
        let m = ComplexMatrix::from_fn(3, |r, c| {
            if r == c {
                Complex64::new([3.0, 1.0, 2.0][r], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let vals = eigvalsh(&m).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::ZERO, Complex64::ONE],
            vec![Complex64::ONE, Complex64::ZERO],
        ]);
        let vals = eigvalsh(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_32x32_reconstruction() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut m = ComplexMatrix::from_fn(32, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        m.hermitize();
        let eig = eigh(&m).unwrap();
        let n = 32;
        // V Λ V†
        let mut vl = ComplexMatrix::zeros(n);
        for c in 0..n {
            for r in 0..n {
                vl.set(r, c, eig.eigenvectors.at(r, c) * eig.eigenvalues[c]);
            }
        }
        let rec = vl.mul(&eig.eigenvectors.adjoint());
        assert!(
            rec.max_abs_diff(&m) < 1e-9,
            "reconstruction residual {:.2e}",
            rec.max_abs_diff(&m)
        );
        // unitarity of V
        let vtv = eig.eigenvectors.adjoint().mul(&eig.eigenvectors);
        assert!(vtv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-11);
        // ascending
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::ONE, Complex64::new(0.5, 0.0)],
            vec![Complex64::new(0.2, 0.0), Complex64::ONE],
        ]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian { .. })));
    }
}
