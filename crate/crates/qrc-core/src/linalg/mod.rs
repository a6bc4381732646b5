//! Dense complex linear algebra for multi-qubit states.
//!
//! Everything is built around [`ComplexMatrix`], a square row-major matrix of
//! `Complex64`. Dimensions are powers of two for states (up to
//! [`crate::MAX_QUBITS`] qubits), and qubit 1 of the register is the *leftmost*
//! tensor factor, i.e. the most significant bit of a computational-basis
//! index.

mod density;
mod eig;
mod pauli;
pub(crate) mod planar;

pub use density::{DensityMatrix, HERMITICITY_TOL, POSITIVITY_FLOOR, TRACE_TOL};
pub use eig::{eigh, eigvalsh, Eigendecomposition};
pub use pauli::{CompiledObservable, PauliLetter, PauliString};

use num_complex::Complex64;

use crate::{Error, Result};

/// Square complex matrix, row-major: entry `(r, c)` lives at `data[r*dim + c]`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.data[r * dim + c] = f(r, c);
            }
        }
        m
    }

    /// Build from nested rows; panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must form a square matrix");
        Self { dim, data: rows.concat() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.at(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.at(c, r))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { dim: self.dim, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { dim: self.dim, data }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let a = planar::PlanarMatrix::from_complex(self);
        let b = planar::PlanarMatrix::from_complex(other);
        let mut c = planar::PlanarMatrix::zeros(self.dim);
        planar::gemm(&mut c, &a, &b);
        c.to_complex()
    }

    /// Largest elementwise deviation from Hermiticity, `max |m - m†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = (self.at(r, c) - self.at(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Replace the matrix by its Hermitian part `(m + m†)/2`.
    pub fn hermitize(&mut self) {
        for r in 0..self.dim {
            for c in r + 1..self.dim {
                let avg = 0.5 * (self.at(r, c) + self.at(c, r).conj());
                self.set(r, c, avg);
                self.set(c, r, avg.conj());
            }
            let d = self.at(r, r);
            self.set(r, r, Complex64::new(d.re, 0.0));
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Kronecker product `self ⊗ other` (self is the left/leading factor).
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for r1 in 0..n {
            for c1 in 0..n {
                let z = self.at(r1, c1);
                if z == Complex64::ZERO {
                    continue;
                }
                for r2 in 0..m {
                    for c2 in 0..m {
                        out.set(r1 * m + r2, c1 * m + c2, z * other.at(r2, c2));
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.dim, self.dim)?;
        for r in 0..self.dim.min(8) {
            write!(f, "  ")?;
            for c in 0..self.dim.min(8) {
                let z = self.at(r, c);
                write!(f, "{:+.3}{:+.3}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Propagator `U = V e^{-i Λ t} V†` from a Hermitian eigendecomposition.
///
/// The decomposition of the generator is computed once per realization and
/// reused for every time step, so this is just two products and a phase.
pub fn unitary_from_eigen(eigenvalues: &[f64], eigenvectors: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let dim = eigenvectors.dim();
    assert_eq!(eigenvalues.len(), dim);
    // V * diag(e^{-i λ t})
    let mut phased = ComplexMatrix::zeros(dim);
    for c in 0..dim {
        let ph = Complex64::from_polar(1.0, -eigenvalues[c] * t);
        for r in 0..dim {
            phased.set(r, c, eigenvectors.at(r, c) * ph);
        }
    }
    phased.mul(&eigenvectors.adjoint())
}

/// Propagator `e^{-i H t}` of a Hermitian generator.
pub fn unitary_from_hamiltonian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = eigh(h)?;
    Ok(unitary_from_eigen(&eig.eigenvalues, &eig.eigenvectors, t))
}

/// Shannon entropy (base 2) of a probability vector; entries below `1e-12`
/// contribute zero.
pub fn entropy_of_distribution(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 1e-12)
        .map(|&p| -p * p.log2())
        .sum()
}

pub(crate) fn check_qubit_count(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > crate::MAX_QUBITS {
        return Err(Error::TooManyQubits { n_qubits, max: crate::MAX_QUBITS });
    }
    Ok(())
}
