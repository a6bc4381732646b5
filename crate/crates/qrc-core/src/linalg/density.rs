//! Multi-qubit density matrices and the reduced-state operations the
//! reservoir map is built from.

use num_complex::Complex64;

use super::{check_qubit_count, eigvalsh, entropy_of_distribution, ComplexMatrix};
use crate::{Error, Result};

/// Validity tolerances: trace and Hermiticity are enforced on construction,
/// positivity (min eigenvalue ≥ -1e-9) is checked explicitly where tests
/// require it because it needs a spectral decomposition.
pub const TRACE_TOL: f64 = 1e-10;
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const POSITIVITY_FLOOR: f64 = -1e-9;

/// Density matrix of `n_qubits` qubits; qubit 1 is the leftmost tensor
/// factor (most significant bit of a basis index).
#[derive(Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    n_qubits: usize,
}

impl DensityMatrix {
    /// Wrap a matrix, enforcing dimension, unit trace and Hermiticity.
    pub fn new(mat: ComplexMatrix, n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        if mat.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: mat.dim() });
        }
        let state = Self { mat, n_qubits };
        state.check_valid()?;
        Ok(state)
    }

    /// Wrap without validity checks (internal fast paths, tests of invalid
    /// input handling).
    pub fn from_matrix_unchecked(mat: ComplexMatrix, n_qubits: usize) -> Self {
        Self { mat, n_qubits }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut mat = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            mat.set(i, i, Complex64::new(1.0 / dim as f64, 0.0));
        }
        Self { mat, n_qubits }
    }

    /// |idx⟩⟨idx| in the computational basis.
    pub fn basis_state(n_qubits: usize, idx: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(idx < dim);
        let mut mat = ComplexMatrix::zeros(dim);
        mat.set(idx, idx, Complex64::ONE);
        Self { mat, n_qubits }
    }

    /// |ψ⟩⟨ψ| from amplitudes (normalized internally).
    pub fn pure_state(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::InvalidState(format!("state length {dim} is not a power of two")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_qubit_count(n_qubits)?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let mat = ComplexMatrix::from_fn(dim, |r, c| {
            amplitudes[r] * amplitudes[c].conj() / norm_sq
        });
        Ok(Self { mat, n_qubits })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn matrix_mut(&mut self) -> &mut ComplexMatrix {
        &mut self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat.at(i, i).re).collect()
    }

    /// Trace and Hermiticity within tolerance; positivity is not checked here.
    pub fn check_valid(&self) -> Result<()> {
        let tr = self.mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {} != 1", tr)));
        }
        let defect = self.mat.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: defect });
        }
        Ok(())
    }

    /// Smallest eigenvalue (via a spectral decomposition).
    pub fn min_eigenvalue(&self) -> f64 {
        eigvalsh(&self.mat).map(|v| v[0]).unwrap_or(f64::NAN)
    }

    pub fn hermitize(&mut self) {
        self.mat.hermitize();
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        check_qubit_count(n)?;
        Ok(Self { mat: self.mat.kron(&other.mat), n_qubits: n })
    }

    /// Trace out one qubit (0-based; qubit 0 is the leftmost factor).
    pub fn partial_trace(&self, qubit: usize) -> Result<DensityMatrix> {
        if qubit >= self.n_qubits {
            return Err(Error::InvalidQubit { index: qubit, n_qubits: self.n_qubits });
        }
        if self.n_qubits == 1 {
            return Err(Error::InvalidSubsystem);
        }
        let pos = self.n_qubits - 1 - qubit; // bit position from the LSB
        let mask = 1usize << pos;
        let low = mask - 1;
        let out_dim = self.dim() / 2;
        let insert = |i: usize, b: usize| ((i & !low) << 1) | (b << pos) | (i & low);
        let mut out = ComplexMatrix::zeros(out_dim);
        for r in 0..out_dim {
            for c in 0..out_dim {
                let v = self.mat.at(insert(r, 0), insert(c, 0))
                    + self.mat.at(insert(r, 1), insert(c, 1));
                out.set(r, c, v);
            }
        }
        Ok(DensityMatrix { mat: out, n_qubits: self.n_qubits - 1 })
    }

    /// Reduced state of a single qubit (all others traced out).
    pub fn single_qubit_marginal(&self, qubit: usize) -> Result<ComplexMatrix> {
        if qubit >= self.n_qubits {
            return Err(Error::InvalidQubit { index: qubit, n_qubits: self.n_qubits });
        }
        let pos = self.n_qubits - 1 - qubit;
        let mask = 1usize << pos;
        let low = mask - 1;
        let rest = self.dim() / 2;
        let insert = |i: usize, b: usize| ((i & !low) << 1) | (b << pos) | (i & low);
        let mut out = ComplexMatrix::zeros(2);
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = Complex64::ZERO;
                for i in 0..rest {
                    acc += self.mat.at(insert(i, a), insert(i, b));
                }
                out.set(a, b, acc);
            }
        }
        Ok(out)
    }

    /// Partial transpose with respect to the given qubit subset (0-based).
    ///
    /// The subset must be nonempty and proper; transposing everything is the
    /// plain transpose and transposing nothing is the identity.
    pub fn partial_transpose(&self, subset: &[usize]) -> Result<ComplexMatrix> {
        if subset.is_empty() || subset.len() >= self.n_qubits {
            return Err(Error::InvalidSubsystem);
        }
        let mut mask = 0usize;
        for &q in subset {
            if q >= self.n_qubits {
                return Err(Error::InvalidQubit { index: q, n_qubits: self.n_qubits });
            }
            mask |= 1usize << (self.n_qubits - 1 - q);
        }
        let dim = self.dim();
        let mut out = ComplexMatrix::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                let rr = (r & !mask) | (c & mask);
                let cc = (c & !mask) | (r & mask);
                out.set(rr, cc, self.mat.at(r, c));
            }
        }
        Ok(out)
    }

    /// Von Neumann entropy in bits; eigenvalues below 1e-12 contribute zero.
    pub fn von_neumann_entropy(&self) -> f64 {
        let evals = eigvalsh(&self.mat).expect("density matrix is Hermitian");
        entropy_of_distribution(&evals)
    }
}

impl std::fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DensityMatrix({} qubits, dim {})", self.n_qubits, self.dim())
    }
}
