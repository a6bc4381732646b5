//! Pauli strings: dense operators and fast expectation values.
//!
//! A Pauli string acts on a basis state as `O|b⟩ = phase(b) |b ^ xmask⟩`,
//! where `xmask` collects the X/Y positions. Expectations therefore need one
//! matrix element per basis index, `Tr[Oρ] = Σ_b phase(b) ρ[b, b^xmask]`,
//! which is what the readout layer uses instead of materializing operators.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{check_qubit_count, planar::PlanarMatrix, ComplexMatrix};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn from_char(ch: char) -> Option<Self> {
        match ch.to_ascii_uppercase() {
            'I' => Some(Self::I),
            'X' => Some(Self::X),
            'Y' => Some(Self::Y),
            'Z' => Some(Self::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Self::I => 'I',
            Self::X => 'X',
            Self::Y => 'Y',
            Self::Z => 'Z',
        }
    }
}

/// One Pauli letter per qubit; qubit 1 is the leftmost letter.
#[derive(Clone, PartialEq, Eq)]
pub struct PauliString(Vec<PauliLetter>);

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>) -> Result<Self> {
        check_qubit_count(letters.len())?;
        Ok(Self(letters))
    }

    /// All-identity string of length `n` with `letter` at `qubit` (0-based).
    pub fn single(n_qubits: usize, qubit: usize, letter: PauliLetter) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::InvalidQubit { index: qubit, n_qubits });
        }
        let mut letters = vec![PauliLetter::I; n_qubits];
        letters[qubit] = letter;
        Self::new(letters)
    }

    /// Identity except `la` at `qa` and `lb` at `qb`.
    pub fn pair(
        n_qubits: usize,
        qa: usize,
        la: PauliLetter,
        qb: usize,
        lb: PauliLetter,
    ) -> Result<Self> {
        if qa >= n_qubits {
            return Err(Error::InvalidQubit { index: qa, n_qubits });
        }
        if qb >= n_qubits || qa == qb {
            return Err(Error::InvalidQubit { index: qb, n_qubits });
        }
        let mut letters = vec![PauliLetter::I; n_qubits];
        letters[qa] = la;
        letters[qb] = lb;
        Self::new(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.0
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&l| l != PauliLetter::I).count()
    }

    /// Precompute the action for fast repeated expectations.
    pub fn compile(&self) -> CompiledObservable {
        let n = self.len();
        let dim = 1usize << n;
        let mut xmask = 0usize;
        let mut ybits: Vec<usize> = Vec::new();
        let mut zbits: Vec<usize> = Vec::new();
        for (q, &letter) in self.0.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match letter {
                PauliLetter::I => {}
                PauliLetter::X => xmask |= bit,
                PauliLetter::Y => {
                    xmask |= bit;
                    ybits.push(bit);
                }
                PauliLetter::Z => zbits.push(bit),
            }
        }
        let mut phase = Vec::with_capacity(dim);
        for b in 0..dim {
            let mut ph = Complex64::ONE;
            for &bit in &ybits {
                // Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩
                ph *= if b & bit == 0 { Complex64::I } else { -Complex64::I };
            }
            for &bit in &zbits {
                if b & bit != 0 {
                    ph = -ph;
                }
            }
            phase.push(ph);
        }
        CompiledObservable { name: self.to_string(), dim, xmask, phase }
    }

    /// Dense `2^N x 2^N` operator (unitary and Hermitian).
    pub fn to_operator(&self) -> ComplexMatrix {
        let compiled = self.compile();
        let mut out = ComplexMatrix::zeros(compiled.dim);
        for col in 0..compiled.dim {
            out.set(col ^ compiled.xmask, col, compiled.phase[col]);
        }
        out
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters: Option<Vec<_>> = s.chars().map(PauliLetter::from_char).collect();
        let letters = letters
            .ok_or_else(|| Error::InvalidParameter(format!("invalid Pauli string {s:?}")))?;
        Self::new(letters)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Precomputed Pauli-string action for repeated expectation values.
#[derive(Clone)]
pub struct CompiledObservable {
    pub name: String,
    dim: usize,
    xmask: usize,
    phase: Vec<Complex64>,
}

impl CompiledObservable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Tr[O ρ]`, discarding the imaginary residue (below 1e-10 for valid
    /// Hermitian inputs).
    pub fn expectation(&self, rho: &ComplexMatrix) -> f64 {
        debug_assert_eq!(rho.dim(), self.dim);
        let data = rho.data();
        let mut acc = Complex64::ZERO;
        for b in 0..self.dim {
            acc += self.phase[b] * data[b * self.dim + (b ^ self.xmask)];
        }
        acc.re
    }

    pub(crate) fn expectation_planar(&self, rho: &PlanarMatrix) -> f64 {
        debug_assert_eq!(rho.n, self.dim);
        let mut acc = 0.0;
        for b in 0..self.dim {
            let idx = b * self.dim + (b ^ self.xmask);
            let ph = self.phase[b];
            acc += ph.re * rho.re[idx] - ph.im * rho.im[idx];
        }
        acc
    }
}
