//! Dense density-matrix simulation of a small disordered spin network driven
//! as a quantum reservoir computer.
//!
//! The crate is organized along the processing pipeline:
//!
//! - [`linalg`]: self-contained complex dense linear algebra for multi-qubit
//!   states (tensor structure, Pauli strings, partial trace/transpose,
//!   Hermitian eigendecomposition, entropies).
//! - [`spin`]: disordered transverse-field Ising Hamiltonians and spectral
//!   ergodicity statistics (adjacent-gap ratio).
//! - [`noise`]: bit-flip / phase-flip decoherence applied in a trotterized
//!   alternation with the unitary dynamics.
//! - [`reservoir`]: the erase-and-write input map, observable readout with
//!   optional time multiplexing, and finite-measurement Gaussian noise.
//! - [`ipc`]: degree-resolved Information Processing Capacity of a readout
//!   matrix (Legendre-product targets, least-squares readouts, surrogate
//!   thresholds).
//! - [`correlations`]: coherence, mutual information, hookup, totally
//!   classical correlations and bipartition-averaged negativity.
//! - [`streams`]: named, reproducible RNG streams derived from a master seed.

pub mod correlations;
pub mod ipc;
pub mod linalg;
pub mod noise;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod reservoir;
pub mod spin;
pub mod streams;

use thiserror::Error;

/// Errors shared across the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not Hermitian within tolerance (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    InvalidQubit { index: usize, n_qubits: usize },
    #[error("subsystem must be a nonempty proper subset of the qubits")]
    InvalidSubsystem,
    #[error("system size {n_qubits} exceeds the supported maximum of {max} qubits")]
    TooManyQubits { n_qubits: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("multiplex factor {v} is not commensurate with {eta} trotter sub-steps")]
    IncommensurateMultiplex { v: u32, eta: u32 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("target has zero power (all-zero sequence)")]
    ZeroPowerTarget,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Largest supported register; dense 2^N x 2^N storage beyond this is not
/// reasonable on a workstation.
pub const MAX_QUBITS: usize = 10;
