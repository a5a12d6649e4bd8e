use thiserror::Error;

/// Errors produced by the state, invariant, orbit and monogamy routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("excitation count {l} invalid for {n} qubits (need 1 <= l <= n-1)")]
    Excitation { n: usize, l: usize },

    #[error("invalid qubit positions: {0}")]
    Positions(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("{what}: {value} out of range {lo}..={hi}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },

    #[error("parity mismatch: {0}")]
    Parity(String),

    #[error("operator {index} is not invertible enough: |det| = {det_abs:e} < {floor:e}")]
    Singular {
        index: usize,
        det_abs: f64,
        floor: f64,
    },

    #[error("not a valid density matrix: {0}")]
    Density(String),

    #[error("malformed state file: {0}")]
    Format(String),

    #[error("numerical consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
