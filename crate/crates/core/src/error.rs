use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: u64, dim: u64 },

    #[error("{n} qubits exceeds the dense cap of {cap} qubits")]
    Capacity { n: usize, cap: usize },

    #[error("invalid bipartite split mask {mask:#x} for {n} qubits")]
    InvalidSplit { mask: u64, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error(
        "eigensolver did not converge on a {block_dim}x{block_dim} block (matrix dimension {dim})"
    )]
    EigenNoConvergence { dim: usize, block_dim: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no sign change for {what} in [{lo}, {hi}]")]
    NoSignChange { what: String, lo: f64, hi: f64 },

    #[error("unknown curve id `{0}`")]
    UnknownCurve(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: u64, right: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
