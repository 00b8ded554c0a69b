use thiserror::Error;

/// Errors raised by the reconstruction toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: entries ({row},{col}) and ({col},{row}) differ by {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("negative eigenvalue {value:e} outside the PSD tolerance")]
    NegativeEigenvalue { value: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("basis index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("infeasible measurement record: {0}")]
    Infeasible(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing Pauli means for: {}", .0.join(", "))]
    IncompleteData(Vec<String>),
    #[error("calibration matrix is ill-conditioned (pivot {pivot:e})")]
    IllConditioned { pivot: f64 },
    #[error("{method} solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
