use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not positive-definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotSpd { min_eigenvalue: f64 },

    #[error("matrix is singular (smallest eigenvalue {0:e})")]
    Singular(f64),

    #[error("point outside the chart domain: {0}")]
    Chart(String),

    #[error("quadrature under-resolved: {0}")]
    Resolution(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
