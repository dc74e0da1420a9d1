use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid Schatten exponent {0}: must satisfy 1 < p < inf")]
    InvalidExponent(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
