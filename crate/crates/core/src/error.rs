use thiserror::Error;

/// Errors raised by measure construction and the energy functionals.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A parameter lies outside the range where the functional is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Coincident atoms whose weights are not both nonnegative.
    #[error("undefined: {0}")]
    Undefined(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
