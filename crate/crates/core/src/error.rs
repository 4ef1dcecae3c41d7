use thiserror::Error;

/// Errors raised by the numerical library.
///
/// Validation failures carry enough context to name the violated
/// precondition; the CLI maps them to exit code 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("invalid mode index {index} for a {modes}-mode state")]
    InvalidMode { index: usize, modes: usize },

    #[error("empty mode selection")]
    EmptySelection,

    #[error("expected a {expected}-mode state, got {actual} modes")]
    ModeCount { expected: usize, actual: usize },

    #[error("unphysical resource: {0}")]
    UnphysicalResource(String),

    #[error("channel is not completely positive: {0}")]
    NotCompletelyPositive(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigenvalue computation failed")]
    Eigen,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
