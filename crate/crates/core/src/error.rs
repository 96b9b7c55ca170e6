use thiserror::Error;

/// Errors raised by the library. Verification failures are not errors;
/// they are recorded in reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid numeration system: {0}")]
    InvalidSystem(String),

    #[error("invalid digit set: {0}")]
    InvalidDigitSet(String),

    #[error("{value} is not representable in this numeration system")]
    Unrepresentable { value: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("could not parse rational from {0:?}")]
    ParseRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
