//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: dimension mismatches, invalid shapes, bad values.
    #[error("argument error: {0}")]
    Argument(String),

    /// A documented operation precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested object is outside the supported set (e.g. an unknown
    /// built-in algebra). The caller may supply the data explicitly instead.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Numerical breakdown: defective eigenstructure, rank decisions that do
    /// not add up, non-convergent factorizations.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A parity-specific transversality check was invoked on the wrong shape.
    #[error("wrong condition: {0}")]
    WrongCondition(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
