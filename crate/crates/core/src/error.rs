//! Shared error type.
//!
//! Every fallible operation in the crate returns [`Result`]. The variants
//! distinguish the caller's problem (`InvalidArgument`), an honest "not
//! enough terms were computed" (`InsufficientPrecision`), structural
//! impossibilities (`NotInvertible`, `SingularCurve`), and internal
//! consistency failures that indicate a bug rather than bad input
//! (`Internal`).

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Error {
    /// The requested data lies at or beyond the truncation order of a series.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// A series with non-unit leading coefficient cannot be inverted over Z.
    #[error("not invertible: {0}")]
    NotInvertible(String),

    /// The caller asked for something outside the supported domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A Weierstrass model was singular where a smooth curve was required.
    #[error("singular curve: {0}")]
    SingularCurve(String),

    /// An internal cross-check failed; this is a bug, not a usage error.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn insufficient(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
