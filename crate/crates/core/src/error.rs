use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A mathematical precondition failed (division by zero, singular constant
    /// term, zero mean, constant term in a polynomial, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed textual input. `offset` is a byte offset into the input.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    /// A request that names something that does not exist.
    #[error("usage error: {0}")]
    Usage(String),
    /// A size guard was exceeded (partition enumeration, word length, order).
    #[error("limit exceeded: {0}")]
    Limit(String),
    /// An internal invariant was violated.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn limit(msg: impl Into<String>) -> Self {
        Error::Limit(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse { offset, message: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
