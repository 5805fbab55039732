use std::fmt;

/// Error type shared by all heinzlab operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on shapes, ranges, or hypotheses was violated.
    Invalid(String),
    /// A scalar function was evaluated outside its domain (e.g. log of a
    /// nonpositive eigenvalue).
    Domain(String),
    /// An iterative kernel failed to converge or produced an unusable
    /// residual; the message names the residual.
    Numerical(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
