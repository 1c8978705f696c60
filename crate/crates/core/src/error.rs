use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// The rank pipeline has no route to the requested quantity.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("sieve system does not converge: {0}")]
    Divergent(String),
    /// Two independent computations of the same quantity disagree.
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
