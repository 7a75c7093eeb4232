use thiserror::Error;

/// Errors raised by the arithmetic kernels and the verification engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An intermediate value left the supported integer range.
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal consistency check failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    /// Two engines that must agree by theorem disagreed.
    #[error("theorem violation: {0}")]
    Theorem(String),
    #[error("search failed: {0}")]
    SearchFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn invariant<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invariant(msg.into()))
}
