use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A p-adic quantity could not be determined at the requested precision.
    /// The caller may retry with a larger precision.
    #[error("precision error: {0}")]
    Precision(String),

    /// The job configuration violates an invariant.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// No lambda value could be resolved for a character that needs one.
    #[error("lambda unavailable for character {0}")]
    LambdaUnavailable(String),

    /// Two independent routes disagree. This signals a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    pub(crate) fn inconsistency(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }
}
