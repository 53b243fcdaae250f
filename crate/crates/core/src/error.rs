use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// The variants line up with the CLI exit codes: `Domain` and
/// `PromiseViolation` are parameter problems, `Miss` and `Unresolved` are
/// verification outcomes, `Capacity` is a desk-scale bound being exceeded.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("promise violation: {0}")]
    PromiseViolation(String),
    /// A sampled run produced no verified answer; callers are expected to retry.
    #[error("retryable miss: {0}")]
    Miss(String),
    #[error("unresolved: {0}")]
    Unresolved(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    /// True for errors a caller should answer by running another trial.
    pub fn is_retryable(&self) -> bool {
        matches!(self, Error::Miss(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
