use thiserror::Error;

/// Error type shared by the whole crate.
///
/// `Usage` maps to exit code 2 in the CLI, `Verification` to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("resource limit exceeded: {0}")]
    Limit(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn limit(msg: impl Into<String>) -> Error {
    Error::Limit(msg.into())
}
