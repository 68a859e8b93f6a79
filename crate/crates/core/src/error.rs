use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("({x},{y}) is not a solution of {instance}")]
    NotASolution { instance: String, x: u32, y: u32 },

    #[error("reduction failed: {0}")]
    ReductionFailed(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid checkpoint: {0}")]
    InvalidCheckpoint(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
