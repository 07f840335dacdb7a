//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value violated its argument domain (bad separation, λ ≤ 0, ...).
    #[error("invalid input: {0}")]
    InputDomain(String),

    /// Shapes or lengths that must agree did not.
    #[error("shape mismatch: {0}")]
    Structural(String),

    /// Configuration rejected before any work started.
    #[error("config error: {0}")]
    Config(String),

    /// A non-finite value appeared where the pipeline requires finite math.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A persisted file failed magic/version/length validation.
    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::InputDomain(msg.into())
    }

    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
