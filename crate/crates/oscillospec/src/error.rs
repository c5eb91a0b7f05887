//! Crate-wide error type.

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration or parameters (CLI exit code 2).
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Numerical failure at runtime (CLI exit code 3).
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
