use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invariant failed: {0}")]
    Invariant(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("fit rejected: {0}")]
    FitRejected(String),
}

pub type Result<T> = std::result::Result<T, Error>;
