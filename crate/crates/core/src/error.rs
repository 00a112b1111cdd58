use thiserror::Error;

/// Errors raised while reading, generating or checking instances.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("invalid generator request: {0}")]
    Generator(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
