use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("config parse error on line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_arg(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn invalid_config(msg: impl Into<String>) -> Error {
    Error::InvalidConfiguration(msg.into())
}
