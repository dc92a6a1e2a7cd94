use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("table error: {0}")]
    Table(String),
    #[error("incomplete data: {0}")]
    Incomplete(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failure: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
