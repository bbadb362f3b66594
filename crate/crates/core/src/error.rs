use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("requested dimension {requested} exceeds cap {cap}")]
    Size { requested: usize, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
