use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid surface: {0}")]
    Invalid(String),
    #[error("genus {0} is below 2")]
    LowGenus(usize),
    #[error("invalid walk: {0}")]
    Walk(String),
    #[error("not contractible")]
    NotContractible,
    #[error("invalid minor operation: {0}")]
    Minor(String),
    #[error("smoothing failed: {0}")]
    Smoothing(String),
    #[error("generation failed: {0}")]
    Generate(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
