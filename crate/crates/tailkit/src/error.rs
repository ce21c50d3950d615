use thiserror::Error;

/// Errors shared by all tailkit modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("enumeration guard exceeded: {0}")]
    Capacity(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid certificate: required count {required}, achieved {achieved}")]
    Certificate { required: f64, achieved: u64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
