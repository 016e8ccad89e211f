use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported root datum: {0}")]
    Unsupported(String),
    #[error("{what} exceeds the cap of {cap} (needed {needed})")]
    CapExceeded { what: String, cap: u64, needed: u64 },
    #[error("level is not Weyl-invariant: {0}")]
    NotInvariant(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
