use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("wrong ground set: expected {expected}, got {got}")]
    WrongGround { expected: String, got: String },
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: String, size: usize, cap: usize },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn cap_check(what: &str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what: what.to_string(), size, cap })
    } else {
        Ok(())
    }
}
