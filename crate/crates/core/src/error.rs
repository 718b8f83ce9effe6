use thiserror::Error;

/// Errors raised by the library. Each kind maps to one CLI exit code.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("cap exhausted: {0}")]
    CapExceeded(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) => 1,
            Error::Inapplicable(_) => 2,
            Error::CapExceeded(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
