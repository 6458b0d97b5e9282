use thiserror::Error;

/// Error classes shared by every module. The CLI maps each class to a
/// distinct exit code, so variants are grouped by class rather than by the
/// operation that produced them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("resource budget exceeded: {what} requires {required}, budget is {budget}")]
    Resource {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("numerical failure: {what} (residual {residual:e})")]
    Numerical { what: String, residual: f64 },

    #[error("no k <= {k_max} suffices")]
    BoundExceeded { k_max: usize },

    #[error("adversary fault: {0}")]
    AdversaryFault(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse class of an error, used for exit codes and assertions in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    Precondition,
    Resource,
    Numerical,
    Other,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_) => ErrorClass::InvalidInput,
            Error::Precondition(_) => ErrorClass::Precondition,
            Error::Resource { .. } => ErrorClass::Resource,
            Error::BoundExceeded { .. } => ErrorClass::Resource,
            Error::Numerical { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Other,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
