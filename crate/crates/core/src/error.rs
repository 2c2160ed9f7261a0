use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown character {0:?} for this rulebook")]
    UnknownCharacter(char),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Failures of a mask-filling oracle.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    /// Transport failure or the model is still loading. Worth retrying.
    #[error("oracle unavailable: {0}")]
    Unavailable(String),
    /// The oracle answered but the answer does not follow the protocol.
    #[error("oracle protocol error: {0}")]
    Protocol(String),
}

impl OracleError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, OracleError::Unavailable(_))
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
