use thiserror::Error;

/// Errors raised by the semialgebra and matrix engines.
///
/// `Inconclusive` is not a failure of the engine: it marks a question that a
/// bounded search could not settle either way.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not a member: {0}")]
    NotMember(String),
    #[error("inconclusive within bounds: {0}")]
    Inconclusive(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn inconclusive(msg: impl Into<String>) -> Self {
        Error::Inconclusive(msg.into())
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
