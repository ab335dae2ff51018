use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Contract` names the violated precondition so a front end can report it;
/// `ResourceExhausted` signals a search or enumeration bound was hit.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("resource limit exceeded: {0}")]
    ResourceExhausted(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
