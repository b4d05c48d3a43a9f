use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the set an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),
    /// An index or degree is out of bounds.
    #[error("range error: {0}")]
    Range(String),
    /// An ordering precondition (such as majorization) does not hold.
    #[error("order error: {0}")]
    Order(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
