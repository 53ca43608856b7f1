use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid degree sequence: {0}")]
    InvalidDegrees(String),

    #[error("invalid tree degree sequence: {0}")]
    InvalidTreeDegrees(String),

    #[error("x is not suitable for d: {0}")]
    NotSuitable(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid Prüfer code: {0}")]
    InvalidCode(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("no simple graph found after {0} configuration-model attempts")]
    RetryLimit(u64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
