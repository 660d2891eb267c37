use thiserror::Error;

/// Errors surfaced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecipError {
    /// Input has the wrong shape (degree, parity, palindromy, dimension).
    #[error("shape error: {0}")]
    Shape(String),
    /// Input lies outside the domain of the operation (zero polynomial, bad prime, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The reciprocal polynomial is not separable: g(2) g(-2) disc g = 0.
    #[error("separability error: {0}")]
    Separability(String),
    /// A computation exceeded its budget (enumeration size, factoring effort, time).
    #[error("resource error: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for RecipError {
    fn from(e: std::io::Error) -> Self {
        RecipError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for RecipError {
    fn from(e: serde_json::Error) -> Self {
        RecipError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, RecipError>;
