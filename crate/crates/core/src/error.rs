//! Error types shared across the library.

use thiserror::Error;

/// Everything that can go wrong when building, parsing, or analyzing
/// relations and instances.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed text in a relation, instance, or assignment file. Carries
    /// the 1-based line number where parsing failed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally valid input that violates a semantic precondition
    /// (empty support, wrong arity, non-extreme tuple, and so on).
    #[error("{0}")]
    Invalid(String),

    /// An exhaustive enumeration would exceed the configured budget.
    #[error("enumeration size {size} exceeds budget {budget}")]
    Budget { size: u128, budget: u128 },

    /// Filesystem trouble, wrapped so callers see the path.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
