//! Crate-wide error type.
//!
//! Errors fall into three families that the CLI maps onto distinct exit
//! codes: malformed input (`Parse`), broken operation contracts
//! (`Contract` and the structured variants), and refusals where an input
//! is well-formed but exceeds a configured resource cap.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("universe mismatch: {left} vs {right}")]
    UniverseMismatch { left: u32, right: u32 },

    #[error("variable x{var} outside universe of size {universe}")]
    VariableOutOfUniverse { var: u32, universe: u32 },

    #[error("arity mismatch: relation {relation} has arity {expected}, application has {actual} variables")]
    ArityMismatch {
        relation: String,
        expected: u32,
        actual: u32,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("enumeration over {universe} variables exceeds the cap of {cap}")]
    EnumerationCap { universe: u32, cap: u32 },

    #[error("{what} exceeds the budget of {cap}")]
    Budget { what: String, cap: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("external solver: {0}")]
    ExternalSolver(String),
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors that refuse an oversized but well-formed input.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::EnumerationCap { .. } | Error::Budget { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
