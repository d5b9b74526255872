use thiserror::Error;

/// Errors raised by the library. Analysis verdicts are never errors; these
/// only signal malformed input or a violated operation contract.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called with arguments outside its contract
    /// (mismatched degrees, odd degree where an even one is required, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A mathematical precondition of an analysis does not hold
    /// (e.g. the polynomial is not nonnegative, the form is not rank-one convex).
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: msg.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
