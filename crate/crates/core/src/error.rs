use std::fmt;

/// Errors produced by the library.
///
/// The variants line up with the CLI exit codes: parameter problems map to
/// `2`, malformed input to `65`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A size or range guard was violated (desk-scale caps included).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Two polynomials or circuits live over different coefficient rings.
    #[error("incompatible rings: {0}")]
    IncompatibleRing(String),
    /// A point or assignment has the wrong number of coordinates.
    #[error("arity mismatch: expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    /// An operation was called outside its contract (e.g. a multi-output
    /// circuit where a single output is required).
    #[error("contract violation: {0}")]
    Contract(String),
    /// Text input could not be parsed.
    #[error("malformed input (line {line}): {msg}")]
    Parse { line: usize, msg: String },
    /// An internal guarantee failed. Seeing this means a bug or a falsified
    /// construction bound.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(msg: impl fmt::Display) -> Self {
        Error::Parameter(msg.to_string())
    }

    pub(crate) fn parse(line: usize, msg: impl fmt::Display) -> Self {
        Error::Parse {
            line,
            msg: msg.to_string(),
        }
    }
}
