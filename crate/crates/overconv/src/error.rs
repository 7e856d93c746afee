use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps [`Error::Precision`] to exit code 2 and every other variant to
/// exit code 1.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A mathematical precondition does not hold (e.g. `r <= 0`, a polynomial
    /// that is not Eisenstein, an uncertified basis).
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative algorithm ran out of precision before reaching its target.
    #[error("precision exhausted: {msg} (achieved {achieved})")]
    Precision { msg: String, achieved: String },
    /// Malformed textual input.
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// Mismatched contexts or arguments.
    #[error("usage error: {0}")]
    Usage(String),
    /// An iteration whose contraction hypothesis fails.
    #[error("convergence error: {0}")]
    Convergence(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precision(msg: impl Into<String>, achieved: impl ToString) -> Self {
        Error::Precision { msg: msg.into(), achieved: achieved.to_string() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precision { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
