use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The argument sits on a branch cut of a principal-branch function.
    #[error("branch error: {0}")]
    Branch(String),

    /// A series or iteration did not reach its target accuracy.
    #[error("convergence error: {what} did not converge within {limit} steps")]
    Convergence { what: &'static str, limit: usize },

    /// A pole or vanishing derivative was hit.
    #[error("singular point: {0}")]
    Singular(String),

    /// A discretization parameter is unusable.
    #[error("invalid discretization: {0}")]
    Discretization(String),

    /// An internal consistency check failed.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
