use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter failed validation before any work was done.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value exceeds the range a structure was built for.
    #[error("{what} {value} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    /// The requested instance is larger than the exhaustive search cap.
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    /// An invariant the code relies on was observed to fail. Never expected.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed input data (set files, config files).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
