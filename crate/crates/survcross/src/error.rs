//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid parameter values, configuration, or preconditions.
    #[error("validation: {0}")]
    Validation(String),

    /// Mathematically degenerate or singular input (equal times, equal
    /// failure probabilities, singular scenario solve, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Malformed CSV input; `line` is 1-based and counts the header.
    #[error("csv line {line}: {msg}")]
    Csv { line: u64, msg: String },

    /// An iterative routine hit its iteration cap. Carries the last iterate.
    #[error("no convergence after {iterations} iterations (lambda={lambda:e}, k={k}, grad_norm={grad_norm:e})")]
    NonConvergence {
        iterations: usize,
        lambda: f64,
        k: f64,
        grad_norm: f64,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}
