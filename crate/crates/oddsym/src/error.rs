use thiserror::Error;

/// Errors reported by the numerical kernels and harnesses.
#[derive(Debug, Error)]
pub enum OddsymError {
    /// A precondition of an operation was violated by the input.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A quantity could not be resolved at the requested tolerance.
    /// Carries a human-readable margin diagnostic.
    #[error("unresolved at tolerance: {0}")]
    Unresolved(String),

    /// The spectrum of PSP on ran(P) touches zero; the Riesz splitting
    /// hypothesis fails.
    #[error("no spin split: {0}")]
    NoSpinSplit(String),

    /// Backend linear algebra failure (non-convergence and the like).
    #[error("linear algebra backend: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, OddsymError>;

impl OddsymError {
    pub fn contract(msg: impl Into<String>) -> Self {
        OddsymError::Contract(msg.into())
    }

    pub fn unresolved(msg: impl Into<String>) -> Self {
        OddsymError::Unresolved(msg.into())
    }
}
