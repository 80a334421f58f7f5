use thiserror::Error;

/// Errors raised by the numerical and exact routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("no convergence in {what} within {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("pole of {what} at {at}")]
    Pole { what: &'static str, at: f64 },

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("method {method} unavailable for {context}")]
    MethodUnavailable { method: String, context: String },

    #[error("slow convergence in {what}: error estimate {err:e} exceeds tolerance {tol:e}")]
    SlowConvergence { what: &'static str, err: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, WalkError>;

pub(crate) fn domain(msg: impl Into<String>) -> WalkError {
    WalkError::Domain(msg.into())
}
