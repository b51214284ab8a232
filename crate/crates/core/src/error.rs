use thiserror::Error;

/// Errors produced by the analytic and simulation engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("stability condition violated: {0}")]
    StabilityViolation(String),

    #[error("no negative zero of the characteristic polynomial yields a valid distribution (N = {buffer})")]
    RootNotFound { buffer: usize },

    #[error("linear system for the stationary distribution is numerically singular (N = {buffer})")]
    SingularSystem { buffer: usize },

    #[error("no arrival rate in [{lo}, {hi}] satisfies the stability condition")]
    EmptyFeasibleRegion { lo: f64, hi: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
