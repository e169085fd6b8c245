use thiserror::Error;

/// Errors raised by the evaluators and the quadrature engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Adaptive subdivision ran out of budget. The best estimate is kept so
    /// callers can decide whether it is usable.
    #[error("quadrature did not converge: value {value:e}, error estimate {err_estimate:e} after {subdivisions} subdivisions")]
    ConvergenceFailure { value: f64, err_estimate: f64, subdivisions: usize },

    #[error("integrand returned a non-finite value at {at}")]
    Evaluation { at: f64 },

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("evaluation point lies at the pole (scaled distance {0:e})")]
    Pole(f64),

    #[error("loss of precision: {0}")]
    Precision(String),

    #[error("blocked precondition: {0}")]
    BlockedPrecondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
