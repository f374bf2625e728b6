use thiserror::Error;

/// Errors raised by the regularization and product machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported derivative order {order} (maximum {max})")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("mollifier exponent m = {0} must be even")]
    OddExponent(u32),

    #[error("mollifier exponent m = {0} is outside the supported range 0..=16")]
    ExponentOutOfRange(u32),

    #[error("moment A_{j} diverges for m = {m} (requires m >= j)")]
    DivergentMoment { m: u32, j: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("z = 0 lies on the support of the distribution")]
    OnSupport,

    #[error("outside validity: {0}")]
    OutsideValidity(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid literal: {0}")]
    Parse(String),

    #[error(
        "numeric failure: {message} (partial value {partial_value:e}, error estimate {error_estimate:e}, {evaluations} evaluations)"
    )]
    Numeric {
        message: String,
        partial_value: f64,
        error_estimate: f64,
        evaluations: usize,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn outside_validity(msg: impl Into<String>) -> Self {
        Error::OutsideValidity(msg.into())
    }

    /// True for errors caused by the caller's parameters rather than by the
    /// numerics.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Numeric { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
