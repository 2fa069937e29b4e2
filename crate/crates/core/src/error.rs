use thiserror::Error;

/// Errors raised by the distribution library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or parameter is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive integration did not reach the requested tolerance.
    #[error("integration did not converge: estimate {estimate:e}, achieved error {error:e}, requested {requested:e}")]
    Integration { estimate: f64, error: f64, requested: f64 },

    /// An order-statistic or conditioning mapping that has no analytic form here.
    #[error("unsupported mapping: {0}")]
    Unsupported(String),

    /// A simulation exhausted its proposal budget.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Malformed configuration input.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
