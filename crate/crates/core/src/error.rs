//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Distribution parameters violate their constraints.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Sample configuration for which an estimator is not defined.
    #[error("degenerate sample: {0}")]
    Degenerate(String),

    /// An iterative method failed to reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// The marginal density blows up at y = delta when alpha <= 1/2.
    #[error("density is infinite at y = delta for alpha <= 1/2")]
    InfiniteDensity,

    /// The delta entry of the Fisher information is infinite for alpha <= 1.
    #[error("Fisher information is infinite for alpha <= 1")]
    InfiniteInformation,

    /// Malformed or inconsistent input data.
    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
