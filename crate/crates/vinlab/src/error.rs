use thiserror::Error;

/// Errors surfaced by the counting and analytic operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system description: {0}")]
    InvalidSpec(String),

    #[error("predicted table size {predicted} entries exceeds budget of {budget} entries")]
    BudgetExceeded { predicted: u128, budget: u128 },

    #[error("enumeration too large: {0}")]
    TooLarge(String),

    #[error("quadrature did not converge: relative change {change:.3e} after doubling")]
    NoConvergence { change: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
