//! Error type shared by all modelling operations.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("imputation impossible: month {month} has no observed values")]
    ImputationImpossible { month: String },

    #[error("degenerate series: sample variance is zero")]
    DegenerateSeries,

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("invalid degrees of freedom: lags_used {lags_used} must exceed fitdf {fitdf}")]
    InvalidDof { lags_used: usize, fitdf: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    /// Optimizer ran out of evaluations; carries the best point found.
    #[error("optimizer failed to converge after {evaluations} evaluations (best objective {objective})")]
    ConvergenceFailure {
        phi: Vec<f64>,
        theta: Vec<f64>,
        mean: f64,
        objective: f64,
        evaluations: usize,
    },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid ARIMA order: {0}")]
    InvalidOrder(String),
}
