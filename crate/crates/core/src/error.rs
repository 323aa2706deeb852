//! Error type shared by all estimation routines.

use thiserror::Error;

/// Errors produced by the estimators, bandwidth selectors and simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bandwidth must be positive, got {0}")]
    NonPositiveBandwidth(f64),

    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("c0 must lie in (0, 1], got {0}")]
    InvalidC0(f64),

    #[error("sample must contain at least {min} observations, got {got}")]
    TooFewObservations { min: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("trim box bound lower[{index}] = {lower} is not below upper[{index}] = {upper}")]
    InvalidTrimBox {
        index: usize,
        lower: f64,
        upper: f64,
    },

    #[error("kernel derivative order {0} unsupported (available: 1..=3)")]
    UnsupportedDerivativeOrder(u32),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("empty trim set: no usable observations for density estimation")]
    EmptyTrimSet,

    #[error("trim probability must lie in (0, 1], got {0}")]
    InvalidTrimProbability(f64),

    #[error("quadrature did not converge, achieved residual {residual}")]
    QuadratureNotConverged { residual: f64 },

    #[error("{excluded} of {reps} replicates had an empty usable set (limit {limit})")]
    TooManyExcludedReplicates {
        excluded: usize,
        reps: usize,
        limit: usize,
    },

    #[error("replicate count must be at least {min}, got {got}")]
    TooFewReplicates { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
