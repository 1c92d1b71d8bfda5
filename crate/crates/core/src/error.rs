//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by validation and by resource-bounded computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |M - M\u{2020}| entry = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue = {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("vector norm is {norm}, expected 1")]
    NotUnitNorm { norm: f64 },

    #[error("basis is not orthonormal (max Gram deviation = {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("Kraus completeness sum deviates from identity by {deviation:e}")]
    NotTracePreserving { deviation: f64 },

    #[error("probabilities are invalid: {reason}")]
    InvalidProbabilities { reason: String },

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("family members have unequal B-marginals (max deviation = {deviation:e})")]
    UnequalMarginals { deviation: f64 },

    #[error("ratio is undefined: both capacities vanish")]
    UndefinedRatio,

    #[error("strongly typical set is empty for the requested (n, delta)")]
    EmptyTypicalSet,

    #[error("eigensolver failed to converge")]
    EigNoConvergence,

    #[error("resource budget exceeded: {what}")]
    BudgetExceeded { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
