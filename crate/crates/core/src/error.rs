//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: need at least {1}")]
    InvalidDimension(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid spin: 2j = {0} must be a positive integer")]
    InvalidSpin(f64),

    #[error("invalid grid size: {0}")]
    InvalidGridSize(String),

    #[error("grid mismatch: functions live on different grids")]
    GridMismatch,

    #[error("point outside chart domain: {0}")]
    OutsideChart(String),

    #[error("trajectory left the chart domain at tau = {0}")]
    TrajectoryLeftDomain(f64),

    #[error("device kind not usable here: {0}")]
    DeviceKind(String),

    #[error("reproducing kernel diagonal departs from 1 by {0:.3e}")]
    KernelDiagonal(f64),

    #[error("sampling inefficiency: acceptance rate {0:.3e} below 1e-4")]
    SamplingInefficiency(f64),

    #[error("embedded basis too ill-conditioned: cond = {0:.3e}")]
    IllConditionedBasis(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("serialization: {0}")]
    Serialization(String),
}
