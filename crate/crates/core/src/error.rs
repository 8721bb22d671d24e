use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("symbol is not finite at frequency {xi:?}")]
    NonFiniteSymbol { xi: Vec<f64> },

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("zero field")]
    ZeroField,

    #[error("velocity |v| = {speed} is outside the admissible range |v| < 1")]
    Supersonic { speed: f64 },

    #[error("exponent p = {p} outside the admissible range for d = {dim}")]
    InvalidExponent { p: f64, dim: usize },

    #[error("iteration collapsed to the zero field after {iters} iterations")]
    TrivialLimit { iters: usize },

    #[error("iteration diverged after {iters} iterations: {reason}")]
    Divergence { iters: usize, reason: String },

    #[error("profile did not converge (residual {residual:e} after {iters} iterations)")]
    NotConverged { residual: f64, iters: usize },

    #[error("resampling loses {lost:e} of the field energy (tolerance {tol:e})")]
    ResolutionLoss { lost: f64, tol: f64 },

    #[error("time {0} is not a snapshot time of the trajectory")]
    TimeNotInTrajectory(f64),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("field file: {0}")]
    Format(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
