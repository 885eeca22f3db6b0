use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty point set")]
    EmptySet,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("coordinate {value} lies outside [0, 1]")]
    OutOfDomain { value: f64 },

    #[error("operation requires a one-dimensional set or map, got dimension {0}")]
    NotOneDimensional(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("fixed-point iteration did not converge after {iterations} steps (last step {last_step:e})")]
    FixedPointNotConverged {
        iterations: usize,
        last_step: f64,
        best: Point,
    },

    #[error("attractor iteration did not converge after {iterations} steps")]
    AttractorNotConverged { iterations: usize },

    #[error("lipschitz bound {bound} is not below 1")]
    NotContractive { bound: f64 },

    #[error("construction infeasible: {0}")]
    Infeasible(String),

    #[error("rational precision budget exceeded: {0}")]
    PrecisionBudget(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
