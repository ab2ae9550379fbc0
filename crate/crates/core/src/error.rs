//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The Jacobi identity fails for the labelled basis quadruple.
    #[error(
        "Jacobi identity violated at (a, b, c, e) = ({a}, {b}, {c}, {e}): residual {residual}"
    )]
    JacobiViolation {
        a: usize,
        b: usize,
        c: usize,
        e: usize,
        residual: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The closure condition of a 2-cochain fails for the labelled triple.
    #[error("not a cocycle: cyclic sum at (a, b, c) = ({a}, {b}, {c}) is {residual}")]
    NotACocycle {
        a: usize,
        b: usize,
        c: usize,
        residual: String,
    },

    #[error("invalid structure-constant table: {0}")]
    InvalidStructure(String),

    #[error("point outside domain of {name}: {reason}")]
    DomainViolation { name: String, reason: String },

    #[error("chart {chart} does not supply {what}")]
    MissingChartData { chart: String, what: &'static str },

    #[error("chart {chart} does not carry the requested cocycle")]
    CocycleMismatch { chart: String },

    #[error("state left chart {chart}: coordinate {index} = {value}")]
    OutOfChart {
        chart: String,
        index: usize,
        value: f64,
    },

    #[error("adaptive step rejected at t = {t}: step {dt} below minimum")]
    StepRejection { t: f64, dt: f64 },

    #[error("metric is degenerate")]
    DegenerateMetric,

    #[error("catalog entry not found: {0}")]
    EntryNotFound(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
