use thiserror::Error;

/// Errors raised by the library.
///
/// "Negative" answers (a parameter outside the region, a failed domination
/// test, a condition that is not established) are ordinary return values, not
/// errors. Errors are reserved for malformed input and violated preconditions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    IndexOutOfRange { vertex: usize, n: usize },

    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameter lies outside the Shearer region: {0}")]
    OutsideRegion(String),

    #[error("parameter is already in the interior of the Shearer region")]
    AlreadyInterior,

    #[error("component containing vertex {0} has no exterior neighbour")]
    NoEscape(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("minoration violated at step {step}: conditional {conditional} < {required}")]
    MinorationViolated {
        prefix: Vec<bool>,
        step: usize,
        conditional: f64,
        required: f64,
    },

    #[error("signed measure: configuration {config:#b} has mass {mass}")]
    SignedMeasure { config: usize, mass: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDist(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
