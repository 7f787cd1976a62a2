use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("expected {expected} samples, found {found}")]
    SampleCount { expected: usize, found: usize },

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("invalid weight sequence: {0}")]
    InvalidWeight(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A smoothness/decay parameter sits at or below the threshold a theorem requires.
    #[error("{parameter} = {value} does not exceed the required threshold {threshold}")]
    Threshold {
        parameter: &'static str,
        value: f64,
        threshold: f64,
    },

    #[error("levels {requested} too large for grid (maximum {maximum})")]
    LevelsTooLarge { requested: usize, maximum: usize },

    #[error("kernel violation: {0}")]
    Kernel(String),

    #[error("invalid space specification: {0}")]
    Spec(String),

    #[error("symbol error: {0}")]
    Symbol(String),
}
