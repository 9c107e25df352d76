use thiserror::Error;

/// Errors raised by form construction, norm evaluation and bound computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity {arity} outside supported range [{min}, {max}]")]
    ArityOutOfRange {
        arity: usize,
        min: usize,
        max: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index:?} out of range for dims {dims:?}")]
    IndexOutOfRange { index: Vec<usize>, dims: Vec<usize> },

    #[error("size guard exceeded: {what} ({size} > {limit})")]
    SizeGuard {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("enumeration guard exceeded: sign space 2^{bits} exceeds budget 2^{limit_bits}")]
    EnumerationGuard { bits: usize, limit_bits: usize },

    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("not exactly dyadic: {0}")]
    NotDyadic(String),

    #[error("inadmissible exponent vector: {0}")]
    Inadmissible(String),

    #[error("operator norm is zero; ratio undefined")]
    ZeroNorm,

    #[error("argument {x} outside certified range [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("malformed weights: {0}")]
    MalformedWeights(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("internal identity violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
