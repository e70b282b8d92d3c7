use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("invalid grid: lo={lo}, hi={hi}, n={n}")]
    InvalidGrid { lo: f64, hi: f64, n: usize },
    #[error("exponent must be positive, got {0}")]
    NonPositiveExponent(f64),
    #[error("maximal exponent must be at least 1, got {0}")]
    MaximalExponent(f64),
    #[error("values length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed function spec `{spec}`: {reason}")]
    Malformed { spec: String, reason: String },
    #[error("parameter out of range in `{spec}`: {reason}")]
    OutOfRange { spec: String, reason: String },
    #[error("functions live on different grids")]
    GridMismatch,
}
