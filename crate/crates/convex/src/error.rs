use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvexError {
    #[error("malformed domain spec `{spec}`: {reason}")]
    Malformed { spec: String, reason: String },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("domain is not normalized: needs B(0,4) inside, inradius is {0}")]
    NotNormalized(f64),
    #[error("scale must be positive, got {0}")]
    BadScale(f64),
    #[error("delta must lie in the open interval ({lo}, {hi}), got {got}")]
    BadDelta { lo: f64, hi: f64, got: f64 },
    #[error("need at least {need} scales spanning three octaves, got {got}")]
    TooFewScales { need: usize, got: usize },
    #[error("chart derivative is not monotone near t = {0}")]
    NotConvex(f64),
    #[error("smoothing level must be at least 2, got {0}")]
    SmoothingLevel(u32),
    #[error("smoothing needs a disc or polygon")]
    SmoothingInput,
    #[error("covering failed at delta = {0}")]
    CoverFailed(f64),
}
