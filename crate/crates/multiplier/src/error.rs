use bkm_convex::ConvexError;
use bkm_grid::GridError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultiplierError {
    #[error("inputs live on different grids")]
    GridMismatch,
    #[error("padded length for {0} samples exceeds the supported maximum")]
    PaddingOverflow(usize),
    #[error("invalid {name}: {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("malformed symbol spec `{spec}`: {reason}")]
    Malformed { spec: String, reason: String },
    #[error("subordination needs lambda + 1 in {{1, 2, 3}}, got lambda = {0}")]
    SubordinationOrder(f64),
    #[error("quadrature did not converge at rho = {rho} (relative change {change:e})")]
    Quadrature { rho: f64, change: f64 },
    #[error("spatial window half-width {have} is smaller than 2^k_max = {need}")]
    WindowTooSmall { need: f64, have: f64 },
    #[error("imaginary residue {0:e} relative to output norm")]
    ImaginaryResidue(f64),
    #[error(transparent)]
    Domain(#[from] ConvexError),
    #[error(transparent)]
    Grid(#[from] GridError),
}
