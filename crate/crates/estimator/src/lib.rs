//! Empirical operator-norm ratios `‖𝓜(f, g)‖_{p₃} / (‖f‖_{p₁} ‖g‖_{p₂})`,
//! sweeps of them over `N`, and least-squares fits of growth laws.
//!
//! Ratios come from specific inputs and a lattice sup-search, so they are
//! lower bounds for operator norms.

mod fit;
mod ratio;
mod sweep;

use thiserror::Error;

pub use fit::{best_fit, growth_fit, FitResult, Model};
pub use ratio::{operator_ratio, Exponents, Operator};
pub use sweep::{growth_sweep, sweep_csv, InputFamily, OperatorKind, Resolution, SweepConfig, SweepPoint};

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("zero denominator: ‖f‖ = {f}, ‖g‖ = {g}")]
    ZeroDenominator { f: f64, g: f64 },
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("degenerate design: {0}")]
    Degenerate(&'static str),
    #[error("invalid {name} = {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error(transparent)]
    Grid(#[from] bkm_grid::GridError),
    #[error(transparent)]
    Kakeya(#[from] bkm_kakeya::KakeyaError),
    #[error(transparent)]
    Extremal(#[from] bkm_extremal::ExtremalError),
}

pub type Result<T> = std::result::Result<T, EstimatorError>;
