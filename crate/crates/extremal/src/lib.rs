//! Explicit inputs on which the Kakeya-type maximal operators are large,
//! together with the rectangles that certify it.
//!
//! Each lower bound `value(t) >= c·shape(t)` is checked with one constant
//! `c` fitted at the smallest parameter and then required at every larger
//! one (see [`LowerBoundCheck`]).

mod alpha;
mod bilinear;
mod product;

use std::fmt::Write as _;

use thiserror::Error;

pub use alpha::{alpha_near_one_experiment, alpha_ratio, alpha_witness, alpha_witness_check, AlphaExperiment, DEFAULT_ALPHA_C};
pub use bilinear::{closed_form_norm, extremal_pair_bilinear, pointwise_lower_bound_witness, witness_check, ExtremalPair, PointWitness};
pub use product::{fan_rectangle, product_extremal_linear, radial_rectangle, FanRow, ProductExtremal};

#[derive(Debug, Error)]
pub enum ExtremalError {
    #[error("invalid {name} = {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("grid window [{lo}, {hi}] does not cover [{need_lo}, {need_hi}]")]
    WindowTooSmall { lo: f64, hi: f64, need_lo: f64, need_hi: f64 },
    #[error("grid spacing {h} is coarser than 1/4")]
    TooCoarse { h: f64 },
    #[error("x = {x} is outside ({lo}, {hi})")]
    OutOfRange { x: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Grid(#[from] bkm_grid::GridError),
    #[error(transparent)]
    Kakeya(#[from] bkm_kakeya::KakeyaError),
}

pub type Result<T> = std::result::Result<T, ExtremalError>;

pub(crate) fn covers(grid: &bkm_grid::Grid, need_lo: f64, need_hi: f64) -> Result<()> {
    if grid.lo() > need_lo || grid.hi() < need_hi {
        return Err(ExtremalError::WindowTooSmall { lo: grid.lo(), hi: grid.hi(), need_lo, need_hi });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub param: f64,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Fraction of `value/shape` at the smallest parameter taken as the constant.
pub const FIT_MARGIN: f64 = 0.5;

/// `value >= c·shape` row by row, with `c = FIT_MARGIN · value/shape` at the
/// smallest parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundCheck {
    pub c: f64,
    /// `min value/shape` over all rows.
    pub min_ratio: f64,
    pub rows: Vec<BoundRow>,
    pub holds: bool,
}

impl LowerBoundCheck {
    /// `samples` are `(param, value, shape)`; rows come out sorted by param.
    pub fn fit(samples: &[(f64, f64, f64)]) -> Self {
        let mut s = samples.to_vec();
        s.sort_by(|a, b| a.0.total_cmp(&b.0));
        let c = s.first().map_or(0.0, |&(_, v, shape)| FIT_MARGIN * v / shape);
        let min_ratio = s.iter().map(|&(_, v, shape)| v / shape).fold(f64::INFINITY, f64::min);
        let rows: Vec<BoundRow> = s
            .iter()
            .map(|&(param, value, shape)| {
                let bound = c * shape;
                BoundRow { param, value, bound, holds: value >= bound * (1.0 - 1e-12) }
            })
            .collect();
        let holds = c > 0.0 && rows.iter().all(|r| r.holds);
        Self { c, min_ratio, rows, holds }
    }

    /// CSV with header `n,param,value,bound,pass`.
    pub fn to_csv(&self, n: usize) -> String {
        let mut s = String::from("n,param,value,bound,pass\n");
        for r in &self.rows {
            let _ = writeln!(s, "{n},{},{},{},{}", r.param, r.value, r.bound, r.holds);
        }
        s
    }
}
