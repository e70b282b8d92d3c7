use std::f64::consts::FRAC_1_SQRT_2;

use bkm_grid::{lp_norm, Generator, Grid, SampledFunction};
use bkm_kakeya::{rect_average, Rectangle};

use crate::{covers, ExtremalError, LowerBoundCheck, Result};

/// `f_N = x^{−2/p₁} χ_{[3,N)}`, `g_N = x^{−2/p₂} χ_{[3,N)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalPair {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub n: usize,
    pub f: SampledFunction,
    pub g: SampledFunction,
    /// Closed-form `‖f_N‖_{p₁}` and `‖g_N‖_{p₂}`.
    pub norm_f: f64,
    pub norm_g: f64,
}

impl ExtremalPair {
    pub fn sampled_norms(&self) -> (f64, f64) {
        (lp_norm(&self.f, self.p1).unwrap_or(f64::NAN), lp_norm(&self.g, self.p2).unwrap_or(f64::NAN))
    }
}

/// `‖x^{−2/p} χ_{[3,N)}‖_p = (1/3 − 1/N)^{1/p}`, and 1 at `p = ∞`.
pub fn closed_form_norm(p: f64, n: usize) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        (1.0 / 3.0 - 1.0 / n as f64).powf(1.0 / p)
    }
}

pub fn extremal_pair_bilinear(p1: f64, p2: f64, n: usize, grid: Grid) -> Result<ExtremalPair> {
    for (name, p) in [("p1", p1), ("p2", p2)] {
        if !(p >= 1.0) {
            return Err(ExtremalError::BadParameter { name, value: p });
        }
    }
    if n < 8 {
        return Err(ExtremalError::BadParameter { name: "N", value: n as f64 });
    }
    covers(&grid, 0.0, n as f64)?;
    let make = |p: f64| Generator::PowerCut { a: -2.0 / p, lo: 3.0, hi: n as f64 }.sample(grid);
    Ok(ExtremalPair {
        p1,
        p2,
        p3: 1.0 / (1.0 / p1 + 1.0 / p2),
        n,
        f: make(p1)?,
        g: make(p2)?,
        norm_f: closed_form_norm(p1, n),
        norm_g: closed_form_norm(p2, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointWitness {
    pub x: f64,
    pub rect: Rectangle,
    pub value: f64,
}

/// The diagonal rectangle of eccentricity `N` whose short side has midpoint
/// `(4, 4)` and whose axis ends at `(x + 1, x + 1)`, with its average of
/// `f_N ⊗ g_N`.
///
/// The axis covers `y₁ ∈ [4, x + 1]`, which is what makes `(x, x)` a point of
/// the rectangle; its length is `√2 (x − 3)`.
pub fn pointwise_lower_bound_witness(pair: &ExtremalPair, x: f64) -> Result<PointWitness> {
    let hi = pair.n as f64 - 1.0;
    if !(x > 6.0 && x < hi) {
        return Err(ExtremalError::OutOfRange { x, lo: 6.0, hi });
    }
    let e = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
    let len = std::f64::consts::SQRT_2 * (x - 3.0);
    let c = [4.0 + 0.5 * len * e[0], 4.0 + 0.5 * len * e[1]];
    let rect = Rectangle::new(c, e, len, len / pair.n as f64)?;
    Ok(PointWitness { x, rect, value: rect_average(&pair.f, &pair.g, &rect) })
}

/// The witnesses at each `x` against `c/x`.
pub fn witness_check(pair: &ExtremalPair, xs: &[f64]) -> Result<(Vec<PointWitness>, LowerBoundCheck)> {
    let ws = xs.iter().map(|&x| pointwise_lower_bound_witness(pair, x)).collect::<Result<Vec<_>>>()?;
    let samples: Vec<(f64, f64, f64)> = ws.iter().map(|w| (w.x, w.value, 1.0 / w.x)).collect();
    Ok((ws, LowerBoundCheck::fit(&samples)))
}
