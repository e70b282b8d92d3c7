use bkm_grid::{lp_norm, Generator, Grid, SampledFunction};
use bkm_kakeya::{rect_average, DirectionSet, KakeyaMaximal, Rectangle};

use crate::{covers, ExtremalError, LowerBoundCheck, Result};

pub const DEFAULT_ALPHA_C: f64 = 0.25;

/// `f_N = x^{−1/p} χ_{[3,N)}`, `g_N = x^{−1/p′} χ_{[3,N)}` and the
/// directional maximal function for the single direction `(1, α)`.
#[derive(Debug, Clone)]
pub struct AlphaExperiment {
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub f: SampledFunction,
    pub g: SampledFunction,
    pub profile: SampledFunction,
    pub l1: f64,
    pub norm_f: f64,
    pub norm_g: f64,
    /// `log(N/3)`, the closed form of `‖f_N‖_p ‖g_N‖_{p′}`.
    pub closed_form_norms: f64,
    /// `‖𝓜(f_N, g_N)‖₁ / (‖f_N‖_p ‖g_N‖_{p′})` with sampled norms.
    pub ratio: f64,
}

fn pair(n: usize, p: f64, grid: Grid) -> Result<(SampledFunction, SampledFunction)> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(ExtremalError::BadParameter { name: "p", value: p });
    }
    if n < 8 {
        return Err(ExtremalError::BadParameter { name: "N", value: n as f64 });
    }
    covers(&grid, 0.0, n as f64 + 1.0)?;
    let q = p / (p - 1.0);
    let make = |a: f64| Generator::PowerCut { a, lo: 3.0, hi: n as f64 }.sample(grid);
    Ok((make(-1.0 / p)?, make(-1.0 / q)?))
}

/// The ratio for an arbitrary slope `α`.
pub fn alpha_ratio(n: usize, alpha: f64, p: f64, grid: Grid) -> Result<AlphaExperiment> {
    if !alpha.is_finite() {
        return Err(ExtremalError::BadParameter { name: "alpha", value: alpha });
    }
    let (f, g) = pair(n, p, grid)?;
    let dirs = DirectionSet::from_alpha(alpha)?;
    let profile = KakeyaMaximal::new(&f, &g)?.directional_profile(&dirs);
    let l1 = lp_norm(&profile, 1.0)?;
    let norm_f = lp_norm(&f, p)?;
    let norm_g = lp_norm(&g, p / (p - 1.0))?;
    Ok(AlphaExperiment {
        n,
        p,
        alpha,
        f,
        g,
        profile,
        l1,
        norm_f,
        norm_g,
        closed_form_norms: (n as f64 / 3.0).ln(),
        ratio: l1 / (norm_f * norm_g),
    })
}

/// [`alpha_ratio`] at `α_N = 1 − c/N`.
pub fn alpha_near_one_experiment(n: usize, c: f64, p: f64, grid: Grid) -> Result<AlphaExperiment> {
    if !(c > 0.0 && c <= 0.5) {
        return Err(ExtremalError::BadParameter { name: "c", value: c });
    }
    alpha_ratio(n, 1.0 - c / n as f64, p, grid)
}

/// The rectangle of eccentricity `N` along `(1, α_N)` with `(x, x)` and
/// `(1, 1 + c(x − 1)/N)` as the ends of its upper long side.
pub fn alpha_witness(n: usize, c: f64, x: f64) -> Result<Rectangle> {
    let hi = n as f64;
    if !(x > 2.0 && x < hi) {
        return Err(ExtremalError::OutOfRange { x, lo: 2.0, hi });
    }
    let a = [1.0, 1.0 + c * (x - 1.0) / hi];
    let d = [x - a[0], x - a[1]];
    let len = d[0].hypot(d[1]);
    let u = [d[0] / len, d[1] / len];
    let wid = len / hi;
    let c0 = [0.5 * (x + a[0]) + 0.5 * wid * u[1], 0.5 * (x + a[1]) - 0.5 * wid * u[0]];
    Ok(Rectangle::new(c0, u, len, wid)?)
}

/// Averages of [`alpha_witness`] rectangles against `log x / x`, with
/// `c = N(1 − α)`.
pub fn alpha_witness_check(exp: &AlphaExperiment, xs: &[f64]) -> Result<LowerBoundCheck> {
    let c = exp.n as f64 * (1.0 - exp.alpha);
    let samples = xs
        .iter()
        .map(|&x| {
            let r = alpha_witness(exp.n, c, x)?;
            Ok((x, rect_average(&exp.f, &exp.g, &r), x.ln() / x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LowerBoundCheck::fit(&samples))
}
