use bkm_grid::{GridError, SampledFunction};
use rayon::prelude::*;

use crate::Result;

/// Ratio of consecutive radii in the `t` ladder `h · 2^{j/4}`, `j >= -4`.
const LADDER_STEP: f64 = 1.189_207_115_002_721; // 2^{1/4}

/// `∫_a^b |f(x − τ)| |g(x − ατ)| dτ` for step functions, exact: the
/// integrand is constant between consecutive breakpoints of either factor.
fn segment_integral(f: &SampledFunction, g: &SampledFunction, x: f64, alpha: f64, a: f64, b: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let (gf, gg) = (f.grid(), g.grid());
    // Breakpoint τ-values of f(x − τ) and g(x − ατ) inside (a, b).
    let next_f = |tau: f64| -> f64 {
        let u = x - tau;
        let k = ((u - gf.lo()) / gf.h()).ceil() - 1.0;
        x - (gf.lo() + k * gf.h())
    };
    let next_g = |tau: f64| -> f64 {
        if alpha == 0.0 {
            return f64::INFINITY;
        }
        let u = x - alpha * tau;
        let node = if alpha > 0.0 {
            gg.lo() + (((u - gg.lo()) / gg.h()).ceil() - 1.0) * gg.h()
        } else {
            gg.lo() + (((u - gg.lo()) / gg.h()).floor() + 1.0) * gg.h()
        };
        (x - node) / alpha
    };
    let mut tau = a;
    let mut total = 0.0;
    while tau < b {
        let mut next = b.min(next_f(tau)).min(next_g(tau));
        if !(next > tau) {
            // Rounding put τ on a breakpoint: step one ulp-scale past it.
            next = (tau + 1e-12 * (1.0 + tau.abs())).min(b);
        }
        let mid = 0.5 * (tau + next);
        let v = f.value_at(x - mid).abs() * g.value_at(x - alpha * mid).abs();
        total += v * (next - tau);
        tau = next;
    }
    total
}

fn t_ladder_end(f: &SampledFunction, g: &SampledFunction, x: f64, alpha: f64) -> f64 {
    let (gf, gg) = (f.grid(), g.grid());
    let mut t = (x - gf.lo()).abs().max((gf.hi() - x).abs());
    if alpha != 0.0 {
        t = t.max((x - gg.lo()).abs().max((gg.hi() - x).abs()) / alpha.abs());
    }
    t
}

fn lacey_at(f: &SampledFunction, g: &SampledFunction, alpha: f64, x: f64) -> f64 {
    let h = f.h();
    let end = t_ladder_end(f, g, x, alpha);
    let mut best = 0.0f64;
    let mut t_prev = 0.0;
    let mut acc = 0.0;
    let mut t = 0.5 * h;
    loop {
        acc += segment_integral(f, g, x, alpha, t_prev, t) + segment_integral(f, g, x, alpha, -t, -t_prev);
        best = best.max(acc / (2.0 * t));
        if t >= end {
            break;
        }
        t_prev = t;
        t *= LADDER_STEP;
    }
    best
}

/// `𝓜_α(f, g)(x) = sup_t (1/2t) ∫_{−t}^{t} |f(x − τ) g(x − ατ)| dτ` over the
/// ladder `t = h · 2^{j/4}`, `j >= -4`, continued until both factors' windows are
/// covered.
pub fn lacey_maximal(f: &SampledFunction, g: &SampledFunction, alpha: f64, x: f64) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(crate::KakeyaError::BadParameter { name: "alpha", value: alpha });
    }
    Ok(lacey_at(f, g, alpha, x))
}

/// [`lacey_maximal`] at every centre of `f`'s grid.
pub fn lacey_profile(f: &SampledFunction, g: &SampledFunction, alpha: f64) -> Result<SampledFunction> {
    if f.grid() != g.grid() {
        return Err(GridError::GridMismatch.into());
    }
    if !alpha.is_finite() {
        return Err(crate::KakeyaError::BadParameter { name: "alpha", value: alpha });
    }
    let grid = *f.grid();
    let vals: Vec<f64> = (0..grid.n()).into_par_iter().map(|i| lacey_at(f, g, alpha, grid.center(i))).collect();
    Ok(SampledFunction::new(grid, vals)?)
}
