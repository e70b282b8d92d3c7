use bkm_grid::{lp_norm, weak_lp_quasinorm, SampledFunction};
use bkm_kakeya::{lacey_profile, DirectionSet, KakeyaMaximal, SearchSpace};

use crate::{EstimatorError, Result};

/// Hölder exponents `(p₁, p₂, p₃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl Exponents {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Self {
        Self { p1, p2, p3 }
    }

    /// `p₃` from `1/p₃ = 1/p₁ + 1/p₂`.
    pub fn holder(p1: f64, p2: f64) -> Self {
        Self { p1, p2, p3: 1.0 / (1.0 / p1 + 1.0 / p2) }
    }
}

/// A maximal operator with all its parameters fixed.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    FixedScale { n: usize, delta: f64 },
    Full { n: usize },
    Directional(DirectionSet),
    Lacey { alpha: f64 },
}

impl Operator {
    /// The operator on every cell of the common grid.
    pub fn profile(&self, f: &SampledFunction, g: &SampledFunction, space: SearchSpace) -> Result<SampledFunction> {
        Ok(match self {
            Operator::FixedScale { n, delta } => KakeyaMaximal::with_space(f, g, space)?.fixed_scale_profile(*n, *delta)?,
            Operator::Full { n } => KakeyaMaximal::with_space(f, g, space)?.full_profile(*n)?,
            Operator::Directional(dirs) => KakeyaMaximal::with_space(f, g, space)?.directional_profile(dirs),
            Operator::Lacey { alpha } => lacey_profile(f, g, *alpha)?,
        })
    }
}

/// `‖𝓜(f, g)‖_{p₃} / (‖f‖_{p₁} ‖g‖_{p₂})`, with the weak quasinorm on top
/// when `weak` is set (at `p₃ = ∞` the two coincide). Profiles use [`SearchSpace::sweep`].
pub fn operator_ratio(op: &Operator, f: &SampledFunction, g: &SampledFunction, exps: Exponents, weak: bool) -> Result<f64> {
    let (nf, ng) = (lp_norm(f, exps.p1)?, lp_norm(g, exps.p2)?);
    if !(nf > 0.0 && ng > 0.0) {
        return Err(EstimatorError::ZeroDenominator { f: nf, g: ng });
    }
    let m = op.profile(f, g, SearchSpace::sweep())?;
    ratio_of_profile(&m, nf * ng, exps.p3, weak)
}

pub(crate) fn ratio_of_profile(m: &SampledFunction, denominator: f64, p3: f64, weak: bool) -> Result<f64> {
    let top = if weak && p3.is_finite() { weak_lp_quasinorm(m, p3)? } else { lp_norm(m, p3)? };
    Ok(top / denominator)
}
