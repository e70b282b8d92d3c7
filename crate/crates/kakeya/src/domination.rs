use bkm_grid::{hl_maximal, SampledFunction};

use crate::directions::DirectionSet;
use crate::lacey::lacey_profile;
use crate::search::{KakeyaMaximal, SearchSpace};
use crate::{KakeyaError, Result};

/// Denominators below this are skipped.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

/// The pointwise quantities at one grid centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationRow {
    pub x: f64,
    /// `𝓜_α(f, g)`
    pub lacey: f64,
    /// `𝓜_{𝓡^{Ω_α}}(f, g)`
    pub directional: f64,
    /// `𝓜_α(f, Mg)`
    pub lacey_maximal_g: f64,
    /// `𝓜_{𝓡_{1,N}}(f, g)`
    pub fixed_scale: f64,
    /// `M_s f · M_{s′} g`
    pub product_s: f64,
    /// `N · Mf · Mg`
    pub product_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub alpha: f64,
    pub n: usize,
    pub s: f64,
    pub rows: Vec<DominationRow>,
    /// Maxima over non-skipped points of
    /// `𝓜_α / 𝓜_{𝓡^{Ω_α}}`, `𝓜_{𝓡^{Ω_α}} / 𝓜_α(f, Mg)`,
    /// `𝓜_{𝓡_{1,N}} / (M_s f M_{s′} g)` and `𝓜_{𝓡_{1,N}} / (N Mf Mg)`.
    pub max_ratio: [f64; 4],
    /// Points skipped for each ratio because the denominator vanished.
    pub skipped: [usize; 4],
    /// Points where a numerator is positive over a vanishing denominator.
    pub unbounded: [usize; 4],
}

impl DominationRow {
    fn ratios(&self) -> [(f64, f64); 4] {
        [
            (self.lacey, self.directional),
            (self.directional, self.lacey_maximal_g),
            (self.fixed_scale, self.product_s),
            (self.fixed_scale, self.product_n),
        ]
    }
}

/// The four pointwise domination ratios at every grid centre.
pub fn domination_report(f: &SampledFunction, g: &SampledFunction, alpha: f64, n: usize, s: f64) -> Result<DominationReport> {
    domination_report_with(f, g, alpha, n, s, SearchSpace::sweep())
}

pub fn domination_report_with(f: &SampledFunction, g: &SampledFunction, alpha: f64, n: usize, s: f64, space: SearchSpace) -> Result<DominationReport> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(KakeyaError::BadParameter { name: "s", value: s });
    }
    let op = KakeyaMaximal::with_space(f, g, space)?;
    let s_conj = s / (s - 1.0);
    let lacey = lacey_profile(f, g, alpha)?;
    let directional = op.directional_profile(&DirectionSet::from_alpha(alpha)?);
    let mg = hl_maximal(g, 1.0)?;
    let lacey_mg = lacey_profile(f, &mg, alpha)?;
    let fixed = op.fixed_scale_profile(n, 1.0)?;
    let mf = hl_maximal(f, 1.0)?;
    let msf = hl_maximal(f, s)?;
    let msg = hl_maximal(g, s_conj)?;

    let grid = *f.grid();
    let rows: Vec<DominationRow> = (0..grid.n())
        .map(|i| DominationRow {
            x: grid.center(i),
            lacey: lacey.values()[i],
            directional: directional.values()[i],
            lacey_maximal_g: lacey_mg.values()[i],
            fixed_scale: fixed.values()[i],
            product_s: msf.values()[i] * msg.values()[i],
            product_n: n as f64 * mf.values()[i] * mg.values()[i],
        })
        .collect();
    let mut max_ratio = [0.0f64; 4];
    let mut skipped = [0usize; 4];
    let mut unbounded = [0usize; 4];
    for row in &rows {
        for (k, (num, den)) in row.ratios().into_iter().enumerate() {
            if den < DENOMINATOR_FLOOR {
                skipped[k] += 1;
                if num > DENOMINATOR_FLOOR {
                    unbounded[k] += 1;
                }
            } else {
                max_ratio[k] = max_ratio[k].max(num / den);
            }
        }
    }
    Ok(DominationReport { alpha, n, s, rows, max_ratio, skipped, unbounded })
}
