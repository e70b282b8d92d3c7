use crate::{GridError, Result, SampledFunction};

/// `(Σ |f_i|^p h)^{1/p}`, or `max |f_i|` when `p` is infinite.
pub fn lp_norm(f: &SampledFunction, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(GridError::NonPositiveExponent(p));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let sum: f64 = f.values().iter().map(|v| v.abs().powf(p)).sum();
    Ok((sum * f.h()).powf(1.0 / p))
}

/// `sup_λ λ |{|f| > λ}|^{1/p}` with level sets measured in cells.
///
/// For a step function the supremum is approached as `λ` rises to an
/// attained value `v`, where the level set is `{|f| >= v}`; so the scan runs
/// over attained values with that closed level set.
pub fn weak_lp_quasinorm(f: &SampledFunction, p: f64) -> Result<f64> {
    if !(p > 0.0) || p.is_infinite() {
        return Err(GridError::NonPositiveExponent(p));
    }
    let mut mags: Vec<f64> = f.values().iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let h = f.h();
    let mut best = 0.0f64;
    let mut k = 0;
    while k < mags.len() {
        let v = mags[k];
        while k < mags.len() && mags[k] == v {
            k += 1;
        }
        best = best.max(v * (k as f64 * h).powf(1.0 / p));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_function_spec, Grid};

    #[test]
    fn indicator_norms() {
        let grid = Grid::new(-2.0, 2.0, 400).unwrap();
        let f = parse_function_spec("indicator:lo=0,hi=1", grid).unwrap();
        assert!((lp_norm(&f, 2.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((weak_lp_quasinorm(&f, 2.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn single_level_weak() {
        let grid = Grid::new(-1.0, 1.0, 64).unwrap();
        let f = parse_function_spec("indicator:lo=0,hi=0.5", grid).unwrap().scaled(2.0);
        assert!((weak_lp_quasinorm(&f, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_exponent() {
        let f = SampledFunction::zeros(Grid::new(0.0, 1.0, 4).unwrap());
        assert!(lp_norm(&f, 0.0).is_err());
        assert!(lp_norm(&f, -1.0).is_err());
        assert!(weak_lp_quasinorm(&f, 0.0).is_err());
        assert_eq!(weak_lp_quasinorm(&f, 1.0).unwrap(), 0.0);
    }
}
