use rayon::prelude::*;

use crate::{GridError, Result, SampledFunction};

/// How the supremum over grid-aligned intervals is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HlMode {
    /// Every pair of nodes `a <= i < b`, O(n^2) per point.
    BruteForce,
    /// Steepest bridge between the lower hull of the left prefix-sum points
    /// and the upper hull of the right ones.
    #[default]
    Hull,
}

/// Uncentred maximal function `M_s f = (M |f|^s)^{1/s}` over intervals whose
/// endpoints are grid nodes.
pub fn hl_maximal(f: &SampledFunction, s: f64) -> Result<SampledFunction> {
    hl_maximal_with(f, s, HlMode::default())
}

pub fn hl_maximal_with(f: &SampledFunction, s: f64, mode: HlMode) -> Result<SampledFunction> {
    if !(s >= 1.0) || s.is_infinite() {
        return Err(GridError::MaximalExponent(s));
    }
    let n = f.grid().n();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &v in f.values() {
        acc += v.abs().powf(s);
        prefix.push(acc);
    }
    let avg = match mode {
        HlMode::BruteForce => brute(&prefix),
        HlMode::Hull => hull(&prefix),
    };
    let values = avg.into_iter().map(|m| if s == 1.0 { m } else { m.powf(1.0 / s) }).collect();
    SampledFunction::new(*f.grid(), values)
}

fn brute(p: &[f64]) -> Vec<f64> {
    let n = p.len() - 1;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = 0.0f64;
            for a in 0..=i {
                for b in i + 1..=n {
                    best = best.max((p[b] - p[a]) / (b - a) as f64);
                }
            }
            best
        })
        .collect()
}

fn cross(p: &[f64], a: usize, b: usize, c: usize) -> f64 {
    let (ab_x, ab_y) = ((b - a) as f64, p[b] - p[a]);
    let (bc_x, bc_y) = ((c - b) as f64, p[c] - p[b]);
    ab_x * bc_y - ab_y * bc_x
}

fn slope(p: &[f64], a: usize, b: usize) -> f64 {
    (p[b] - p[a]) / (b - a) as f64
}

fn hull(p: &[f64]) -> Vec<f64> {
    let n = p.len() - 1;
    // Lower hull of {0, ..., a} as the chain a, prev[a], prev[prev[a]], ...
    let none = usize::MAX;
    let mut prev = vec![none; n + 1];
    for a in 1..=n {
        let mut c = a - 1;
        while prev[c] != none && cross(p, prev[c], c, a) <= 0.0 {
            c = prev[c];
        }
        prev[a] = c;
    }
    let levels = (usize::BITS - n.leading_zeros()) as usize + 1;
    let mut up = vec![prev.clone()];
    for k in 1..levels {
        let last = &up[k - 1];
        let row = (0..=n).map(|a| if last[a] == none { none } else { last[last[a]] }).collect();
        up.push(row);
    }
    // Steepest slope from a chain vertex of the lower hull to `b`.
    let tangent = |i: usize, b: usize| -> f64 {
        let better = |c: usize| prev[c] != none && slope(p, prev[c], b) > slope(p, c, b);
        let mut cur = i;
        if !better(cur) {
            return slope(p, cur, b);
        }
        for k in (0..levels).rev() {
            let c = up[k][cur];
            if c != none && better(c) {
                cur = c;
            }
        }
        slope(p, prev[cur], b)
    };
    let mut out = vec![0.0; n];
    // Upper hull of {i+1, ..., n}; the leftmost vertex is last.
    let mut upper: Vec<usize> = Vec::with_capacity(n + 1);
    for i in (0..n).rev() {
        let c = i + 1;
        while upper.len() >= 2 && cross(p, c, upper[upper.len() - 1], upper[upper.len() - 2]) >= 0.0 {
            upper.pop();
        }
        upper.push(c);
        let len = upper.len();
        let at = |t: usize| tangent(i, upper[len - 1 - t]);
        let (mut lo, mut hi) = (0, len - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if at(mid) < at(mid + 1) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        out[i] = at(lo);
    }
    out
}

/// Centred maximal function of `|f|` at cell centres: the best average over
/// the `2r+1` cells centred on each cell, with zero extension.
pub fn centered_maximal(f: &SampledFunction) -> SampledFunction {
    let n = f.grid().n();
    let mut prefix = vec![0.0; n + 1];
    for (i, v) in f.values().iter().enumerate() {
        prefix[i + 1] = prefix[i] + v.abs();
    }
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = 0.0f64;
            for r in 0..n {
                let lo = i.saturating_sub(r);
                let hi = (i + r + 1).min(n);
                best = best.max((prefix[hi] - prefix[lo]) / (2 * r + 1) as f64);
                if i < r && i + r + 1 > n {
                    break;
                }
            }
            best
        })
        .collect();
    SampledFunction::new(*f.grid(), values).expect("finite averages")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_function_spec, Grid};

    #[test]
    fn indicator_inside_and_outside() {
        let grid = Grid::new(-1.0, 3.0, 400).unwrap();
        let f = parse_function_spec("indicator:lo=0,hi=1", grid).unwrap();
        let m = hl_maximal(&f, 1.0).unwrap();
        assert!((m.value_at(0.5) - 1.0).abs() < 1e-12);
        assert!((m.value_at(2.0) - 0.5).abs() < 2.0 * grid.h());
    }

    #[test]
    fn hull_matches_brute_on_rough_input() {
        let grid = Grid::new(0.0, 1.0, 97).unwrap();
        let mut state = 0x2545F4914F6CDD1Du64;
        let f = SampledFunction::from_fn(grid, |_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let u = (state >> 11) as f64 / (1u64 << 53) as f64;
            if u < 0.3 { 0.0 } else { u * u * 10.0 }
        })
        .unwrap();
        for s in [1.0, 1.5, 2.0] {
            let a = hl_maximal_with(&f, s, HlMode::BruteForce).unwrap();
            let b = hl_maximal_with(&f, s, HlMode::Hull).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() <= 1e-12 * x.max(1.0), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn rejects_small_exponent() {
        let f = SampledFunction::zeros(Grid::new(0.0, 1.0, 4).unwrap());
        assert!(hl_maximal(&f, 0.5).is_err());
    }

    #[test]
    fn centered_indicator() {
        let grid = Grid::new(-2.0, 2.0, 400).unwrap();
        let f = parse_function_spec("indicator:lo=0,hi=1", grid).unwrap();
        let m = centered_maximal(&f);
        assert!((m.value_at(0.5) - 1.0).abs() < 1e-12);
        // At x = 1.5 the best symmetric window is [0, 3]-like: mass 1 over ~3.
        assert!((m.value_at(1.5) - 1.0 / 3.0).abs() < 0.01);
    }
}
