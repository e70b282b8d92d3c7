use std::f64::consts::PI;

use rayon::prelude::*;

use crate::domain::ConvexDomain;
use crate::geom::{self, P2};
use crate::{ConvexError, Result};

/// `B(P, ℓ, δ)`: the boundary points within `δ` of the supporting line
/// through `center` with outward normal `normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cap {
    pub center: P2,
    pub normal: P2,
    /// Angular range `[theta_lo, theta_hi]` of covered sample directions;
    /// `theta_hi` may exceed `2π`.
    pub theta_lo: f64,
    pub theta_hi: f64,
}

impl Cap {
    pub fn contains(&self, x: P2, delta: f64) -> bool {
        geom::dot(geom::sub(self.center, x), self.normal) < delta
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub count: usize,
    pub caps: Vec<Cap>,
    pub samples: usize,
}

struct Samples {
    pos: Vec<P2>,
    normal: Vec<P2>,
    // Unwrapped normal angle; non-decreasing, spans one turn.
    phi: Vec<f64>,
}

fn sample_boundary(domain: &ConvexDomain, k: usize) -> Samples {
    let pts: Vec<(P2, P2)> = (0..k)
        .into_par_iter()
        .map(|i| {
            let bp = domain.boundary_point(2.0 * PI * i as f64 / k as f64);
            (bp.position, domain.normal_at(&bp))
        })
        .collect();
    let mut phi = Vec::with_capacity(k);
    let mut prev = f64::NEG_INFINITY;
    for &(_, n) in &pts {
        let mut a = n[1].atan2(n[0]);
        if prev.is_finite() {
            while a < prev - 1e-12 {
                a += 2.0 * PI;
            }
        }
        phi.push(a);
        prev = a;
    }
    let (pos, normal) = pts.into_iter().unzip();
    Samples { pos, normal, phi }
}

fn sample_count(delta: f64, diameter: f64) -> usize {
    let want = (128.0 / (delta / diameter).sqrt()).ceil().min(2e6) as usize;
    want.max(1 << 16).next_power_of_two().min(1 << 21)
}

/// Greedy-optimal cover of `∂Ω` by caps `B(P, ℓ, δ)` supported at boundary
/// samples. The cap system is computed exactly on the sample set and the
/// fewest caps covering every sample is returned.
pub fn covering_number(domain: &ConvexDomain, delta: f64) -> Result<Cover> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(ConvexError::BadDelta { lo: 0.0, hi: f64::INFINITY, got: delta });
    }
    let k = sample_count(delta, domain.diameter());
    covering_number_with_samples(domain, delta, k)
}

pub fn covering_number_with_samples(domain: &ConvexDomain, delta: f64, k: usize) -> Result<Cover> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(ConvexError::BadDelta { lo: 0.0, hi: f64::INFINITY, got: delta });
    }
    let s = sample_boundary(domain, k.max(8));
    let k = s.pos.len();
    let theta = |i: i64| 2.0 * PI * i as f64 / k as f64;

    // A slab of width <= δ: one cap covers everything.
    let (wmin, cmin) = (0..k)
        .map(|c| (domain.support(s.normal[c]) + domain.support(geom::scale(s.normal[c], -1.0)), c))
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
    if wmin <= delta {
        let cap = Cap { center: s.pos[cmin], normal: s.normal[cmin], theta_lo: 0.0, theta_hi: 2.0 * PI };
        return Ok(Cover { count: 1, caps: vec![cap], samples: k });
    }

    let ki = k as i64;
    let at = |i: i64| i.rem_euclid(ki) as usize;
    let phi_at = |i: i64| s.phi[at(i)] + 2.0 * PI * i.div_euclid(ki) as f64;
    let dist = |c: usize, i: i64| geom::dot(geom::sub(s.pos[c], s.pos[at(i)]), s.normal[c]);

    // Cap of candidate c is the index arc [c - back, c + fwd]. The distance to
    // the supporting line is monotone between c and the antipodal normal, so
    // both ends come from binary searches.
    let arcs: Vec<(i64, i64)> = (0..k)
        .into_par_iter()
        .map(|c| {
            let ci = c as i64;
            let target_f = phi_at(ci) + PI;
            let (mut lo, mut hi) = (ci, ci + ki);
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if phi_at(mid) >= target_f { hi = mid } else { lo = mid }
            }
            let far_f = hi;
            let (mut lo, mut hi) = (ci, far_f);
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if dist(c, mid) < delta { lo = mid } else { hi = mid }
            }
            let fwd = if dist(c, hi) < delta { hi } else { lo };

            let target_b = phi_at(ci) - PI;
            let (mut lo, mut hi) = (ci - ki, ci);
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if phi_at(mid) <= target_b { lo = mid } else { hi = mid }
            }
            let far_b = lo;
            let (mut lo, mut hi) = (far_b, ci);
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if dist(c, mid) < delta { hi = mid } else { lo = mid }
            }
            let back = if dist(c, lo) < delta { lo } else { hi };
            let fwd = fwd.min(back + ki - 1);
            (back, fwd)
        })
        .collect();

    // reach[p] = (furthest end, candidate) over arcs starting at or before p,
    // with arcs copied at shifts -K, 0, K so position p in [-K, 3K) is served.
    let off = ki;
    let len = 4 * k;
    let mut reach: Vec<(i64, usize)> = vec![(i64::MIN, 0); len];
    for (c, &(b, f)) in arcs.iter().enumerate() {
        for shift in [-ki, 0, ki] {
            let p = b + shift + off;
            if p >= 0 && (p as usize) < len && f + shift > reach[p as usize].0 {
                reach[p as usize] = (f + shift, c);
            }
        }
    }
    for p in 1..len {
        if reach[p - 1].0 > reach[p].0 {
            reach[p] = reach[p - 1];
        }
    }
    let greedy = |start: i64, limit: usize| -> Option<Vec<(usize, i64, i64)>> {
        let mut cur = start;
        let mut picks = Vec::new();
        while cur < start + ki {
            let (end, c) = reach[(cur + off) as usize];
            if end < cur || picks.len() >= limit {
                return None;
            }
            let shift = end - arcs[c].1;
            picks.push((c, arcs[c].0 + shift, end));
            cur = end + 1;
        }
        Some(picks)
    };

    // Some optimal cover contains an arc through sample 0; a linear greedy
    // from that arc's start is optimal.
    let mut starts: Vec<i64> = Vec::new();
    for &(b, f) in &arcs {
        for shift in [-ki, 0, ki] {
            if b + shift <= 0 && 0 <= f + shift {
                starts.push(b + shift);
            }
        }
    }
    starts.sort_unstable();
    starts.dedup();
    let mut best: Option<Vec<(usize, i64, i64)>> = None;
    for st in starts {
        let limit = best.as_ref().map_or(usize::MAX, |b| b.len() - 1);
        if let Some(p) = greedy(st, limit) {
            if best.as_ref().map_or(true, |b| p.len() < b.len()) {
                best = Some(p);
            }
        }
    }
    let picks = best.ok_or(ConvexError::CoverFailed(delta))?;
    let caps: Vec<Cap> = picks
        .iter()
        .map(|&(c, b, f)| Cap { center: s.pos[c], normal: s.normal[c], theta_lo: theta(b), theta_hi: theta(f) })
        .collect();
    Ok(Cover { count: caps.len(), caps, samples: k })
}

/// Least-squares slope of `log N(Ω, δ)` against `log δ⁻¹`.
pub fn minkowski_dimension_estimate(domain: &ConvexDomain, deltas: &[f64]) -> Result<f64> {
    if deltas.len() < 4 {
        return Err(ConvexError::TooFewScales { need: 4, got: deltas.len() });
    }
    if let Some(&d) = deltas.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(ConvexError::BadDelta { lo: 0.0, hi: f64::INFINITY, got: d });
    }
    let (lo, hi) = deltas.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &d| (a.min(d), b.max(d)));
    if hi / lo < 8.0 * (1.0 - 1e-12) {
        return Err(ConvexError::TooFewScales { need: 4, got: deltas.len() });
    }
    let pts: Vec<(f64, f64)> = deltas
        .iter()
        .map(|&d| covering_number(domain, d).map(|c| ((1.0 / d).ln(), (c.count as f64).ln())))
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force oracle: caps at `m` uniformly spaced tangent points of the
    // unit circle have half-angle acos(1 - δ); the fewest covering the circle
    // is ceil(π / acos(1 - δ)).
    fn disc_oracle(delta: f64) -> usize {
        (PI / (1.0 - delta).acos()).ceil() as usize
    }

    #[test]
    fn disc_matches_angular_oracle() {
        let d = ConvexDomain::disc(1.0).unwrap();
        for delta in [0.02, 0.005, 0.1] {
            let c = covering_number(&d, delta).unwrap();
            let o = disc_oracle(delta);
            assert!(c.count >= o && c.count <= o + 1, "delta {delta}: {} vs {o}", c.count);
        }
        let c = covering_number(&d, 0.02).unwrap().count;
        assert!((8..=32).contains(&c));
    }

    #[test]
    fn square_and_large_delta() {
        let sq = ConvexDomain::square(1.0).unwrap();
        assert!(covering_number(&sq, 0.01).unwrap().count <= 8);
        for d in [ConvexDomain::disc(1.0).unwrap(), sq, ConvexDomain::ngon(7, 2.0).unwrap()] {
            assert_eq!(covering_number(&d, d.diameter()).unwrap().count, 1);
        }
    }

    #[test]
    fn caps_cover_every_sample() {
        let d = ConvexDomain::ngon(64, 1.0).unwrap();
        let delta = 1e-3;
        let cov = covering_number_with_samples(&d, delta, 4096).unwrap();
        for i in 0..4096 {
            let x = d.boundary_point(2.0 * PI * i as f64 / 4096.0).position;
            assert!(cov.caps.iter().any(|c| c.contains(x, delta)), "sample {i} uncovered");
        }
    }

    #[test]
    fn dimension_examples() {
        let ds: Vec<f64> = (6..=14).map(|j| 2f64.powi(-j)).collect();
        let disc = minkowski_dimension_estimate(&ConvexDomain::disc(1.0).unwrap(), &ds).unwrap();
        assert!((disc - 0.5).abs() <= 0.05, "{disc}");
        let sq = minkowski_dimension_estimate(&ConvexDomain::square(1.0).unwrap(), &ds).unwrap();
        assert!(sq <= 0.1, "{sq}");
        let g = minkowski_dimension_estimate(&ConvexDomain::ngon(64, 1.0).unwrap(), &ds).unwrap();
        assert!((0.0..=0.5).contains(&g), "{g}");
        assert!(minkowski_dimension_estimate(&ConvexDomain::disc(1.0).unwrap(), &ds[..3]).is_err());
    }
}
