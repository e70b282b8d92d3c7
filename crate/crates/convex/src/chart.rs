use std::f64::consts::PI;

use crate::domain::{ConvexDomain, DomainKind};
use crate::geom::{self, P2};
use crate::{ConvexError, Result};

const DIFF_STEP: f64 = 1e-6;
const CONVEXITY_TOL: f64 = 1e-8;
const BISECT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub enum ChartShape {
    /// Circle of radius `r` centred at the origin.
    Circle { r: f64 },
    /// Piecewise linear `γ` through `(t_i, g_i)`, `t` increasing.
    Polyline { t: Vec<f64>, g: Vec<f64> },
    /// Lower boundary found by bisection on the domain, derivatives by
    /// central differences.
    Sampled { domain: ConvexDomain },
}

/// `t ↦ t·u⊥ + γ(t)·u` on `[-2, 2]`, the part of `∂Ω` in the half strip
/// `{⟨x,u⟩ <= 0, |⟨x,u⊥⟩| <= 2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryChart {
    pub direction: P2,
    pub shape: ChartShape,
    pub m: u32,
}

/// The chart directions `e^{iπk/2^{2M-1}}`, `k = 0..2^{2M}`.
pub fn chart_directions(m: u32) -> Vec<P2> {
    let count = 1usize << (2 * m);
    (0..count).map(|k| geom::polar(2.0 * PI * k as f64 / count as f64)).collect()
}

fn lower_chain(pts: &mut Vec<P2>) -> (Vec<f64>, Vec<f64>) {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut h: Vec<P2> = Vec::new();
    for &p in pts.iter() {
        while h.len() >= 2 && geom::cross(geom::sub(h[h.len() - 1], h[h.len() - 2]), geom::sub(p, h[h.len() - 2])) <= 0.0 {
            h.pop();
        }
        if h.last().map_or(false, |q| q[0] == p[0]) {
            continue;
        }
        h.push(p);
    }
    (h.iter().map(|p| p[0]).collect(), h.iter().map(|p| p[1]).collect())
}

pub fn boundary_chart(domain: &ConvexDomain, direction: P2) -> Result<BoundaryChart> {
    if !domain.is_normalized() {
        return Err(ConvexError::NotNormalized(domain.inradius()));
    }
    let u = geom::unit(direction);
    let up = geom::perp(u);
    let shape = match domain.kind() {
        DomainKind::Disc { radius } => ChartShape::Circle { r: *radius },
        DomainKind::Polygon { vertices } => {
            let mut pts: Vec<P2> = vertices.iter().map(|&v| [geom::dot(v, up), geom::dot(v, u)]).collect();
            let (t, g) = lower_chain(&mut pts);
            ChartShape::Polyline { t, g }
        }
        DomainKind::Rounded { .. } => ChartShape::Sampled { domain: domain.clone() },
    };
    Ok(BoundaryChart { direction: u, shape, m: domain.scale_exponent() })
}

impl BoundaryChart {
    /// A chart from explicit polyline data; convexity is not checked here.
    pub fn from_polyline(direction: P2, t: Vec<f64>, g: Vec<f64>, m: u32) -> Self {
        Self { direction: geom::unit(direction), shape: ChartShape::Polyline { t, g }, m }
    }

    fn segment(t: &[f64], x: f64, left: bool) -> usize {
        // Index i of the segment [t_i, t_{i+1}] used for the one-sided slope.
        let n = t.len();
        let k = if left { t.partition_point(|&s| s < x) } else { t.partition_point(|&s| s <= x) };
        k.clamp(1, n - 1) - 1
    }

    pub fn gamma(&self, x: f64) -> f64 {
        match &self.shape {
            ChartShape::Circle { r } => -(r * r - x * x).sqrt(),
            ChartShape::Polyline { t, g } => {
                let i = Self::segment(t, x, false);
                let w = (x - t[i]) / (t[i + 1] - t[i]);
                g[i] + w * (g[i + 1] - g[i])
            }
            ChartShape::Sampled { domain } => {
                let u = self.direction;
                let base = geom::scale(geom::perp(u), x);
                let mut lo = -(2f64.powi(self.m as i32));
                let mut hi = 0.0;
                loop {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if domain.contains(geom::add(base, geom::scale(u, mid))) { hi = mid } else { lo = mid }
                }
                hi
            }
        }
    }

    fn slope(&self, x: f64, left: bool) -> f64 {
        match &self.shape {
            ChartShape::Circle { r } => x / (r * r - x * x).sqrt(),
            ChartShape::Polyline { t, g } => {
                let i = Self::segment(t, x, left);
                (g[i + 1] - g[i]) / (t[i + 1] - t[i])
            }
            ChartShape::Sampled { .. } => {
                let h = DIFF_STEP;
                if x + h > 2.0 {
                    (self.gamma(x) - self.gamma(x - h)) / h
                } else if x - h < -2.0 {
                    (self.gamma(x + h) - self.gamma(x)) / h
                } else {
                    (self.gamma(x + h) - self.gamma(x - h)) / (2.0 * h)
                }
            }
        }
    }

    pub fn d_left(&self, x: f64) -> f64 {
        self.slope(x, true)
    }

    pub fn d_right(&self, x: f64) -> f64 {
        self.slope(x, false)
    }

    pub fn point(&self, x: f64) -> P2 {
        geom::add(geom::scale(geom::perp(self.direction), x), geom::scale(self.direction, self.gamma(x)))
    }

    /// Outward unit normal using the right derivative.
    pub fn normal(&self, x: f64) -> P2 {
        geom::unit(geom::sub(geom::scale(geom::perp(self.direction), self.d_right(x)), self.direction))
    }

    /// Smallest `⟨P/|P|, n⟩` over `samples` evenly spaced chart points, using
    /// both one-sided normals.
    pub fn tangent_margin(&self, samples: usize) -> f64 {
        let up = geom::perp(self.direction);
        (0..samples)
            .map(|i| {
                let x = -2.0 + 4.0 * i as f64 / (samples - 1).max(1) as f64;
                let p = self.point(x);
                let pu = geom::unit(p);
                [self.d_left(x), self.d_right(x)]
                    .iter()
                    .map(|&d| geom::dot(pu, geom::unit(geom::sub(geom::scale(up, d), self.direction))))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// First `t` on a uniform grid of `[-1, 1]` where the one-sided
    /// derivatives fail to be non-decreasing.
    fn convexity_violation(&self) -> Option<f64> {
        if let ChartShape::Polyline { t, g } = &self.shape {
            if t.len() < 2 || t.windows(2).any(|w| !(w[1] > w[0])) {
                return Some(t.first().copied().unwrap_or(0.0));
            }
            let s: Vec<f64> = (0..t.len() - 1).map(|i| (g[i + 1] - g[i]) / (t[i + 1] - t[i])).collect();
            return (1..s.len()).find(|&i| s[i] < s[i - 1] - CONVEXITY_TOL).map(|i| t[i]);
        }
        let n = 512;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=n {
            let x = -1.0 + 2.0 * i as f64 / n as f64;
            let (l, r) = (self.d_left(x), self.d_right(x));
            if l < prev - CONVEXITY_TOL || r < l - CONVEXITY_TOL {
                return Some(x);
            }
            prev = r;
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedInterval {
    pub j: usize,
    pub nu: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPartition {
    pub breakpoints: Vec<f64>,
    pub refined: Vec<RefinedInterval>,
    pub q: usize,
    pub delta: f64,
    /// Lower bound `2^{-5M} δ` on refined interval lengths.
    pub min_len: f64,
}

fn phi(chart: &BoundaryChart, a: f64, t: f64) -> f64 {
    (t - a) * (chart.d_left(t) - chart.d_right(a))
}

fn pair_cost(chart: &BoundaryChart, t0: f64, t1: f64) -> f64 {
    (t1 - t0) * (chart.d_right(t1) - chart.d_left(t0))
}

pub fn boundary_partition(chart: &BoundaryChart, delta: f64) -> Result<BoundaryPartition> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ConvexError::BadDelta { lo: 0.0, hi: 1.0, got: delta });
    }
    if let Some(x) = chart.convexity_violation() {
        return Err(ConvexError::NotConvex(x));
    }
    let mut a = vec![-1.0f64];
    while *a.last().unwrap() < 1.0 {
        let aj = *a.last().unwrap();
        if phi(chart, aj, 1.0) <= delta {
            a.push(1.0);
            break;
        }
        let (mut lo, mut hi) = (aj, 1.0);
        while hi - lo > BISECT_TOL {
            let mid = 0.5 * (lo + hi);
            if phi(chart, aj, mid) <= delta { lo = mid } else { hi = mid }
        }
        if lo <= aj {
            return Err(ConvexError::NotConvex(aj));
        }
        a.push(lo);
    }
    let q = a.len() - 1;

    let min_len = 2f64.powi(-5 * chart.m as i32) * delta;
    let mut iv: Vec<(usize, f64, f64)> = (0..q).map(|j| (j, a[j], a[j + 1])).collect();
    loop {
        let mut split = vec![false; iv.len()];
        for i in 1..iv.len() {
            if pair_cost(chart, iv[i - 1].1, iv[i].2) > delta {
                split[i - 1] = true;
                split[i] = true;
            }
        }
        let mut changed = false;
        let mut next = Vec::with_capacity(iv.len() * 2);
        for (k, &(j, lo, hi)) in iv.iter().enumerate() {
            if split[k] && hi - lo >= 2.0 * min_len {
                let mid = 0.5 * (lo + hi);
                next.push((j, lo, mid));
                next.push((j, mid, hi));
                changed = true;
            } else {
                next.push((j, lo, hi));
            }
        }
        iv = next;
        if !changed {
            break;
        }
    }
    let mut refined = Vec::with_capacity(iv.len());
    let mut nu = 0;
    for (k, &(j, lo, hi)) in iv.iter().enumerate() {
        if k > 0 && iv[k - 1].0 != j {
            nu = 0;
        }
        refined.push(RefinedInterval { j, nu, lo, hi });
        nu += 1;
    }
    Ok(BoundaryPartition { breakpoints: a, refined, q, delta, min_len })
}

impl BoundaryPartition {
    /// Direct check of the partition and refinement conditions; returns a
    /// description of the first failure.
    pub fn check(&self, chart: &BoundaryChart) -> std::result::Result<(), String> {
        let a = &self.breakpoints;
        let d = self.delta;
        if a.first() != Some(&-1.0) || a.last() != Some(&1.0) || a.windows(2).any(|w| !(w[1] > w[0])) {
            return Err("breakpoints do not increase from -1 to 1".into());
        }
        for j in 0..self.q {
            let v = phi(chart, a[j], a[j + 1]);
            if v > d {
                return Err(format!("interval {j}: product {v} exceeds delta"));
            }
            if j + 1 < self.q {
                // Maximality: any t beyond a_{j+1} overshoots.
                for k in 0..=32 {
                    let t = a[j + 1] + 10.0 * BISECT_TOL + (1.0 - a[j + 1]) * k as f64 / 32.0;
                    let t = t.min(1.0);
                    let v = phi(chart, a[j], t);
                    if v <= d {
                        return Err(format!("interval {j}: t = {t} beyond the breakpoint still satisfies the bound ({v})"));
                    }
                }
            }
        }
        let r = &self.refined;
        if r.first().map(|x| x.lo) != Some(-1.0) || r.last().map(|x| x.hi) != Some(1.0) {
            return Err("refined intervals do not tile [-1, 1]".into());
        }
        for k in 0..r.len() {
            if r[k].hi - r[k].lo < self.min_len {
                return Err(format!("refined interval {k} shorter than 2^(-5M) delta"));
            }
            if k > 0 {
                if r[k].lo != r[k - 1].hi {
                    return Err(format!("gap before refined interval {k}"));
                }
                let v = pair_cost(chart, r[k - 1].lo, r[k].hi);
                if v > d {
                    return Err(format!("refined pair ({}, {k}): {v} exceeds delta", k - 1));
                }
            }
        }
        Ok(())
    }

    /// CSV rows `chart,j,nu,lo,hi`.
    pub fn csv_rows(&self, chart_index: usize) -> Vec<String> {
        self.refined
            .iter()
            .map(|r| format!("{chart_index},{},{},{},{}", r.j, r.nu, r.lo, r.hi))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_chart() {
        let d = ConvexDomain::disc(8.0).unwrap();
        let c = boundary_chart(&d, [0.0, -1.0]).unwrap();
        assert!((c.gamma(0.0) + 8.0).abs() < 1e-15);
        for x in [-2.0, -0.3, 1.7] {
            assert!((c.gamma(x) + (64.0 - x * x).sqrt()).abs() < 1e-14);
            let p = c.point(x);
            assert!((d.rho(p) - 1.0).abs() < 1e-14);
        }
        assert!(c.tangent_margin(100) >= 2f64.powi(-(c.m as i32)));
    }

    #[test]
    fn square_chart_is_flat() {
        let sq = ConvexDomain::square(8.0).unwrap();
        let c = boundary_chart(&sq, [0.0, -1.0]).unwrap();
        for x in [-2.0, 0.0, 0.5, 2.0] {
            assert!((c.gamma(x) + 8.0).abs() < 1e-14);
            assert_eq!(c.d_left(x), 0.0);
            assert_eq!(c.d_right(x), 0.0);
        }
        let p = boundary_partition(&c, 0.01).unwrap();
        assert_eq!(p.q, 1);
        p.check(&c).unwrap();
    }

    #[test]
    fn not_normalized() {
        let d = ConvexDomain::disc(1.0).unwrap();
        assert!(matches!(boundary_chart(&d, [1.0, 0.0]), Err(ConvexError::NotNormalized(_))));
    }

    #[test]
    fn rejects_concave_chart() {
        let c = BoundaryChart::from_polyline([0.0, -1.0], vec![-2.0, 0.0, 2.0], vec![-4.0, -3.0, -4.0], 3);
        assert!(matches!(boundary_partition(&c, 0.1), Err(ConvexError::NotConvex(_))));
    }

    #[test]
    fn circle_partition() {
        let d = ConvexDomain::disc(1.0).unwrap().normalized().unwrap();
        let c = boundary_chart(&d, [0.0, -1.0]).unwrap();
        let p = boundary_partition(&c, 2f64.powi(-10)).unwrap();
        p.check(&c).unwrap();
        assert!(p.q >= 2 && p.q <= 32 * 8, "{}", p.q);
    }

    #[test]
    fn rounded_chart_matches_boundary() {
        let r = ConvexDomain::rounded(vec![[-5.0, -5.0], [5.0, -5.0], [5.0, 5.0], [-5.0, 5.0]], 1.0).unwrap();
        let c = boundary_chart(&r, geom::unit([1.0, -2.0])).unwrap();
        for x in [-1.5, 0.0, 1.9] {
            assert!((r.rho(c.point(x)) - 1.0).abs() < 1e-12);
        }
        assert!(c.tangent_margin(50) >= 2f64.powi(-(c.m as i32)));
        let p = boundary_partition(&c, 1e-3).unwrap();
        p.check(&c).unwrap();
    }
}
