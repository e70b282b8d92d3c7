use bkm_grid::SampledFunction;

use crate::rect::Rectangle;

/// Range-maximum table over cell values.
#[derive(Debug, Clone)]
pub(crate) struct SparseMax {
    levels: Vec<Vec<f64>>,
}

impl SparseMax {
    pub(crate) fn new(v: &[f64]) -> Self {
        let mut levels = vec![v.to_vec()];
        let mut w = 1;
        while 2 * w <= v.len() {
            let prev = levels.last().unwrap();
            let next: Vec<f64> = (0..=v.len() - 2 * w).map(|i| prev[i].max(prev[i + w])).collect();
            levels.push(next);
            w *= 2;
        }
        Self { levels }
    }

    /// Maximum over cells `i..=j`.
    pub(crate) fn query(&self, i: usize, j: usize) -> f64 {
        let len = j - i + 1;
        let k = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        let row = &self.levels[k];
        row[i].max(row[j + 1 - (1 << k)])
    }
}

/// `|f|` as a step function with its running integral `C(u) = ∫_{−∞}^u |f|`.
#[derive(Debug, Clone)]
pub struct Factor {
    lo: f64,
    h: f64,
    vals: Vec<f64>,
    prefix: Vec<f64>,
    max: SparseMax,
    support: Option<(usize, usize)>,
}

impl Factor {
    pub fn new(f: &SampledFunction) -> Self {
        let vals: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
        let mut prefix = Vec::with_capacity(vals.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &v in &vals {
            acc += v;
            prefix.push(acc);
        }
        let h = f.h();
        let prefix = prefix.into_iter().map(|p| p * h).collect();
        Self { lo: f.grid().lo(), h, max: SparseMax::new(&vals), support: f.support(), vals, prefix }
    }

    fn n(&self) -> usize {
        self.vals.len()
    }

    fn node(&self, k: usize) -> f64 {
        self.lo + k as f64 * self.h
    }

    /// `[a, b]` hull of the cells where `f ≠ 0`.
    pub fn support_interval(&self) -> Option<(f64, f64)> {
        self.support.map(|(a, b)| (self.node(a), self.node(b + 1)))
    }

    pub fn cum(&self, u: f64) -> f64 {
        let n = self.n();
        let x = (u - self.lo) / self.h;
        if !(x > 0.0) {
            return 0.0;
        }
        if x >= n as f64 {
            return self.prefix[n];
        }
        let k = (x.floor() as usize).min(n - 1);
        self.prefix[k] + self.vals[k] * (u - self.node(k))
    }

    /// Exact `∫_a^b |f|` for `a <= b`.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        (self.cum(b) - self.cum(a)).max(0.0)
    }

    /// Largest `|f|` over cells meeting `[a, b]`.
    pub fn max_on(&self, a: f64, b: f64) -> f64 {
        let n = self.n();
        let hi = self.node(n);
        if b < self.lo || a >= hi {
            return 0.0;
        }
        let i = (((a - self.lo) / self.h).floor().max(0.0) as usize).min(n - 1);
        let j = (((b - self.lo) / self.h).floor().max(0.0) as usize).min(n - 1);
        self.max.query(i, j)
    }

    /// Mean of `C` over the segment between `a` and `b` (either order),
    /// accumulated relative to `C(min)` so short segments stay accurate.
    pub fn mean_cum(&self, a: f64, b: f64) -> f64 {
        let (u0, u1) = if a <= b { (a, b) } else { (b, a) };
        let base = self.cum(u0);
        let len = u1 - u0;
        if !(len > 0.0) {
            return base;
        }
        let n = self.n();
        let mut cur = u0.max(self.lo);
        let mut d = 0.0;
        let mut rel = 0.0;
        if cur < u1 && cur < self.node(n) {
            let mut k = (((cur - self.lo) / self.h).floor() as usize).min(n - 1);
            while cur < u1 && k < n {
                let b = u1.min(self.node(k + 1));
                if b > cur {
                    let dx = b - cur;
                    let v = self.vals[k];
                    rel += d * dx + 0.5 * v * dx * dx;
                    d += v * dx;
                    cur = b;
                }
                k += 1;
            }
        }
        if u1 > cur {
            rel += d * (u1 - cur);
        }
        base + rel / len
    }
}

/// The product density `|f(y₁)| |g(y₂)|` with exact rectangle integrals.
#[derive(Debug, Clone)]
pub struct ProductDensity {
    f: Factor,
    g: Factor,
}

/// `z`-interval `[lo, hi]` of the section of `r` at `y₁ = y`.
fn section(r: &Rectangle, y: f64) -> (f64, f64) {
    let c = r.center();
    let e = r.direction();
    let n = r.normal();
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (axis, half) in [(e, 0.5 * r.length()), (n, 0.5 * r.width())] {
        let a = axis[1];
        if a.abs() < 1e-12 {
            continue;
        }
        let b = axis[0] * (y - c[0]);
        let (p, q) = ((-half - b) / a, (half - b) / a);
        lo = lo.max(c[1] + p.min(q));
        hi = hi.min(c[1] + p.max(q));
    }
    (lo, hi.max(lo))
}

impl ProductDensity {
    pub fn new(f: &SampledFunction, g: &SampledFunction) -> Self {
        Self { f: Factor::new(f), g: Factor::new(g) }
    }

    pub fn f(&self) -> &Factor {
        &self.f
    }

    pub fn g(&self) -> &Factor {
        &self.g
    }

    /// Exact `∫_R |f(y₁)||g(y₂)| dy` for step functions: on every piece
    /// between `f`-cell nodes and corner abscissae the section bounds are
    /// affine, and `∫ C_g(affine)` is taken from the mean of `C_g`.
    pub fn integral(&self, r: &Rectangle) -> f64 {
        let (Some((fa, fb)), Some((ga, gb))) = (self.f.support_interval(), self.g.support_interval()) else {
            return 0.0;
        };
        let (bx, by) = r.bbox();
        let (ya, yb) = (bx[0].max(fa), bx[1].min(fb));
        if !(ya < yb) || by[1] < ga || by[0] > gb {
            return 0.0;
        }
        let mut cuts: Vec<f64> = r.corners().iter().map(|p| p[0]).filter(|&y| y > ya && y < yb).collect();
        cuts.sort_by(f64::total_cmp);
        let f = &self.f;
        let mut k = (((ya - f.lo) / f.h).floor().max(0.0) as usize).min(f.n() - 1);
        let mut y = ya;
        let mut ci = 0;
        let mut total = 0.0;
        let (mut lo_a, mut hi_a) = section(r, y);
        while y < yb && k < f.n() {
            let cell_end = f.node(k + 1).min(yb);
            let mut next = cell_end;
            while ci < cuts.len() && cuts[ci] <= y {
                ci += 1;
            }
            if ci < cuts.len() && cuts[ci] < next {
                next = cuts[ci];
            }
            if next <= y {
                k += 1;
                continue;
            }
            let (lo_b, hi_b) = section(r, next);
            let v = f.vals[k];
            if v != 0.0 && !(hi_a < ga && hi_b < ga) && !(lo_a > gb && lo_b > gb) {
                let inner = self.g.mean_cum(hi_a, hi_b) - self.g.mean_cum(lo_a, lo_b);
                total += v * (next - y) * inner.max(0.0);
            }
            y = next;
            lo_a = lo_b;
            hi_a = hi_b;
            if y >= cell_end {
                k += 1;
            }
        }
        total
    }

    pub fn average(&self, r: &Rectangle) -> f64 {
        self.integral(r) / r.area()
    }

    /// Cheap upper bound on `average(r)` from masses and maxima of the
    /// projections, refined over up to eight slices along the long axis.
    pub fn upper_bound(&self, r: &Rectangle) -> f64 {
        let whole = self.piece_bound(r.center(), r.direction(), r.length(), r.width(), r.length(), r.width());
        whole.min(self.sliced_bound(r))
    }

    /// Whether `average(r)` could exceed `floor`; `false` is a proof that it
    /// does not (with a relative margin of `1e-9` for rounding).
    pub fn may_exceed(&self, r: &Rectangle, floor: f64) -> bool {
        if floor <= 0.0 {
            return true;
        }
        let floor = floor / (1.0 + 1e-9);
        self.piece_bound(r.center(), r.direction(), r.length(), r.width(), r.length(), r.width()) > floor
            && self.sliced_bound(r) > floor
    }

    /// Bound valid for every rectangle of size `len × wid` and direction `e`
    /// lying inside the `outer_len × outer_wid` rectangle centred at `c`.
    pub fn block_bound(&self, c: [f64; 2], e: [f64; 2], outer_len: f64, outer_wid: f64, len: f64, wid: f64) -> f64 {
        self.piece_bound(c, e, outer_len, outer_wid, len, wid)
    }

    fn sliced_bound(&self, r: &Rectangle) -> f64 {
        let m = (r.eccentricity().round() as usize).clamp(1, 8);
        let e = r.direction();
        let c = r.center();
        let piece = r.length() / m as f64;
        let mut sum = 0.0;
        for p in 0..m {
            let s = -0.5 * r.length() + (p as f64 + 0.5) * piece;
            let pc = [c[0] + s * e[0], c[1] + s * e[1]];
            sum += self.piece_bound(pc, e, piece, r.width(), piece, r.width());
        }
        sum / m as f64
    }

    // Projections come from the `plen × pwid` rectangle; area and chords from
    // the `len × wid` one inside it.
    fn piece_bound(&self, c: [f64; 2], e: [f64; 2], plen: f64, pwid: f64, len: f64, wid: f64) -> f64 {
        let (e1, e2) = (e[0].abs(), e[1].abs());
        let hx = 0.5 * (plen * e1 + pwid * e2);
        let hy = 0.5 * (plen * e2 + pwid * e1);
        let (x0, x1, y0, y1) = (c[0] - hx, c[0] + hx, c[1] - hy, c[1] + hy);
        let area = len * wid;
        let mf = self.f.mass(x0, x1);
        let mg = self.g.mass(y0, y1);
        if mf == 0.0 || mg == 0.0 {
            return 0.0;
        }
        let sf = self.f.max_on(x0, x1);
        let sg = self.g.max_on(y0, y1);
        let chord = |a: f64, b: f64| {
            let u = if a > 0.0 { wid / a } else { f64::INFINITY };
            let v = if b > 0.0 { len / b } else { f64::INFINITY };
            u.min(v)
        };
        let b1 = mf * mg / area;
        let b2 = sf * sg;
        let b3 = mf * sg * chord(e1, e2) / area;
        let b4 = mg * sf * chord(e2, e1) / area;
        b1.min(b2).min(b3).min(b4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bkm_grid::{parse_function_spec, Grid};

    #[test]
    fn running_integral() {
        let grid = Grid::new(0.0, 4.0, 4).unwrap();
        let f = SampledFunction::new(grid, vec![1.0, -2.0, 0.0, 3.0]).unwrap();
        let c = Factor::new(&f);
        assert_eq!(c.cum(-1.0), 0.0);
        assert!((c.cum(1.5) - 2.0).abs() < 1e-15);
        assert!((c.cum(9.0) - 6.0).abs() < 1e-15);
        // ∫_0^2 C = ∫_0^1 u du + ∫_1^2 (1 + 2(u−1)) du = 0.5 + 2
        assert!((c.mean_cum(0.0, 2.0) - 1.25).abs() < 1e-15);
        assert!((c.mean_cum(2.0, 0.0) - 1.25).abs() < 1e-15);
        assert!((c.mean_cum(5.0, 7.0) - 6.0).abs() < 1e-15);
        assert_eq!(c.max_on(1.2, 2.5), 2.0);
        assert_eq!(c.max_on(5.0, 6.0), 0.0);
    }

    #[test]
    fn constant_density_average() {
        let grid = Grid::new(-8.0, 8.0, 64).unwrap();
        let one = SampledFunction::from_fn(grid, |_| 1.0).unwrap();
        let d = ProductDensity::new(&one, &one);
        for theta in [0.0, 0.2, 1.0, std::f64::consts::FRAC_PI_2, 2.5] {
            let r = Rectangle::from_angle([0.3, -0.4], theta, 5.0, 1.5).unwrap();
            assert!((d.average(&r) - 1.0).abs() < 1e-10, "θ = {theta}");
        }
    }

    #[test]
    fn bound_dominates_average() {
        let grid = Grid::new(-4.0, 12.0, 256).unwrap();
        let f = parse_function_spec("powercut:a=-1,lo=3,hi=10", grid).unwrap();
        let g = parse_function_spec("gaussian:sigma=2", grid).unwrap();
        let d = ProductDensity::new(&f, &g);
        for i in 0..200 {
            let r = Rectangle::from_angle([i as f64 * 0.05, 4.0 - i as f64 * 0.03], i as f64 * 0.37, 0.5 + i as f64 * 0.07, 0.5).unwrap();
            assert!(d.upper_bound(&r) * (1.0 + 1e-12) >= d.average(&r));
        }
    }
}
