use std::f64::consts::PI;

use bkm_grid::{Grid, GridError, SampledFunction};
use rayon::prelude::*;

use crate::density::{ProductDensity, SparseMax};
use crate::directions::DirectionSet;
use crate::rect::{frame, Rectangle};
use crate::{KakeyaError, Result};

// Lattice centres are pruned in blocks of this many rows and columns.
const BLOCK_ROWS: i64 = 4;
const BLOCK_COLS: i64 = 16;

/// Discretization of the supremum over a rectangle family.
///
/// For eccentricity `k` the angle lattice has `angle_factor · k` points on
/// `[0, π)` (rounded up to a multiple of four so the axes and diagonals are
/// always present), optionally capped at `max_angles`. Anchors split the
/// rectangle into `along × across` frame cells, never finer than the grid
/// spacing. Pointwise searches finish with `refine` halving passes around
/// the argmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpace {
    pub angle_factor: usize,
    pub max_angles: Option<usize>,
    pub along: usize,
    pub across: usize,
    pub refine: usize,
}

impl Default for SearchSpace {
    fn default() -> Self {
        Self { angle_factor: 4, max_angles: None, along: 16, across: 4, refine: 3 }
    }
}

impl SearchSpace {
    /// Settings for whole-diagonal profiles at large eccentricity.
    pub fn sweep() -> Self {
        Self { angle_factor: 4, max_angles: Some(64), along: 16, across: 4, refine: 0 }
    }

    /// Twice the angle and anchor density.
    pub fn doubled(&self) -> Self {
        Self {
            angle_factor: 2 * self.angle_factor,
            max_angles: self.max_angles.map(|c| 2 * c),
            along: 2 * self.along,
            across: 2 * self.across,
            refine: self.refine,
        }
    }

    pub fn without_refinement(&self) -> Self {
        Self { refine: 0, ..*self }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("angle_factor", self.angle_factor), ("along", self.along), ("across", self.across)] {
            if v == 0 {
                return Err(KakeyaError::BadParameter { name, value: 0.0 });
            }
        }
        Ok(())
    }

    pub fn angle_count(&self, eccentricity: f64) -> usize {
        let mut n = (self.angle_factor as f64 * eccentricity.max(1.0)).ceil() as usize;
        if let Some(cap) = self.max_angles {
            n = n.min(cap.max(4));
        }
        n.div_ceil(4).max(1) * 4
    }

    pub fn angle_lattice(&self, eccentricity: f64) -> Vec<f64> {
        let n = self.angle_count(eccentricity);
        (0..n).map(|j| PI * j as f64 / n as f64).collect()
    }
}

fn subdivisions(parts: usize, len: f64, h: f64) -> usize {
    parts.min((len / h).ceil() as usize).max(1)
}

/// Every integer up to 8, then `{16, 32, …} ∪ {n}` up to `n`.
pub fn eccentricity_ladder(n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=n.min(8)).collect();
    v.extend(std::iter::successors(Some(16usize), |k| k.checked_mul(2)).take_while(|&k| k <= n));
    if n > 0 && v.last() != Some(&n) {
        v.push(n);
    }
    v
}

/// `{h} ∪ {2^j : h < 2^j < w} ∪ {w}`.
pub fn scale_ladder(h: f64, w: f64) -> Vec<f64> {
    let mut v = vec![h];
    let mut j = h.log2().floor() as i32 + 1;
    loop {
        let s = 2f64.powi(j);
        if s >= w {
            break;
        }
        if s > h {
            v.push(s);
        }
        j += 1;
    }
    if w > h {
        v.push(w);
    }
    v
}

/// Best rectangle found by a search, with its average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub rect: Rectangle,
    pub value: f64,
}

#[derive(Debug, Clone, Copy)]
struct Cand {
    value: f64,
    theta: f64,
    s: f64,
    t: f64,
}

#[derive(Debug, Clone)]
struct Shape {
    len: f64,
    wid: f64,
    angles: Vec<f64>,
    // Angle step for refinement; zero keeps the direction fixed.
    dtheta: f64,
}

/// The bilinear maximal operators over rectangle families for a fixed pair
/// `(f, g)` on a common grid; the diagonal `{(x, x)}` is sampled at the grid
/// centres.
#[derive(Debug, Clone)]
pub struct KakeyaMaximal {
    density: ProductDensity,
    grid: Grid,
    space: SearchSpace,
}

impl KakeyaMaximal {
    pub fn new(f: &SampledFunction, g: &SampledFunction) -> Result<Self> {
        Self::with_space(f, g, SearchSpace::default())
    }

    pub fn with_space(f: &SampledFunction, g: &SampledFunction, space: SearchSpace) -> Result<Self> {
        if f.grid() != g.grid() {
            return Err(GridError::GridMismatch.into());
        }
        space.validate()?;
        Ok(Self { density: ProductDensity::new(f, g), grid: *f.grid(), space })
    }

    pub fn density(&self) -> &ProductDensity {
        &self.density
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn fixed_shape(&self, n: usize, delta: f64) -> Result<Shape> {
        if n < 2 {
            return Err(KakeyaError::BadParameter { name: "N", value: n as f64 });
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(KakeyaError::BadParameter { name: "delta", value: delta });
        }
        Ok(self.lattice_shape(n, delta))
    }

    fn lattice_shape(&self, k: usize, delta: f64) -> Shape {
        let angles = self.space.angle_lattice(k as f64);
        let dtheta = PI / angles.len() as f64;
        Shape { len: k as f64 * delta, wid: delta, angles, dtheta }
    }

    fn full_shapes(&self, n: usize) -> Result<Vec<Shape>> {
        if n < 1 {
            return Err(KakeyaError::BadParameter { name: "N", value: n as f64 });
        }
        let scales = scale_ladder(self.grid.h(), self.grid.len());
        let mut out = Vec::new();
        for k in eccentricity_ladder(n) {
            for &d in &scales {
                out.push(self.lattice_shape(k, d));
            }
        }
        Ok(out)
    }

    fn directional_shapes(&self, dirs: &DirectionSet) -> Vec<Shape> {
        let h = self.grid.h();
        let w = self.grid.len();
        let angles = dirs.angles();
        let mut out = Vec::new();
        let aspects = eccentricity_ladder((w / h * (1.0 + 1e-12)).floor() as usize);
        for &d in &scale_ladder(h, w) {
            for &a in &aspects {
                out.push(Shape { len: a as f64 * d, wid: d, angles: angles.clone(), dtheta: 0.0 });
            }
        }
        out
    }

    /// `𝓜_{𝓡_{δ,N}}(f, g)(x)` with the maximizing rectangle.
    pub fn fixed_scale_witness(&self, n: usize, delta: f64, x: f64) -> Result<Option<Witness>> {
        let shape = self.fixed_shape(n, delta)?;
        Ok(self.point_search(x, &[shape]))
    }

    pub fn fixed_scale(&self, n: usize, delta: f64, x: f64) -> Result<f64> {
        Ok(self.fixed_scale_witness(n, delta, x)?.map_or(0.0, |w| w.value))
    }

    /// `𝓜_{𝓡_N}(f, g)(x)`: eccentricities `k <= N` on a dyadic ladder (plus
    /// `N`), scales on a dyadic ladder spanning `[h, window]`.
    pub fn full_witness(&self, n: usize, x: f64) -> Result<Option<Witness>> {
        let shapes = self.full_shapes(n)?;
        Ok(self.point_search(x, &shapes))
    }

    pub fn full(&self, n: usize, x: f64) -> Result<f64> {
        Ok(self.full_witness(n, x)?.map_or(0.0, |w| w.value))
    }

    /// `𝓜_{𝓡^Ω}(f, g)(x)`: long side parallel to some `ω ∈ Ω`, any
    /// eccentricity up to `window / h`.
    pub fn directional_witness(&self, dirs: &DirectionSet, x: f64) -> Option<Witness> {
        self.point_search(x, &self.directional_shapes(dirs))
    }

    pub fn directional(&self, dirs: &DirectionSet, x: f64) -> f64 {
        self.directional_witness(dirs, x).map_or(0.0, |w| w.value)
    }

    /// Profile of [`Self::fixed_scale`] over every grid centre.
    pub fn fixed_scale_profile(&self, n: usize, delta: f64) -> Result<SampledFunction> {
        let shape = self.fixed_shape(n, delta)?;
        Ok(self.profile(&[shape]))
    }

    pub fn full_profile(&self, n: usize) -> Result<SampledFunction> {
        let shapes = self.full_shapes(n)?;
        Ok(self.profile(&shapes))
    }

    pub fn directional_profile(&self, dirs: &DirectionSet) -> SampledFunction {
        self.profile(&self.directional_shapes(dirs))
    }

    fn point_search(&self, x: f64, shapes: &[Shape]) -> Option<Witness> {
        let mut best: Option<Witness> = None;
        for shape in shapes {
            if let Some(w) = self.search_shape(x, shape) {
                if best.map_or(true, |b| w.value > b.value) {
                    best = Some(w);
                }
            }
        }
        best
    }

    fn rect(&self, x: f64, theta: f64, s: f64, t: f64, len: f64, wid: f64) -> Rectangle {
        Rectangle::anchored([x, x], theta, s, t, len, wid).expect("search rectangles are valid")
    }

    fn search_shape(&self, x: f64, shape: &Shape) -> Option<Witness> {
        let h = self.grid.h();
        let (len, wid) = (shape.len, shape.wid);
        let ns = subdivisions(self.space.along, len, h);
        let nt = subdivisions(self.space.across, wid, h);
        let per_angle: Vec<Option<Cand>> = shape
            .angles
            .par_iter()
            .map(|&theta| {
                let mut best: Option<Cand> = None;
                for i in 0..=ns {
                    let s = len * (i as f64 / ns as f64 - 0.5);
                    for j in 0..=nt {
                        let t = wid * (j as f64 / nt as f64 - 0.5);
                        let r = self.rect(x, theta, s, t, len, wid);
                        let floor = best.map_or(0.0, |b| b.value);
                        if floor > 0.0 && self.density.upper_bound(&r) * (1.0 + 1e-9) <= floor {
                            continue;
                        }
                        let v = self.density.average(&r);
                        if v > floor {
                            best = Some(Cand { value: v, theta, s, t });
                        }
                    }
                }
                best
            })
            .collect();
        let mut best: Option<Cand> = None;
        for c in per_angle.into_iter().flatten() {
            if best.map_or(true, |b| c.value > b.value) {
                best = Some(c);
            }
        }
        let mut c = best?;
        let (mut dth, mut ds, mut dt) = (shape.dtheta, len / ns as f64, wid / nt as f64);
        let th_steps: &[f64] = if shape.dtheta > 0.0 { &[-1.0, 0.0, 1.0] } else { &[0.0] };
        for _ in 0..self.space.refine {
            dth *= 0.5;
            ds *= 0.5;
            dt *= 0.5;
            let mut next = c;
            for &a in th_steps {
                for b in [-1.0, 0.0, 1.0] {
                    for d in [-1.0, 0.0, 1.0] {
                        if a == 0.0 && b == 0.0 && d == 0.0 {
                            continue;
                        }
                        let theta = c.theta + a * dth;
                        let s = (c.s + b * ds).clamp(-0.5 * len, 0.5 * len);
                        let t = (c.t + d * dt).clamp(-0.5 * wid, 0.5 * wid);
                        let v = self.density.average(&self.rect(x, theta, s, t, len, wid));
                        if v > next.value {
                            next = Cand { value: v, theta, s, t };
                        }
                    }
                }
            }
            c = next;
        }
        Some(Witness { rect: self.rect(x, c.theta, c.s, c.t, len, wid), value: c.value })
    }

    /// Rectangle-first sweep: every rectangle on a frame lattice that meets
    /// the sampled diagonal and the support box is averaged once and pushed
    /// to every grid centre it contains. Rectangles whose upper bound cannot
    /// beat the current profile anywhere on their diagonal run are skipped;
    /// the skip is exact, so the result is the maximum over the whole family.
    fn profile(&self, shapes: &[Shape]) -> SampledFunction {
        let n = self.grid.n();
        let mut m = vec![0.0f64; n];
        if self.density.f().support_interval().is_none() || self.density.g().support_interval().is_none() {
            return SampledFunction::new(self.grid, m).expect("finite profile");
        }
        // Axis and diagonal directions first, so later passes have a floor.
        let is_seed = |a: f64| {
            let q = a / (PI / 4.0);
            (q - q.round()).abs() < 1e-9
        };
        for pass in 0..2 {
            for shape in shapes {
                let angles: Vec<f64> = shape.angles.iter().copied().filter(|&a| is_seed(a) == (pass == 0)).collect();
                if angles.is_empty() {
                    continue;
                }
                let neg: Vec<f64> = m.iter().map(|v| -v).collect();
                let snapshot = SparseMax::new(&neg);
                let floor = |i: usize, j: usize| -snapshot.query(i, j);
                let updates: Vec<(usize, usize, f64)> = angles
                    .par_iter()
                    .flat_map_iter(|&theta| self.sweep_angle(theta, shape.len, shape.wid, &floor))
                    .collect();
                paint(&mut m, updates);
            }
        }
        SampledFunction::new(self.grid, m).expect("finite profile")
    }

    fn sweep_angle(&self, theta: f64, len: f64, wid: f64, floor: &(impl Fn(usize, usize) -> f64 + Sync)) -> Vec<(usize, usize, f64)> {
        let grid = self.grid;
        let (h, n) = (grid.h(), grid.n());
        let x0 = grid.center(0);
        let x1 = grid.center(n - 1);
        let (e, nv) = frame(theta);
        let ks = e[0] + e[1];
        let kt = nv[0] + nv[1];
        let (fa, fb) = self.density.f().support_interval().unwrap();
        let (ga, gb) = self.density.g().support_interval().unwrap();
        let box_pts = [[fa, ga], [fb, ga], [fb, gb], [fa, gb]];
        let span = |axis: [f64; 2]| {
            box_pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                let v = p[0] * axis[0] + p[1] * axis[1];
                (lo.min(v), hi.max(v))
            })
        };
        let (bs0, bs1) = span(e);
        let (bt0, bt1) = span(nv);
        let (hl, hw) = (0.5 * len, 0.5 * wid);
        let a_s = len / subdivisions(self.space.along, len, h) as f64;
        let a_t = wid / subdivisions(self.space.across, wid, h) as f64;
        let tol = 1e-12 * (len + x0.abs() + x1.abs());

        // Diagonal x-range allowed by a slab |x k − c| <= half.
        let slab = |k: f64, c: f64, half: f64, lo: f64, hi: f64| -> Option<(f64, f64)> {
            if k.abs() < 1e-15 {
                return (c.abs() <= half + tol).then_some((lo, hi));
            }
            let (a, b) = ((c - half - tol) / k, (c + half + tol) / k);
            let (a, b) = (a.min(b).max(lo), a.max(b).min(hi));
            (a <= b).then_some((a, b))
        };
        let range = |k: f64, xa: f64, xb: f64| {
            let (a, b) = (k * xa, k * xb);
            (a.min(b), a.max(b))
        };

        // Diagonal index range of centres whose closed rectangle meets x = y.
        let index_range = |ya: f64, yb: f64| -> Option<(usize, usize)> {
            let ia = ((ya - grid.lo()) / h - 0.5 - 1e-9).ceil().max(0.0) as usize;
            let ib = ((yb - grid.lo()) / h - 0.5 + 1e-9).floor();
            if ib < 0.0 {
                return None;
            }
            let ib = (ib as usize).min(n - 1);
            (ia <= ib).then_some((ia, ib))
        };

        let mut out = Vec::new();
        let (t_lo, t_hi) = range(kt, x0, x1);
        let t_lo = (t_lo - hw).max(bt0 - hw);
        let t_hi = (t_hi + hw).min(bt1 + hw);
        if t_lo > t_hi {
            return out;
        }
        let j0 = (t_lo / a_t).ceil() as i64;
        let j1 = (t_hi / a_t).floor() as i64;
        let mut jb = j0;
        while jb <= j1 {
            let je = (jb + BLOCK_ROWS - 1).min(j1);
            // Column ranges of the rows in this block.
            let rows: Vec<(i64, f64, f64, f64, i64, i64)> = (jb..=je)
                .filter_map(|j| {
                    let tc = j as f64 * a_t;
                    let (xa, xb) = slab(kt, tc, hw, x0, x1)?;
                    let (s_lo, s_hi) = range(ks, xa, xb);
                    let s_lo = (s_lo - hl).max(bs0 - hl);
                    let s_hi = (s_hi + hl).min(bs1 + hl);
                    (s_lo <= s_hi).then(|| (j, tc, xa, xb, (s_lo / a_s).ceil() as i64, (s_hi / a_s).floor() as i64))
                })
                .collect();
            jb = je + 1;
            let Some(ilo) = rows.iter().map(|r| r.4).min() else { continue };
            let ihi = rows.iter().map(|r| r.5).max().unwrap();
            let (tb0, tb1) = (rows[0].1, rows[rows.len() - 1].1);
            let mut ib0 = ilo;
            while ib0 <= ihi {
                let ie = (ib0 + BLOCK_COLS - 1).min(ihi);
                let (sb0, sb1) = (ib0 as f64 * a_s, ie as f64 * a_s);
                let block_ib = ib0;
                ib0 = ie + 1;
                // Union of the block's rectangles, same orientation.
                let (ul, uw) = (len + (sb1 - sb0), wid + (tb1 - tb0));
                let (sm, tm) = (0.5 * (sb0 + sb1), 0.5 * (tb0 + tb1));
                let uc = [sm * e[0] + tm * nv[0], sm * e[1] + tm * nv[1]];
                let Some(urange) = slab(kt, tm, 0.5 * uw, x0, x1)
                    .and_then(|(a, b)| slab(ks, sm, 0.5 * ul, a, b))
                    .and_then(|(a, b)| index_range(a, b))
                else {
                    continue;
                };
                let ufl = floor(urange.0, urange.1);
                if ufl > 0.0 && self.density.block_bound(uc, e, ul, uw, len, wid) * (1.0 + 1e-9) <= ufl {
                    continue;
                }
                for &(_, tc, xa, xb, ri0, ri1) in &rows {
                    for i in ri0.max(block_ib)..=ri1.min(ie) {
                        let sc = i as f64 * a_s;
                        let Some((ia, ib)) = slab(ks, sc, hl, xa, xb).and_then(|(a, b)| index_range(a, b)) else { continue };
                        let c = [sc * e[0] + tc * nv[0], sc * e[1] + tc * nv[1]];
                        let r = Rectangle::new(c, e, len, wid).expect("sweep rectangles are valid");
                        let fl = floor(ia, ib);
                        if !self.density.may_exceed(&r, fl) {
                            continue;
                        }
                        let v = self.density.average(&r);
                        if v > fl {
                            out.push((ia, ib, v));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Raise `m` to `v` on each index run, largest values first so every index
/// is written once.
fn paint(m: &mut [f64], mut updates: Vec<(usize, usize, f64)>) {
    if updates.is_empty() {
        return;
    }
    updates.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let n = m.len();
    let mut next: Vec<usize> = (0..=n).collect();
    fn find(next: &mut [usize], mut i: usize) -> usize {
        let mut root = i;
        while next[root] != root {
            root = next[root];
        }
        while next[i] != root {
            let up = next[i];
            next[i] = root;
            i = up;
        }
        root
    }
    for (a, b, v) in updates {
        let mut i = find(&mut next, a);
        while i <= b {
            if v > m[i] {
                m[i] = v;
            }
            next[i] = i + 1;
            i = find(&mut next, i + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pruned_profile_matches_exhaustive_sweep() {
        let grid = Grid::with_spacing(-2.0, 10.0, 0.25).unwrap();
        let f = bkm_grid::Generator::PowerCut { a: -1.0, lo: 1.0, hi: 8.0 }.sample(grid).unwrap();
        let g = bkm_grid::Generator::Gaussian { sigma: 2.0 }.sample(grid).unwrap();
        let op = KakeyaMaximal::with_space(&f, &g, SearchSpace::sweep()).unwrap();
        let shapes = op.full_shapes(8).unwrap();
        let pruned = op.profile(&shapes);
        let mut m = vec![0.0; grid.n()];
        for shape in &shapes {
            for &theta in &shape.angles {
                let ups = op.sweep_angle(theta, shape.len, shape.wid, &|_, _| 0.0);
                paint(&mut m, ups);
            }
        }
        for (a, b) in pruned.values().iter().zip(&m) {
            assert!((a - b).abs() <= 1e-12 * b.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn ladders() {
        assert_eq!(eccentricity_ladder(1), vec![1]);
        assert_eq!(eccentricity_ladder(4), vec![1, 2, 3, 4]);
        assert_eq!(eccentricity_ladder(12), vec![1, 2, 3, 4, 5, 6, 7, 8, 12]);
        assert_eq!(eccentricity_ladder(32), vec![1, 2, 3, 4, 5, 6, 7, 8, 16, 32]);
        let s = scale_ladder(1.0 / 16.0, 6.0);
        assert_eq!(s, vec![0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 6.0]);
    }

    #[test]
    fn angle_lattice_spacing() {
        let sp = SearchSpace::default();
        for k in [1usize, 3, 4, 17] {
            let a = sp.angle_lattice(k as f64);
            assert_eq!(a.len() % 4, 0);
            assert!(PI / a.len() as f64 <= PI / (4.0 * k as f64) + 1e-15);
        }
        assert_eq!(SearchSpace::sweep().angle_count(1024.0), 64);
    }

    #[test]
    fn paint_takes_maxima() {
        let mut m = vec![0.0, 5.0, 0.0, 0.0, 0.0];
        paint(&mut m, vec![(0, 2, 1.0), (1, 4, 3.0), (4, 4, 0.5)]);
        assert_eq!(m, vec![1.0, 5.0, 3.0, 3.0, 3.0]);
    }
}
