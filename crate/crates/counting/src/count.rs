use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use bkm_kakeya::Rectangle;
use rayon::prelude::*;

use crate::family::WitnessFamily;
use crate::{CountingError, Result};

/// Slack on the class boundaries, so `(1, 1)/√2` lands in `A₃` whichever
/// way its first coordinate rounds.
const CLASS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DirectionClass {
    /// `1/√2 < |e₁| <= 1`
    A1,
    /// `0 <= |e₁| < ½`
    A2,
    /// `½ <= |e₁| <= 1/√2`
    A3,
}

impl DirectionClass {
    pub const ALL: [DirectionClass; 3] = [DirectionClass::A1, DirectionClass::A2, DirectionClass::A3];

    pub fn of(e: [f64; 2]) -> Self {
        let a = e[0].abs();
        if a > FRAC_1_SQRT_2 + CLASS_SLACK {
            DirectionClass::A1
        } else if a < 0.5 - CLASS_SLACK {
            DirectionClass::A2
        } else {
            DirectionClass::A3
        }
    }

    /// `k` in `A_k`.
    pub fn k(self) -> usize {
        match self {
            DirectionClass::A1 => 1,
            DirectionClass::A2 => 2,
            DirectionClass::A3 => 3,
        }
    }

    pub fn from_k(k: usize) -> Result<Self> {
        match k {
            1 => Ok(DirectionClass::A1),
            2 => Ok(DirectionClass::A2),
            3 => Ok(DirectionClass::A3),
            _ => Err(CountingError::BadParameter { name: "k", value: k as f64 }),
        }
    }
}

/// The index sets `A₁, A₂, A₃`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DirectionClasses {
    pub a1: Vec<i64>,
    pub a2: Vec<i64>,
    pub a3: Vec<i64>,
}

impl DirectionClasses {
    pub fn get(&self, class: DirectionClass) -> &[i64] {
        match class {
            DirectionClass::A1 => &self.a1,
            DirectionClass::A2 => &self.a2,
            DirectionClass::A3 => &self.a3,
        }
    }
}

pub fn classify_directions(fam: &WitnessFamily) -> DirectionClasses {
    let mut out = DirectionClasses::default();
    for m in fam.members() {
        match DirectionClass::of(m.rect.direction()) {
            DirectionClass::A1 => out.a1.push(m.i),
            DirectionClass::A2 => out.a2.push(m.i),
            DirectionClass::A3 => out.a3.push(m.i),
        }
    }
    out
}

fn square(j: [i64; 2]) -> ([f64; 2], [f64; 2]) {
    let (a, b) = (j[0] as f64, j[1] as f64);
    ([a - 0.5, a + 0.5], [b - 0.5, b + 0.5])
}

/// `γ = {j ∈ ℤ² : Q_j ∩ R ≠ ∅}` with closed squares, by separating axes over
/// the bounding box.
pub fn gamma(rect: &Rectangle) -> Vec<[i64; 2]> {
    let (bx, by) = rect.bbox();
    let mut out = Vec::new();
    for j1 in (bx[0] - 0.5).ceil() as i64..=(bx[1] + 0.5).floor() as i64 {
        for j2 in (by[0] - 0.5).ceil() as i64..=(by[1] + 0.5).floor() as i64 {
            let (x, y) = square([j1, j2]);
            if rect.intersects_box(x, y) {
                out.push([j1, j2]);
            }
        }
    }
    out
}

/// `γ` column by column: `(j₁, lo, hi)` with `j₂ ∈ lo..=hi`. Each column's
/// range is read off the `y₂`-extent of `R` cut by the closed strip
/// `|y₁ − j₁| <= ½`.
pub fn column_runs(rect: &Rectangle) -> Vec<(i64, i64, i64)> {
    let corners = rect.corners();
    let (bx, _) = rect.bbox();
    let mut out = Vec::new();
    for c in (bx[0] - 0.5).ceil() as i64..=(bx[1] + 0.5).floor() as i64 {
        let (a, b) = (c as f64 - 0.5, c as f64 + 0.5);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..4 {
            let (p, q) = (corners[k], corners[(k + 1) % 4]);
            if p[0] >= a && p[0] <= b {
                lo = lo.min(p[1]);
                hi = hi.max(p[1]);
            }
            for x in [a, b] {
                if (p[0] - x) * (q[0] - x) < 0.0 {
                    let y = p[1] + (x - p[0]) / (q[0] - p[0]) * (q[1] - p[1]);
                    lo = lo.min(y);
                    hi = hi.max(y);
                }
            }
        }
        if lo <= hi {
            out.push((c, (lo - 0.5).ceil() as i64, (hi + 0.5).floor() as i64));
        }
    }
    out
}

/// `γ` row by row: `(j₂, lo, hi)` with `j₁ ∈ lo..=hi`.
pub fn row_runs(rect: &Rectangle) -> Vec<(i64, i64, i64)> {
    column_runs(&rect.reflected())
}

/// `|γ|` from the column runs.
pub fn gamma_len(rect: &Rectangle) -> usize {
    column_runs(rect).iter().map(|&(_, lo, hi)| (hi - lo + 1) as usize).sum()
}

/// Cell index `j` with `y ∈ [j − ½, j + ½)`.
pub fn cell_of(y: f64) -> i64 {
    (y + 0.5).floor() as i64
}

fn check_lk(l: usize, k: usize) -> Result<DirectionClass> {
    if !(l == 1 || l == 2) {
        return Err(CountingError::BadParameter { name: "l", value: l as f64 });
    }
    DirectionClass::from_k(k)
}

/// `h_{l,k}(y) = Σ_{i ∈ A_k} Σ_{j ∈ γ_i} χ_{J_{l,j}}(y)` with
/// `J_{l,j} = [j_l − ½, j_l + ½)`, counted directly from [`gamma`].
pub fn h_function(fam: &WitnessFamily, l: usize, k: usize, y: f64) -> Result<u64> {
    let class = check_lk(l, k)?;
    let c = cell_of(y);
    Ok(fam
        .members()
        .iter()
        .filter(|m| DirectionClass::of(m.rect.direction()) == class)
        .map(|m| gamma(&m.rect).iter().filter(|j| j[l - 1] == c).count() as u64)
        .sum())
}

/// `h_{l,k}` on the integer lattice: `counts[y − lo]` for `y ∈ lo..lo + len`,
/// zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HProfile {
    pub l: usize,
    pub k: usize,
    pub lo: i64,
    pub counts: Vec<u64>,
}

impl HProfile {
    pub fn value_at(&self, y: f64) -> u64 {
        let c = cell_of(y) - self.lo;
        if c < 0 {
            return 0;
        }
        self.counts.get(c as usize).copied().unwrap_or(0)
    }

    pub fn sup(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Lattice point of the first maximum.
    pub fn argmax(&self) -> Option<i64> {
        let m = self.sup();
        (m > 0).then(|| self.lo + self.counts.iter().position(|&v| v == m).unwrap() as i64)
    }
}

struct Runs {
    class: DirectionClass,
    cols: Vec<(i64, i64, i64)>,
    rows: Vec<(i64, i64, i64)>,
}

fn all_runs(fam: &WitnessFamily) -> Vec<Runs> {
    fam.members()
        .par_iter()
        .map(|m| Runs { class: DirectionClass::of(m.rect.direction()), cols: column_runs(&m.rect), rows: row_runs(&m.rect) })
        .collect()
}

fn profiles_from(runs: &[Runs]) -> Vec<HProfile> {
    let mut out = Vec::with_capacity(6);
    for l in 1..=2 {
        let pick = |r: &Runs| if l == 1 { r.cols.clone() } else { r.rows.clone() };
        let (lo, hi) = runs
            .iter()
            .flat_map(|r| pick(r).into_iter().map(|t| t.0))
            .fold((i64::MAX, i64::MIN), |(a, b), c| (a.min(c), b.max(c)));
        for class in DirectionClass::ALL {
            let (lo, len) = if lo <= hi { (lo, (hi - lo + 1) as usize) } else { (0, 0) };
            let mut counts = vec![0u64; len];
            for r in runs.iter().filter(|r| r.class == class) {
                for (c, a, b) in pick(r) {
                    counts[(c - lo) as usize] += (b - a + 1) as u64;
                }
            }
            out.push(HProfile { l, k: class.k(), lo, counts });
        }
    }
    out
}

/// All six `h_{l,k}` on the integer lattice, ordered `(1,1), (1,2), (1,3),
/// (2,1), (2,2), (2,3)`.
pub fn h_profiles(fam: &WitnessFamily) -> Vec<HProfile> {
    profiles_from(&all_runs(fam))
}

/// CSV with header `y,l,k,value`, one row per lattice point of each profile.
pub fn h_profiles_csv(profiles: &[HProfile]) -> String {
    let mut s = String::from("y,l,k,value\n");
    for p in profiles {
        for (d, v) in p.counts.iter().enumerate() {
            let _ = writeln!(s, "{},{},{},{}", p.lo + d as i64, p.l, p.k, v);
        }
    }
    s
}

/// A column (or row) where `R_i` meets more unit squares than
/// `N/(d − 2) + 2`, `d = |i − c| >= 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripViolation {
    pub i: i64,
    pub l: usize,
    pub c: i64,
    pub count: u64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountingReport {
    pub n: usize,
    pub members: usize,
    /// `sup h_{1,1}, sup h_{2,2}`
    pub sup_diag: [u64; 2],
    /// `sup h_{1,3}, sup h_{2,3}`
    pub sup_a3: [u64; 2],
    /// `sup h_{1,2}, sup h_{2,1}`
    pub sup_cross: [u64; 2],
    /// `max_l sup h_{l,l} / N`
    pub diag_ratio: f64,
    /// `max_l sup h_{l,3} / N`
    pub a3_ratio: f64,
    /// `max_{l≠k} sup h_{l,k} / (N log N)`
    pub cross_ratio: f64,
    pub max_gamma: usize,
    /// `|γ_i| <= 3(N + 2)` for every member.
    pub gamma_bound_holds: bool,
    /// `sup h_{l,k} <= |A_k| · max |γ_i|` for every `(l, k)`.
    pub trivial_bound_holds: bool,
    /// Strip counts compared against `N/(d − 2) + 2`.
    pub strip_checks: usize,
    pub strip_violations: Vec<StripViolation>,
    /// Largest `count / (N/(d − 2) + 2)` seen.
    pub strip_worst: f64,
    /// Checks failing `count <= 2N/(d − 2) + 2`, which also accounts for the
    /// slant of `R_i` across the strip.
    pub slanted_violations: usize,
}

pub fn verify_counting_bounds(fam: &WitnessFamily) -> CountingReport {
    let n = fam.n();
    let nf = n as f64;
    let runs = all_runs(fam);
    let profiles = profiles_from(&runs);
    let sup = |l: usize, k: usize| profiles[(l - 1) * 3 + (k - 1)].sup();

    let gammas: Vec<usize> = runs.iter().map(|r| r.cols.iter().map(|&(_, a, b)| (b - a + 1) as usize).sum()).collect();
    let max_gamma = gammas.iter().copied().max().unwrap_or(0);
    let gamma_bound_holds = gammas.iter().all(|&g| g <= 3 * (n + 2));
    let mut class_size = [0u64; 3];
    for r in &runs {
        class_size[r.class.k() - 1] += 1;
    }
    let trivial_bound_holds = profiles.iter().all(|p| p.sup() <= class_size[p.k - 1] * max_gamma as u64);

    let mut strip_checks = 0;
    let mut strip_violations = Vec::new();
    let mut strip_worst = 0.0f64;
    let mut slanted_violations = 0;
    for (m, r) in fam.members().iter().zip(&runs) {
        for (l, list) in [(1, &r.cols), (2, &r.rows)] {
            for &(c, a, b) in list {
                let d = (m.i - c).abs();
                if d < 3 {
                    continue;
                }
                let count = (b - a + 1) as u64;
                let bound = nf / (d - 2) as f64 + 2.0;
                strip_checks += 1;
                strip_worst = strip_worst.max(count as f64 / bound);
                if count as f64 > bound {
                    strip_violations.push(StripViolation { i: m.i, l, c, count, bound });
                }
                if count as f64 > 2.0 * nf / (d - 2) as f64 + 2.0 {
                    slanted_violations += 1;
                }
            }
        }
    }

    let sup_diag = [sup(1, 1), sup(2, 2)];
    let sup_a3 = [sup(1, 3), sup(2, 3)];
    let sup_cross = [sup(1, 2), sup(2, 1)];
    let max2 = |v: [u64; 2]| v[0].max(v[1]) as f64;
    CountingReport {
        n,
        members: fam.len(),
        sup_diag,
        sup_a3,
        sup_cross,
        diag_ratio: max2(sup_diag) / nf,
        a3_ratio: max2(sup_a3) / nf,
        cross_ratio: max2(sup_cross) / (nf * nf.ln()),
        max_gamma,
        gamma_bound_holds,
        trivial_bound_holds,
        strip_checks,
        strip_violations,
        strip_worst,
        slanted_violations,
    }
}
