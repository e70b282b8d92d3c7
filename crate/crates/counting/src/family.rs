use std::fmt::Write as _;
use std::ops::RangeInclusive;

use bkm_grid::SampledFunction;
use bkm_kakeya::{KakeyaMaximal, Rectangle, SearchSpace, Witness};
use rand::Rng;
use rayon::prelude::*;

use crate::{CountingError, Result};

/// Points of `I_i` at which a selected witness is re-checked.
pub const VERIFY_SAMPLES: usize = 8;

/// `I_i = [i − ½, i + ½)`.
pub fn interval(i: i64) -> (f64, f64) {
    (i as f64 - 0.5, i as f64 + 0.5)
}

/// Whether `{(x, x) : x ∈ I_i}` meets the closed rectangle.
pub fn meets_interval(rect: &Rectangle, i: i64) -> bool {
    let (a, b) = interval(i);
    rect.diagonal_interval().is_some_and(|(lo, hi)| lo < b && hi >= a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Member {
    pub i: i64,
    pub rect: Rectangle,
    /// The rectangle's average when it was chosen by a search.
    pub value: Option<f64>,
}

/// One `1 × N` rectangle per interval index, sorted by index.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessFamily {
    n: usize,
    members: Vec<Member>,
}

impl WitnessFamily {
    pub fn new(n: usize, mut members: Vec<Member>) -> Result<Self> {
        if n < 2 {
            return Err(CountingError::BadParameter { name: "N", value: n as f64 });
        }
        members.sort_by_key(|m| m.i);
        for w in members.windows(2) {
            if w[0].i == w[1].i {
                return Err(CountingError::InvalidMember { i: w[0].i, reason: "duplicate index" });
            }
        }
        for m in &members {
            check_member(n, m)?;
        }
        Ok(Self { n, members })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, members: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, i: i64) -> Option<&Member> {
        self.members.binary_search_by_key(&i, |m| m.i).ok().map(|k| &self.members[k])
    }

    /// Union with a family on disjoint indices.
    pub fn merged(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(CountingError::BadParameter { name: "N", value: other.n as f64 });
        }
        Self::new(self.n, self.members.iter().chain(&other.members).copied().collect())
    }

    /// CSV with header `i,center_x,center_y,angle`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,center_x,center_y,angle\n");
        for m in &self.members {
            let c = m.rect.center();
            let _ = writeln!(s, "{},{},{},{}", m.i, c[0], c[1], m.rect.angle());
        }
        s
    }
}

fn check_member(n: usize, m: &Member) -> Result<()> {
    let r = &m.rect;
    let tol = 1e-9 * n as f64;
    if (r.length() - n as f64).abs() > tol || (r.width() - 1.0).abs() > 1e-9 {
        return Err(CountingError::InvalidMember { i: m.i, reason: "dimensions are not 1 × N" });
    }
    if !meets_interval(r, m.i) {
        return Err(CountingError::InvalidMember { i: m.i, reason: "misses the diagonal over its interval" });
    }
    Ok(())
}

/// For every `I_i` on which `𝓜_{𝓡_{1,N}}(f, g)` is nonzero, a rectangle whose
/// average is at least half the maximal function at the midpoint and at
/// [`VERIFY_SAMPLES`] points of `I_i`.
///
/// The rectangle found at the midpoint is kept when it passes; otherwise it
/// is replaced by the one found at the sample with the largest value, which
/// passes by construction.
pub fn select_witness_family(f: &SampledFunction, g: &SampledFunction, n: usize) -> Result<WitnessFamily> {
    select_witness_family_with(f, g, n, SearchSpace::default())
}

pub fn select_witness_family_with(f: &SampledFunction, g: &SampledFunction, n: usize, space: SearchSpace) -> Result<WitnessFamily> {
    let op = KakeyaMaximal::with_space(f, g, space)?;
    let (Some((fa, fb)), Some((ga, gb))) = (op.density().f().support_interval(), op.density().g().support_interval()) else {
        return Err(CountingError::EmptyFamily);
    };
    // A 1 × N rectangle through (x, x) stays within N + 1 of it.
    let reach = n as f64 + 2.0;
    let lo = (fa.min(ga) - reach).floor() as i64;
    let hi = (fb.max(gb) + reach).ceil() as i64;
    let picked: Vec<Option<Member>> = (lo..=hi)
        .into_par_iter()
        .map(|i| -> Result<Option<Member>> {
            let mid = op.fixed_scale_witness(n, 1.0, i as f64)?;
            let mut best: Option<Witness> = None;
            for k in 0..VERIFY_SAMPLES {
                let x = i as f64 - 0.5 + (k as f64 + 0.5) / VERIFY_SAMPLES as f64;
                if let Some(w) = op.fixed_scale_witness(n, 1.0, x)? {
                    if best.map_or(true, |b| w.value > b.value) {
                        best = Some(w);
                    }
                }
            }
            let top = best.map_or(0.0, |b| b.value).max(mid.map_or(0.0, |w| w.value));
            let keep = match mid {
                Some(w) if w.value >= 0.5 * top => Some(w),
                _ => best,
            };
            Ok(keep.filter(|w| w.value > 0.0).map(|w| Member { i, rect: w.rect, value: Some(w.value) }))
        })
        .collect::<Result<_>>()?;
    let members: Vec<Member> = picked.into_iter().flatten().collect();
    if members.is_empty() {
        return Err(CountingError::EmptyFamily);
    }
    WitnessFamily::new(n, members)
}

/// One rectangle per `i` in `indices`: direction uniform on the circle, the
/// diagonal point uniform on `I_i`, and its position inside the rectangle
/// uniform.
pub fn random_family(n: usize, indices: RangeInclusive<i64>, rng: &mut impl Rng) -> Result<WitnessFamily> {
    let len = n as f64;
    let members = indices
        .map(|i| {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let x = rng.gen_range(i as f64 - 0.5..i as f64 + 0.5);
            let s = rng.gen_range(-0.5 * len..=0.5 * len);
            let t = rng.gen_range(-0.5..=0.5);
            let rect = Rectangle::anchored([x, x], theta, s, t, len, 1.0)?;
            Ok(Member { i, rect, value: None })
        })
        .collect::<Result<Vec<_>>>()?;
    WitnessFamily::new(n, members)
}

/// Rectangles with a short-side midpoint at `(i, i)`, `1 <= i < N`, tilted as
/// steeply as their length allows while still reaching the column
/// `y₁ = −½`. Column 0 then meets about `N / i` squares of `R_i`.
pub fn fan_family(n: usize) -> Result<WitnessFamily> {
    if n < 2 {
        return Err(CountingError::BadParameter { name: "N", value: n as f64 });
    }
    let len = n as f64;
    let members = (1..n as i64)
        .map(|i| {
            let dx = i as f64 + 0.5;
            let dy = (len * len - dx * dx).sqrt();
            let e = [-dx / len, -dy / len];
            let c = [i as f64 + 0.5 * len * e[0], i as f64 + 0.5 * len * e[1]];
            Ok(Member { i, rect: Rectangle::new(c, e, len, 1.0)?, value: None })
        })
        .collect::<Result<Vec<_>>>()?;
    WitnessFamily::new(n, members)
}
