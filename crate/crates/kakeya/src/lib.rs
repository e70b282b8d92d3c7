//! Bilinear Kakeya maximal functions on sampled data.
//!
//! For step functions `f, g` on a common grid the averages
//! `|R|⁻¹ ∫_R |f(y₁)||g(y₂)| dy` are computed exactly, and the suprema over
//! rectangle families containing `(x, x)` are searched on explicit lattices:
//! the fixed-scale family `𝓡_{δ,N}`, the union `𝓡_N` over eccentricities up
//! to `N`, directional families `𝓡^Ω`, and the one-dimensional Lacey
//! averages `𝓜_α`. Every reported value is the average of a concrete
//! rectangle, hence a lower bound for the true supremum.

mod density;
mod directions;
mod domination;
mod error;
mod lacey;
mod rect;
mod search;

use std::fmt::Write as _;

use bkm_grid::SampledFunction;

pub use density::{Factor, ProductDensity};
pub use directions::DirectionSet;
pub use domination::{domination_report, domination_report_with, DominationReport, DominationRow, DENOMINATOR_FLOOR};
pub use error::KakeyaError;
pub use lacey::{lacey_maximal, lacey_profile};
pub use rect::{clipped_area, frame, polygon_area, Rectangle, P2};
pub use search::{eccentricity_ladder, scale_ladder, KakeyaMaximal, SearchSpace, Witness};

pub type Result<T> = std::result::Result<T, KakeyaError>;

/// `|R|⁻¹ ∫_R |f(y₁)||g(y₂)| dy`, exact for step functions.
pub fn rect_average(f: &SampledFunction, g: &SampledFunction, r: &Rectangle) -> f64 {
    ProductDensity::new(f, g).average(r)
}

/// The same average summed cell by cell over the bounding box, each cell
/// weighted by its clipped overlap area with `R`.
pub fn rect_average_clipped(f: &SampledFunction, g: &SampledFunction, r: &Rectangle) -> f64 {
    let (bx, by) = r.bbox();
    let (gf, gg) = (f.grid(), g.grid());
    let span = |lo: f64, hi: f64, grid: &bkm_grid::Grid| -> Option<(usize, usize)> {
        let a = ((lo - grid.lo()) / grid.h()).floor().max(0.0);
        let b = ((hi - grid.lo()) / grid.h()).floor().min(grid.n() as f64 - 1.0);
        (a <= b).then_some((a as usize, b as usize))
    };
    let (Some((i0, i1)), Some((j0, j1))) = (span(bx[0], bx[1], gf), span(by[0], by[1], gg)) else {
        return 0.0;
    };
    let mut total = 0.0;
    for j in j0..=j1 {
        let gv = g.values()[j].abs();
        if gv == 0.0 {
            continue;
        }
        let y = [gg.node(j), gg.node(j + 1)];
        for i in i0..=i1 {
            let fv = f.values()[i].abs();
            if fv == 0.0 {
                continue;
            }
            total += fv * gv * clipped_area(r, [gf.node(i), gf.node(i + 1)], y);
        }
    }
    total / r.area()
}

pub fn kakeya_fixed_scale(f: &SampledFunction, g: &SampledFunction, n: usize, delta: f64, x: f64) -> Result<f64> {
    KakeyaMaximal::new(f, g)?.fixed_scale(n, delta, x)
}

pub fn kakeya_full(f: &SampledFunction, g: &SampledFunction, n: usize, x: f64) -> Result<f64> {
    KakeyaMaximal::new(f, g)?.full(n, x)
}

pub fn directional_maximal(f: &SampledFunction, g: &SampledFunction, dirs: &DirectionSet, x: f64) -> Result<f64> {
    Ok(KakeyaMaximal::new(f, g)?.directional(dirs, x))
}

/// Witness rectangles as CSV with header `center_x,center_y,angle,length,width,value`.
pub fn witnesses_csv(witnesses: &[Witness]) -> String {
    let mut s = String::from("center_x,center_y,angle,length,width,value\n");
    for w in witnesses {
        let c = w.rect.center();
        let _ = writeln!(s, "{},{},{},{},{},{}", c[0], c[1], w.rect.angle(), w.rect.length(), w.rect.width(), w.value);
    }
    s
}
