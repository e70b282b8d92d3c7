use bkm_grid::{Generator, Grid, Sampled2d, SampledFunction};
use bkm_kakeya::{ProductDensity, Rectangle};
use rayon::prelude::*;

use crate::{covers, ExtremalError, LowerBoundCheck, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanRow {
    pub k: usize,
    pub rect: Rectangle,
    /// `(1/N) ∫_{R_k} f_N`.
    pub average: f64,
}

/// `f_N(y, z) = (yz)^{−1/2}` on `[1, N)²` with the fan rectangles and the
/// two assembled lower-bound sums.
#[derive(Debug, Clone)]
pub struct ProductExtremal {
    pub n: usize,
    pub factor_y: SampledFunction,
    pub factor_z: SampledFunction,
    pub f: Sampled2d,
    /// `(log N)²`.
    pub norm_sq: f64,
    pub sampled_norm_sq: f64,
    /// `k = 2..=N`.
    pub fan: Vec<FanRow>,
    /// Fan averages against `log(k/4)/(Nk)^{1/2}` for `k >= 8`.
    pub check: LowerBoundCheck,
    /// `Σ_k avg_k² · |S_k|`, `S_k` the sector `(k−1)/N <= x₂/x₁ < k/N`,
    /// `|x| <= N`, on which the maximal function is at least `avg_k`.
    pub fixed_sum: f64,
    /// `Σ avg(R_x)²` over integer points `x ∈ [1, N]²` with `4 <= |x| <= N`.
    pub full_sum: f64,
}

fn below(u: [f64; 2]) -> [f64; 2] {
    [u[1], -u[0]]
}

/// The `1 × N` rectangle with vertices `O` and `P_k = N (N, k)/|(N, k)|`,
/// lying below the line `z = (k/N) y`.
pub fn fan_rectangle(n: usize, k: usize) -> Result<Rectangle> {
    let len = n as f64;
    let r = len.hypot(k as f64);
    let u = [len / r, k as f64 / r];
    let v = below(u);
    let c = [0.5 * len * u[0] + 0.5 * v[0], 0.5 * len * u[1] + 0.5 * v[1]];
    Ok(Rectangle::new(c, u, len, 1.0)?)
}

/// The `(|x| − 2) × (|x| − 2)/N` rectangle with a long side on the ray
/// through `x` from radius 2 to `|x|`, lying below that ray.
pub fn radial_rectangle(n: usize, x: [f64; 2]) -> Result<Rectangle> {
    let r = x[0].hypot(x[1]);
    if !(r > 2.0) {
        return Err(ExtremalError::BadParameter { name: "|x|", value: r });
    }
    let u = [x[0] / r, x[1] / r];
    let v = below(u);
    let len = r - 2.0;
    let wid = len / n as f64;
    let s = 0.5 * (r + 2.0);
    let c = [s * u[0] + 0.5 * wid * v[0], s * u[1] + 0.5 * wid * v[1]];
    Ok(Rectangle::new(c, u, len, wid)?)
}

pub fn product_extremal_linear(n: usize, gy: Grid, gz: Grid) -> Result<ProductExtremal> {
    if n < 8 {
        return Err(ExtremalError::BadParameter { name: "N", value: n as f64 });
    }
    for g in [&gy, &gz] {
        if g.h() > 0.25 {
            return Err(ExtremalError::TooCoarse { h: g.h() });
        }
        covers(g, 0.0, n as f64)?;
    }
    let gen = Generator::PowerCut { a: -0.5, lo: 1.0, hi: n as f64 };
    let (fy, fz) = (gen.sample(gy)?, gen.sample(gz)?);
    let f = Sampled2d::tensor(&fy, &fz);
    let density = ProductDensity::new(&fy, &fz);
    let len = n as f64;

    let fan = (2..=n)
        .into_par_iter()
        .map(|k| {
            let rect = fan_rectangle(n, k)?;
            Ok(FanRow { k, rect, average: density.average(&rect) })
        })
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<(f64, f64, f64)> = fan
        .iter()
        .filter(|r| r.k >= 8)
        .map(|r| (r.k as f64, r.average, (r.k as f64 / 4.0).ln() / (len * r.k as f64).sqrt()))
        .collect();
    let check = LowerBoundCheck::fit(&samples);
    let fixed_sum = fan
        .iter()
        .map(|r| {
            let k = r.k as f64;
            let sector = 0.5 * len * len * ((k / len).atan() - ((k - 1.0) / len).atan());
            r.average * r.average * sector
        })
        .sum();

    let rows: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|a| {
            let mut s = 0.0;
            for b in 1..=n {
                let x = [a as f64, b as f64];
                let r = x[0].hypot(x[1]);
                if (4.0..=len).contains(&r) {
                    let rect = radial_rectangle(n, x).expect("radius above 2");
                    let v = density.average(&rect);
                    s += v * v;
                }
            }
            s
        })
        .collect();
    let full_sum = rows.iter().sum();

    let norm_sq = len.ln().powi(2);
    let sampled_norm_sq = f.lp_norm_pow(2.0);
    Ok(ProductExtremal { n, factor_y: fy, factor_z: fz, f, norm_sq, sampled_norm_sq, fan, check, fixed_sum, full_sum })
}
