use std::f64::consts::PI;

use bkm_grid::{Grid, SampledFunction};
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::symbol::MultiplierSymbol;
use crate::{MultiplierError, Result};

const MAX_PADDED: usize = 1 << 22;

/// Frequency lattice for one input grid. The lattice is `ξ_a = (a − P/2)/(P h)`
/// for `a = 0..=P` with weight 1/2 at both Nyquist ends, which keeps it
/// symmetric and the discrete inversion exact at the grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyPlan {
    grid: Grid,
    padded: usize,
}

impl FrequencyPlan {
    /// Zero-padding factor `pad >= 2`; the padded length is rounded up to a
    /// power of two.
    pub fn new(grid: &Grid, pad: usize) -> Result<Self> {
        if pad < 2 {
            return Err(MultiplierError::BadParameter { name: "padding factor", value: pad as f64 });
        }
        let want = grid.n().checked_mul(pad).ok_or(MultiplierError::PaddingOverflow(grid.n()))?;
        let padded = want.checked_next_power_of_two().filter(|&p| p <= MAX_PADDED).ok_or(MultiplierError::PaddingOverflow(grid.n()))?;
        Ok(Self { grid: grid.clone(), padded })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn padded_len(&self) -> usize {
        self.padded
    }

    /// Lattice spacing `1/(P h)`.
    pub fn spacing(&self) -> f64 {
        1.0 / (self.padded as f64 * self.grid.h())
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let p = self.padded as i64;
        (0..=p).map(|a| (a - p / 2) as f64 * self.spacing()).collect()
    }

    pub fn weight(&self, a: usize) -> f64 {
        if a == 0 || a == self.padded { 0.5 } else { 1.0 }
    }

    /// Symbol values on the lattice, row-major `[a * (P+1) + b]` for `m(ξ_a, η_b)`.
    pub fn symbol_cache(&self, m: &MultiplierSymbol) -> Vec<f64> {
        let fr = self.frequencies();
        let w = fr.len();
        (0..w * w).into_par_iter().map(|i| m.eval(fr[i / w], fr[i % w])).collect()
    }

    /// `f̂(ξ_a) = h Σ_j f_j e^{−2πi ξ_a x_j}` via one FFT.
    pub fn transform(&self, f: &SampledFunction) -> Result<Vec<Complex64>> {
        if f.grid() != &self.grid {
            return Err(MultiplierError::GridMismatch);
        }
        let p = self.padded;
        let mut buf: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); p];
        for (b, &v) in buf.iter_mut().zip(f.values()) {
            b.re = v;
        }
        FftPlanner::new().plan_fft_forward(p).process(&mut buf);
        let x0 = self.grid.center(0);
        let h = self.grid.h();
        let dxi = self.spacing();
        Ok((0..=p)
            .map(|a| {
                let k = a as i64 - (p / 2) as i64;
                let phase = Complex64::from_polar(h, -2.0 * PI * k as f64 * dxi * x0);
                phase * buf[k.rem_euclid(p as i64) as usize]
            })
            .collect())
    }

    /// Anti-diagonal sums `A_s = Σ_{a+b=s} w_a w_b m_ab f̂_a ĝ_b`, `s = 0..=2P`.
    fn antidiagonal(&self, cache: &[f64], fh: &[Complex64], gh: &[Complex64]) -> Vec<Complex64> {
        let p = self.padded;
        let w = p + 1;
        let wf: Vec<Complex64> = (0..w).map(|a| fh[a] * self.weight(a)).collect();
        let wg: Vec<Complex64> = (0..w).map(|b| gh[b] * self.weight(b)).collect();
        (0..=2 * p)
            .into_par_iter()
            .map(|s| {
                let lo = s.saturating_sub(p);
                let hi = s.min(p);
                let mut acc = Complex64::new(0.0, 0.0);
                for a in lo..=hi {
                    let b = s - a;
                    acc += wf[a] * wg[b] * cache[a * w + b];
                }
                acc
            })
            .collect()
    }

    /// `T_m(f, g)` at the grid points, complex.
    pub fn apply_complex(&self, cache: &[f64], f: &SampledFunction, g: &SampledFunction) -> Result<Vec<Complex64>> {
        if g.grid() != &self.grid {
            return Err(MultiplierError::GridMismatch);
        }
        let (fh, gh) = (self.transform(f)?, self.transform(g)?);
        let diag = self.antidiagonal(cache, &fh, &gh);
        let p = self.padded;
        let dxi = self.spacing();
        let x0 = self.grid.center(0);
        // Fold ζ_s = (s − P) Δξ modulo P; the grid phases e^{2πi j s/P} agree.
        let mut folded = vec![Complex64::new(0.0, 0.0); p];
        for (s, v) in diag.iter().enumerate() {
            let k = s as i64 - p as i64;
            let phase = Complex64::from_polar(1.0, 2.0 * PI * k as f64 * dxi * x0);
            folded[k.rem_euclid(p as i64) as usize] += v * phase;
        }
        FftPlanner::new().plan_fft_inverse(p).process(&mut folded);
        let scale = dxi * dxi;
        Ok(folded[..self.grid.n()].iter().map(|z| z * scale).collect())
    }

    /// `T_m(f, g)(x)` at an arbitrary point.
    pub fn evaluate_at(&self, cache: &[f64], f: &SampledFunction, g: &SampledFunction, x: f64) -> Result<Complex64> {
        let (fh, gh) = (self.transform(f)?, self.transform(g)?);
        let diag = self.antidiagonal(cache, &fh, &gh);
        let p = self.padded as i64;
        let dxi = self.spacing();
        let sum: Complex64 = diag
            .iter()
            .enumerate()
            .map(|(s, v)| v * Complex64::from_polar(1.0, 2.0 * PI * (s as i64 - p) as f64 * dxi * x))
            .sum();
        Ok(sum * dxi * dxi)
    }
}

fn real_part(plan: &FrequencyPlan, out: Vec<Complex64>, check: bool) -> Result<SampledFunction> {
    if check {
        let re: f64 = out.iter().map(|z| z.re * z.re).sum::<f64>().sqrt();
        let im: f64 = out.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
        if im > 1e-10 * re.max(f64::MIN_POSITIVE) && im > 1e-300 {
            return Err(MultiplierError::ImaginaryResidue(im / re));
        }
    }
    Ok(SampledFunction::new(plan.grid().clone(), out.iter().map(|z| z.re).collect())?)
}

/// `T_m(f,g)(x) = ∬ m(ξ,η) f̂(ξ) ĝ(η) e^{2πix(ξ+η)} dξ dη` on the grid of `f`,
/// with padding factor 2. For even symbols the imaginary residue is checked
/// and discarded; otherwise the real part is returned.
pub fn apply_bilinear_multiplier(m: &MultiplierSymbol, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    if f.grid() != g.grid() {
        return Err(MultiplierError::GridMismatch);
    }
    let plan = FrequencyPlan::new(f.grid(), 2)?;
    let cache = plan.symbol_cache(m);
    let out = plan.apply_complex(&cache, f, g)?;
    real_part(&plan, out, m.is_even())
}

/// The same operator with a prebuilt plan and symbol cache.
pub fn apply_with_cache(plan: &FrequencyPlan, cache: &[f64], even: bool, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    let out = plan.apply_complex(cache, f, g)?;
    real_part(plan, out, even)
}

/// Reference evaluation: direct DFT sums for `f̂, ĝ` and the explicit double
/// sum over the lattice at every grid point, `O(n P²)`.
pub fn quadrature_oracle(m: &MultiplierSymbol, f: &SampledFunction, g: &SampledFunction) -> Result<Vec<Complex64>> {
    if f.grid() != g.grid() {
        return Err(MultiplierError::GridMismatch);
    }
    let plan = FrequencyPlan::new(f.grid(), 2)?;
    let fr = plan.frequencies();
    let w = fr.len();
    let grid = f.grid();
    let h = grid.h();
    let xs = grid.centers();
    let direct = |u: &SampledFunction| -> Vec<Complex64> {
        fr.iter()
            .map(|&xi| {
                xs.iter()
                    .zip(u.values())
                    .map(|(&x, &v)| Complex64::from_polar(h * v, -2.0 * PI * xi * x))
                    .sum()
            })
            .collect()
    };
    let (fh, gh) = (direct(f), direct(g));
    let msym: Vec<f64> = (0..w * w).map(|i| m.eval(fr[i / w], fr[i % w])).collect();
    let dxi = plan.spacing();
    Ok(xs
        .par_iter()
        .map(|&x| {
            let ef: Vec<Complex64> = (0..w).map(|a| fh[a] * plan.weight(a) * Complex64::from_polar(1.0, 2.0 * PI * fr[a] * x)).collect();
            let eg: Vec<Complex64> = (0..w).map(|b| gh[b] * plan.weight(b) * Complex64::from_polar(1.0, 2.0 * PI * fr[b] * x)).collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..w {
                let row = &msym[a * w..(a + 1) * w];
                let inner: Complex64 = row.iter().zip(&eg).map(|(&mv, &e)| e * mv).sum();
                acc += ef[a] * inner;
            }
            acc * dxi * dxi
        })
        .collect())
}
