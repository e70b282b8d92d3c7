use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::symbol::MultiplierSymbol;
use crate::{MultiplierError, Result};

/// `n × n` frequency lattice `ζ = (a − n/2) Δζ`; the spatial window is
/// `[−1/(2Δζ), 1/(2Δζ))²` with spacing `1/(n Δζ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelGrid {
    pub n: usize,
    pub spacing: f64,
}

impl KernelGrid {
    pub fn half_window(&self) -> f64 {
        0.5 / self.spacing
    }
}

/// Samples of `K = 𝓕⁻¹m` on the spatial lattice, row-major with `x = (i − n/2)/(nΔζ)`.
pub fn inverse_transform_2d(m: &MultiplierSymbol, grid: &KernelGrid) -> Result<Vec<f64>> {
    let n = grid.n;
    if n < 4 || !n.is_power_of_two() {
        return Err(MultiplierError::BadParameter { name: "kernel lattice size", value: n as f64 });
    }
    let dz = grid.spacing;
    let half = (n / 2) as i64;
    // (−1)^a factors shift both lattices to be centred.
    let sgn = |a: usize| if a % 2 == 0 { 1.0 } else { -1.0 };
    let mut data: Vec<Complex64> = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let (a, b) = (i / n, i % n);
            let v = m.eval((a as i64 - half) as f64 * dz, (b as i64 - half) as f64 * dz);
            Complex64::new(v * sgn(a) * sgn(b), 0.0)
        })
        .collect();
    let fft = FftPlanner::new().plan_fft_inverse(n);
    data.par_chunks_mut(n).for_each(|row| fft.process(row));
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for b in 0..n {
        for a in 0..n {
            col[a] = data[a * n + b];
        }
        fft.process(&mut col);
        for a in 0..n {
            data[a * n + b] = col[a];
        }
    }
    Ok((0..n * n)
        .map(|i| {
            let (a, b) = (i / n, i % n);
            data[i].re * sgn(a) * sgn(b) * dz * dz
        })
        .collect())
}

/// `[∫_{B(0,1)} |K|, ∫_{A_1} |K|, …, ∫_{A_kmax} |K|]` with
/// `A_k = B(0,2^k) ∖ B(0,2^{k−1})`, by midpoint sums on the spatial lattice.
pub fn kernel_l1_profile(m: &MultiplierSymbol, k_max: u32, grid: &KernelGrid) -> Result<Vec<f64>> {
    let need = 2f64.powi(k_max as i32);
    if grid.half_window() < need {
        return Err(MultiplierError::WindowTooSmall { need, have: grid.half_window() });
    }
    let k = inverse_transform_2d(m, grid)?;
    let n = grid.n;
    let dx = 1.0 / (n as f64 * grid.spacing);
    let half = (n / 2) as i64;
    let mut out = vec![0.0; k_max as usize + 1];
    for (i, v) in k.iter().enumerate() {
        let x = (((i / n) as i64 - half) as f64 * dx, ((i % n) as i64 - half) as f64 * dx);
        let r = x.0.hypot(x.1);
        if r >= need {
            continue;
        }
        let idx = if r < 1.0 { 0 } else { (r.log2().floor() as usize + 1).min(k_max as usize) };
        out[idx] += v.abs() * dx * dx;
    }
    Ok(out)
}

/// Total `‖K‖_1` over the whole window.
pub fn kernel_l1_norm(m: &MultiplierSymbol, grid: &KernelGrid) -> Result<f64> {
    let k = inverse_transform_2d(m, grid)?;
    let dx = 1.0 / (grid.n as f64 * grid.spacing);
    Ok(k.iter().map(|v| v.abs()).sum::<f64>() * dx * dx)
}
