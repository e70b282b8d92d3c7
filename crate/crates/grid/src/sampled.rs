use crate::{GridError, Result};

/// Uniform partition of `[lo, hi]` into `n` cells; samples sit at cell centres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo && n >= 2) {
            return Err(GridError::InvalidGrid { lo, hi, n });
        }
        Ok(Self { lo, hi, n })
    }

    /// Grid on `[lo, hi]` whose spacing is at most `h`.
    pub fn with_spacing(lo: f64, hi: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(GridError::InvalidGrid { lo, hi, n: 0 });
        }
        let n = ((hi - lo) / h - 1e-9).ceil().max(2.0) as usize;
        Self::new(lo, hi, n)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.h()
    }

    pub fn node(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.h()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }

    /// Index of the half-open cell `[node(i), node(i+1))` holding `x`.
    pub fn cell_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x < self.hi) {
            return None;
        }
        let i = ((x - self.lo) / self.h()).floor() as usize;
        Some(i.min(self.n - 1))
    }

    /// Same window, twice the resolution.
    pub fn refined(&self) -> Self {
        Self { n: 2 * self.n, ..*self }
    }
}

/// Real samples on a [`Grid`], extended by zero outside `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(GridError::LengthMismatch { expected: grid.n(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        let values = (0..grid.n()).map(|i| f(grid.center(i))).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![0.0; grid.n()] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn h(&self) -> f64 {
        self.grid.h()
    }

    /// Piecewise-constant evaluation; zero outside the window.
    pub fn value_at(&self, x: f64) -> f64 {
        self.grid.cell_of(x).map_or(0.0, |i| self.values[i])
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| c * v).collect() }
    }

    pub fn abs(&self) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v.abs()).collect() }
    }

    pub fn combine(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(GridError::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self::new(self.grid, values)
    }

    /// Midpoint-rule integral.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.h()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// First and last indices with a nonzero sample.
    pub fn support(&self) -> Option<(usize, usize)> {
        let first = self.values.iter().position(|&v| v != 0.0)?;
        let last = self.values.iter().rposition(|&v| v != 0.0)?;
        Some((first, last))
    }

    /// Resample onto another grid by piecewise-constant lookup at its centres.
    pub fn resample(&self, grid: Grid) -> Self {
        let values = (0..grid.n()).map(|i| self.value_at(grid.center(i))).collect();
        Self { grid, values }
    }
}

/// Samples on a tensor grid, stored row-major with `y` as the fast index:
/// `values[iz * gy.n() + iy]` is the value at `(gy.center(iy), gz.center(iz))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled2d {
    gy: Grid,
    gz: Grid,
    values: Vec<f64>,
}

impl Sampled2d {
    pub fn new(gy: Grid, gz: Grid, values: Vec<f64>) -> Result<Self> {
        let expected = gy.n() * gz.n();
        if values.len() != expected {
            return Err(GridError::LengthMismatch { expected, got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite(i));
        }
        Ok(Self { gy, gz, values })
    }

    pub fn tensor(fy: &SampledFunction, fz: &SampledFunction) -> Self {
        let (gy, gz) = (*fy.grid(), *fz.grid());
        let mut values = Vec::with_capacity(gy.n() * gz.n());
        for &vz in fz.values() {
            values.extend(fy.values().iter().map(|&vy| vy * vz));
        }
        Self { gy, gz, values }
    }

    pub fn grid_y(&self) -> &Grid {
        &self.gy
    }

    pub fn grid_z(&self) -> &Grid {
        &self.gz
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, iy: usize, iz: usize) -> f64 {
        self.values[iz * self.gy.n() + iy]
    }

    pub fn value_at(&self, y: f64, z: f64) -> f64 {
        match (self.gy.cell_of(y), self.gz.cell_of(z)) {
            (Some(iy), Some(iz)) => self.get(iy, iz),
            _ => 0.0,
        }
    }

    pub fn cell_area(&self) -> f64 {
        self.gy.h() * self.gz.h()
    }

    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * self.cell_area()
    }
}
