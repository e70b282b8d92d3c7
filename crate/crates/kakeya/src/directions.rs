use std::f64::consts::PI;

use crate::{KakeyaError, Result};

/// A nonempty set of unit vectors `Ω`; a vector and its negative give the
/// same rectangles.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    dirs: Vec<[f64; 2]>,
}

impl DirectionSet {
    pub fn new(vectors: &[[f64; 2]]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(KakeyaError::EmptyDirections);
        }
        let dirs = vectors
            .iter()
            .map(|v| {
                let n = v[0].hypot(v[1]);
                if n > 0.0 && n.is_finite() {
                    Ok([v[0] / n, v[1] / n])
                } else {
                    Err(KakeyaError::BadDirection(v[0], v[1]))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { dirs })
    }

    /// `Ω_α = {(1, α)/|(1, α)|}`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        Self::new(&[[1.0, alpha]])
    }

    /// The `n` angles `jπ/n`, `0 <= j < n`.
    pub fn lattice(n: usize) -> Result<Self> {
        let v: Vec<[f64; 2]> = (0..n).map(|j| {
            let a = PI * j as f64 / n as f64;
            [a.cos(), a.sin()]
        }).collect();
        Self::new(&v)
    }

    pub fn vectors(&self) -> &[[f64; 2]] {
        &self.dirs
    }

    /// Angles folded into `[0, π)`.
    pub fn angles(&self) -> Vec<f64> {
        self.dirs
            .iter()
            .map(|d| {
                let a = d[1].atan2(d[0]).rem_euclid(PI);
                if a >= PI { 0.0 } else { a }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_rejects() {
        let d = DirectionSet::from_alpha(1.0).unwrap();
        let v = d.vectors()[0];
        assert!((v[0] - v[1]).abs() < 1e-15 && (v[0].hypot(v[1]) - 1.0).abs() < 1e-15);
        assert!((d.angles()[0] - PI / 4.0).abs() < 1e-15);
        assert!(DirectionSet::new(&[]).is_err());
        assert!(DirectionSet::new(&[[0.0, 0.0]]).is_err());
        let l = DirectionSet::lattice(8).unwrap();
        assert_eq!(l.len(), 8);
        assert!(DirectionSet::new(&[[-1.0, 0.0]]).unwrap().angles()[0].abs() < 1e-15);
    }
}
