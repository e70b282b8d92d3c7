use std::fmt;

use crate::{EstimatorError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// `c·log N + b`, fitted as ratio against `log N`.
    Log,
    /// `c·(log N)^β`, fitted as log ratio against `log log N`.
    LogPower,
    /// `c·N^β`, fitted as log ratio against `log N`.
    Power,
    /// `c·(log N)^{1/2} + b`, fitted as ratio against `(log N)^{1/2}`.
    SqrtLog,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Log, Model::LogPower, Model::Power, Model::SqrtLog];

    pub fn name(self) -> &'static str {
        match self {
            Model::Log => "c*log(N)",
            Model::LogPower => "c*log(N)^beta",
            Model::Power => "c*N^beta",
            Model::SqrtLog => "c*log(N)^(1/2)",
        }
    }

    fn coords(self, n: f64, y: f64) -> (f64, f64) {
        match self {
            Model::Log => (n.ln(), y),
            Model::LogPower => (n.ln().ln(), y.ln()),
            Model::Power => (n.ln(), y.ln()),
            Model::SqrtLog => (n.ln().sqrt(), y),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: Model,
    pub c: f64,
    pub beta: Option<f64>,
    /// The additive constant of the affine models.
    pub intercept: Option<f64>,
    /// In the model's linearizing coordinates, clamped to `[0, 1]`.
    pub r2: f64,
    pub points: Vec<(f64, f64)>,
}

impl FitResult {
    pub fn predict(&self, n: f64) -> f64 {
        let b = self.intercept.unwrap_or(0.0);
        match self.model {
            Model::Log => self.c * n.ln() + b,
            Model::LogPower => self.c * n.ln().powf(self.beta.unwrap_or(1.0)),
            Model::Power => self.c * n.powf(self.beta.unwrap_or(1.0)),
            Model::SqrtLog => self.c * n.ln().sqrt() + b,
        }
    }

    pub const CSV_HEADER: &'static str = "model,c,beta,intercept,r2,points";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
        format!("{},{},{},{},{},{}", self.model.name(), self.c, opt(self.beta), opt(self.intercept), self.r2, self.points.len())
    }
}

impl fmt::Display for FitResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: c = {:.6}", self.model.name(), self.c)?;
        if let Some(b) = self.beta {
            write!(f, ", beta = {b:.6}")?;
        }
        if let Some(b) = self.intercept {
            write!(f, ", intercept = {b:.6}")?;
        }
        write!(f, ", R^2 = {:.6} over {} points", self.r2, self.points.len())
    }
}

/// Least squares of `points = (N, ratio)` in the model's coordinates.
pub fn growth_fit(points: &[(f64, f64)], model: Model) -> Result<FitResult> {
    if points.len() < 4 {
        return Err(EstimatorError::TooFewPoints { need: 4, got: points.len() });
    }
    for &(n, y) in points {
        if !(n > 1.0 && n.is_finite()) {
            return Err(EstimatorError::BadParameter { name: "N", value: n });
        }
        if !(y > 0.0 && y.is_finite()) {
            return Err(EstimatorError::BadParameter { name: "ratio", value: y });
        }
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(n, y)| model.coords(n, y)).collect();
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    if !(sxx > 1e-12 * (1.0 + mx * mx)) {
        return Err(EstimatorError::Degenerate("all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let sse: f64 = xy.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };
    let (c, beta, intercept) = match model {
        Model::Log | Model::SqrtLog => (slope, None, Some(icpt)),
        Model::LogPower | Model::Power => (icpt.exp(), Some(slope), None),
    };
    Ok(FitResult { model, c, beta, intercept, r2, points: points.to_vec() })
}

/// The model with the largest `R²`; ties go to the earlier entry of
/// [`Model::ALL`].
pub fn best_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    let mut best: Option<FitResult> = None;
    for m in Model::ALL {
        let fit = growth_fit(points, m)?;
        if best.as_ref().map_or(true, |b| fit.r2 > b.r2) {
            best = Some(fit);
        }
    }
    Ok(best.expect("four models"))
}
