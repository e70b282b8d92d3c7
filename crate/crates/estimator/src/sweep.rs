use std::fmt::Write as _;
use std::time::Instant;

use bkm_extremal::extremal_pair_bilinear;
use bkm_grid::{lp_norm, Generator, Grid, SampledFunction};
use bkm_kakeya::{DirectionSet, SearchSpace};

use crate::ratio::ratio_of_profile;
use crate::{EstimatorError, Exponents, Operator, Result};

/// An operator whose eccentricity parameter is the sweep's `N`.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    FixedScale { delta: f64 },
    Full,
    /// The single direction `(1, 1 − c/N)`.
    AlphaNearOne { c: f64 },
    Lacey { alpha: f64 },
}

impl OperatorKind {
    pub fn at(&self, n: usize) -> Result<Operator> {
        Ok(match *self {
            OperatorKind::FixedScale { delta } => Operator::FixedScale { n, delta },
            OperatorKind::Full => Operator::Full { n },
            OperatorKind::AlphaNearOne { c } => Operator::Directional(DirectionSet::from_alpha(1.0 - c / n as f64)?),
            OperatorKind::Lacey { alpha } => Operator::Lacey { alpha },
        })
    }
}

/// Inputs as a function of `N` and the grid.
#[derive(Debug, Clone, PartialEq)]
pub enum InputFamily {
    /// `x^{−2/p₁} χ_{[3,N)}` and `x^{−2/p₂} χ_{[3,N)}`.
    Extremal { p1: f64, p2: f64 },
    /// `x^{−1/p} χ_{[3,N)}` and `x^{−1/p′} χ_{[3,N)}`.
    AlphaPair { p: f64 },
    /// Both factors a unit-mass spike of width `h` at `½`.
    Spike,
    /// The same pair at every `N`.
    Fixed(Generator, Generator),
}

impl InputFamily {
    pub fn inputs(&self, n: usize, grid: Grid) -> Result<(SampledFunction, SampledFunction)> {
        Ok(match *self {
            InputFamily::Extremal { p1, p2 } => {
                let pair = extremal_pair_bilinear(p1, p2, n, grid)?;
                (pair.f, pair.g)
            }
            InputFamily::AlphaPair { p } => {
                if !(p > 1.0 && p.is_finite()) {
                    return Err(EstimatorError::BadParameter { name: "p", value: p });
                }
                let make = |a: f64| Generator::PowerCut { a, lo: 3.0, hi: n as f64 }.sample(grid);
                (make(-1.0 / p)?, make(-(p - 1.0) / p)?)
            }
            InputFamily::Spike => {
                let s = Generator::Spike { center: 0.5, width: grid.h() }.sample(grid)?;
                (s.clone(), s)
            }
            InputFamily::Fixed(ref a, ref b) => (a.sample(grid)?, b.sample(grid)?),
        })
    }
}

/// Grid spacing as a function of `N`; the window is always `[−2, N + 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    Spacing(f64),
    /// `min(1/16, 1/N)`.
    PerN,
}

impl Resolution {
    pub fn h(&self, n: usize) -> f64 {
        match *self {
            Resolution::Spacing(h) => h,
            Resolution::PerN => (1.0 / 16.0f64).min(1.0 / n as f64),
        }
    }

    pub fn grid(&self, n: usize) -> Result<Grid> {
        Ok(Grid::with_spacing(-2.0, n as f64 + 2.0, self.h(n))?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub operator: OperatorKind,
    pub family: InputFamily,
    pub exponents: Exponents,
    pub weak: bool,
    pub resolution: Resolution,
    pub space: SearchSpace,
}

impl SweepConfig {
    pub fn new(operator: OperatorKind, family: InputFamily, exponents: Exponents) -> Self {
        Self { operator, family, exponents, weak: false, resolution: Resolution::Spacing(1.0 / 16.0), space: SearchSpace::sweep() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    pub h: f64,
    /// The weak ratio when the sweep is weak, else the strong one.
    pub ratio: f64,
    pub strong: f64,
    pub weak: bool,
    pub runtime_ms: u128,
}

/// The ratio at each `N` of `ns` (increasing, at least 4 entries).
pub fn growth_sweep(cfg: &SweepConfig, ns: &[usize]) -> Result<Vec<SweepPoint>> {
    if ns.len() < 4 {
        return Err(EstimatorError::TooFewPoints { need: 4, got: ns.len() });
    }
    if let Some(w) = ns.windows(2).find(|w| w[1] <= w[0]) {
        return Err(EstimatorError::BadParameter { name: "N (not increasing)", value: w[1] as f64 });
    }
    ns.iter()
        .map(|&n| {
            let start = Instant::now();
            let grid = cfg.resolution.grid(n)?;
            let (f, g) = cfg.family.inputs(n, grid)?;
            let e = cfg.exponents;
            let (nf, ng) = (lp_norm(&f, e.p1)?, lp_norm(&g, e.p2)?);
            if !(nf > 0.0 && ng > 0.0) {
                return Err(EstimatorError::ZeroDenominator { f: nf, g: ng });
            }
            let m = cfg.operator.at(n)?.profile(&f, &g, cfg.space)?;
            let strong = ratio_of_profile(&m, nf * ng, e.p3, false)?;
            let ratio = if cfg.weak { ratio_of_profile(&m, nf * ng, e.p3, true)? } else { strong };
            Ok(SweepPoint { n, h: grid.h(), ratio, strong, weak: cfg.weak, runtime_ms: start.elapsed().as_millis() })
        })
        .collect()
}

/// CSV with header `N,h,ratio,weak,runtime_ms`.
pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut s = String::from("N,h,ratio,weak,runtime_ms\n");
    for p in points {
        let _ = writeln!(s, "{},{},{},{},{}", p.n, p.h, p.ratio, p.weak, p.runtime_ms);
    }
    s
}
