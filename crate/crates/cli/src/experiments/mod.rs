mod counting;
mod geometry;
mod kakeya;
mod multiplier;

use std::time::Instant;

use bkm_estimator::{growth_fit, FitResult, Model};

use crate::config::{ParamSpec, Params};
use crate::output::{num, Table};
use crate::{ExperimentError, Outcome};

pub type RunFn = fn(&Params) -> Result<Outcome, ExperimentError>;

pub struct Experiment {
    pub name: &'static str,
    pub summary: &'static str,
    /// Number of the acceptance criterion this run decides.
    pub criterion: u8,
    /// Wall-clock budget under the defaults.
    pub budget_secs: u64,
    pub params: &'static [ParamSpec],
    pub run: RunFn,
}

macro_rules! p {
    ($k:expr, $d:expr, $h:expr) => {
        ParamSpec { key: $k, default: $d, help: $h }
    };
}
pub(crate) use p;

static REGISTRY: &[Experiment] = &[
    Experiment {
        name: "subordination",
        summary: "Rebuild e^{-rho} and (1-rho)^2 from Bochner-Riesz means of orders 1..3",
        criterion: 1,
        budget_secs: 1,
        params: multiplier::SUBORDINATION,
        run: multiplier::subordination,
    },
    Experiment {
        name: "multiplier-oracle",
        summary: "FFT multiplier pipeline against the direct double-sum quadrature",
        criterion: 2,
        budget_secs: 30,
        params: multiplier::ORACLE,
        run: multiplier::oracle,
    },
    Experiment {
        name: "kappa",
        summary: "Covering numbers N(Omega, delta) and the fitted Minkowski dimension",
        criterion: 3,
        budget_secs: 60,
        params: geometry::KAPPA,
        run: geometry::kappa,
    },
    Experiment {
        name: "partition",
        summary: "Boundary partitions of a chart: count Q(delta) and structural invariants",
        criterion: 4,
        budget_secs: 60,
        params: geometry::PARTITION,
        run: geometry::partition,
    },
    Experiment {
        name: "kn-growth",
        summary: "Extremal-pair norm ratio of the full Kakeya maximal function over N",
        criterion: 5,
        budget_secs: 600,
        params: kakeya::KN_GROWTH,
        run: kakeya::kn_growth,
    },
    Experiment {
        name: "mn-nonbanach",
        summary: "Power growth of the extremal-pair ratio below the Banach range",
        criterion: 6,
        budget_secs: 120,
        params: kakeya::MN_NONBANACH,
        run: kakeya::mn_nonbanach,
    },
    Experiment {
        name: "kn-endpoint",
        summary: "Weak-type ratio of the fixed-scale operator on a spike pair, divided by N",
        criterion: 7,
        budget_secs: 30,
        params: kakeya::KN_ENDPOINT,
        run: kakeya::kn_endpoint,
    },
    Experiment {
        name: "counting",
        summary: "Overlap counts h_{l,k} over seeded random witness families and the fan family",
        criterion: 8,
        budget_secs: 120,
        params: counting::COUNTING,
        run: counting::counting,
    },
    Experiment {
        name: "domination",
        summary: "Pointwise domination ratios for random input pairs over N",
        criterion: 9,
        budget_secs: 300,
        params: kakeya::DOMINATION,
        run: kakeya::domination,
    },
    Experiment {
        name: "linear-product",
        summary: "Sharpness sums for the linear Kakeya maximal function on (yz)^{-1/2}",
        criterion: 10,
        budget_secs: 60,
        params: kakeya::LINEAR_PRODUCT,
        run: kakeya::linear_product,
    },
    Experiment {
        name: "alpha-sweep",
        summary: "Directional maximal function for the slope 1 - c/N: norm ratio against log N",
        criterion: 11,
        budget_secs: 60,
        params: kakeya::ALPHA_SWEEP,
        run: kakeya::alpha_sweep,
    },
    Experiment {
        name: "br-convergence",
        summary: "Bochner-Riesz means over convex domains converging to f*g as R grows",
        criterion: 12,
        budget_secs: 120,
        params: multiplier::BR_CONVERGENCE,
        run: multiplier::br_convergence,
    },
];

pub fn registry() -> &'static [Experiment] {
    REGISTRY
}

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}

pub(crate) fn timed<T>(out: &mut Outcome, stage: impl Into<String>, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let v = f();
    out.timings.push((stage.into(), start.elapsed().as_secs_f64()));
    v
}

/// All four growth models as one table, plus the requested model.
pub(crate) fn fits(name: &str, points: &[(f64, f64)], model: Model) -> Result<(Table, FitResult, FitResult), ExperimentError> {
    let mut t = Table::new(name, &["model", "c", "beta", "intercept", "r2", "points"]);
    let mut best: Option<FitResult> = None;
    let mut chosen = None;
    for m in Model::ALL {
        let f = growth_fit(points, m)?;
        let opt = |v: Option<f64>| v.map_or(String::new(), num);
        t.push(vec![m.name().into(), num(f.c), opt(f.beta), opt(f.intercept), num(f.r2), f.points.len().to_string()]);
        if best.as_ref().is_none_or(|b| f.r2 > b.r2) {
            best = Some(f.clone());
        }
        if m == model {
            chosen = Some(f);
        }
    }
    Ok((t, chosen.expect("model in ALL"), best.expect("four models")))
}
