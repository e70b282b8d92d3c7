use bkm_convex::{boundary_chart, boundary_partition, chart_directions, covering_number, minkowski_dimension_estimate, ConvexDomain, DomainKind};
use bkm_estimator::Model;

use super::{fits, p, timed};
use crate::config::{ParamSpec, Params};
use crate::output::{num, Plot, Table};
use crate::{ExperimentError, Outcome};

pub static KAPPA: &[ParamSpec] = &[
    p!("domain", "disc:r=1", "convex domain spec"),
    p!("j_min", "6", "largest delta is 2^-j_min"),
    p!("j_max", "14", "smallest delta is 2^-j_max"),
    p!("smooth_tol", "0.05", "allowed |slope - 1/2| for curved domains"),
    p!("polygon_max", "0.1", "largest slope allowed for polygons"),
];

fn dyadic(params: &Params) -> Result<Vec<f64>, ExperimentError> {
    let (lo, hi) = (params.usize("j_min")?, params.usize("j_max")?);
    if lo > hi {
        return Err(ExperimentError::Runtime(format!("j_min = {lo} exceeds j_max = {hi}")));
    }
    Ok((lo..=hi).map(|j| 2f64.powi(-(j as i32))).collect())
}

pub fn kappa(params: &Params) -> Result<Outcome, ExperimentError> {
    let spec = params.string("domain");
    let d = ConvexDomain::from_spec(&spec)?;
    let deltas = dyadic(params)?;
    let mut out = Outcome::new("kappa");
    let mut t = Table::new("kappa", &["delta", "covering_number"]);
    let mut pts = Vec::new();
    for &delta in &deltas {
        let c = timed(&mut out, format!("delta={delta}"), || covering_number(&d, delta))?;
        t.push(vec![num(delta), c.count.to_string()]);
        pts.push((1.0 / delta, c.count as f64));
    }
    let slope = minkowski_dimension_estimate(&d, &deltas)?;
    t.push(vec!["slope".into(), num(slope)]);
    let secs: f64 = out.timings.iter().map(|t| t.1).sum();
    if matches!(d.kind(), DomainKind::Polygon { .. }) {
        let max = params.f64("polygon_max")?;
        out.check("slope", slope <= max, format!("{spec}: slope {slope:.4} (polygon, limit {max})"));
    } else {
        let tol = params.f64("smooth_tol")?;
        out.check("slope", (slope - 0.5).abs() <= tol, format!("{spec}: slope {slope:.4} (curved, 0.5 +- {tol})"));
    }
    out.check("runtime", secs < 60.0, format!("{secs:.2} s (limit 60 s)"));
    out.tables.push(t);
    out.plots.push(Plot::new("kappa", &format!("Covering number of {spec}"), ("1/delta", true), ("N(delta)", true)).with_series(&spec, pts));
    Ok(out)
}

pub static PARTITION: &[ParamSpec] = &[
    p!("domain", "disc:r=1", "convex domain spec; normalized before charting"),
    p!("j_min", "6", "largest delta is 2^-j_min"),
    p!("j_max", "14", "smallest delta is 2^-j_max"),
    p!("exp_lo", "0.4", "lower end of the accepted exponent range"),
    p!("exp_hi", "0.6", "upper end of the accepted exponent range"),
];

pub fn partition(params: &Params) -> Result<Outcome, ExperimentError> {
    let spec = params.string("domain");
    let d = ConvexDomain::from_spec(&spec)?.normalized()?;
    let deltas = dyadic(params)?;
    let (lo, hi) = (params.f64("exp_lo")?, params.f64("exp_hi")?);
    let dirs = chart_directions(d.scale_exponent());
    let mut out = Outcome::new("partition");
    let mut t = Table::new("partition", &["chart", "u_x", "u_y", "delta", "q", "invariants"]);
    let mut intervals = Table::new("partition_intervals", &["delta", "chart", "j", "nu", "lo", "hi"]);
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut main = Vec::new();
    // The chart along u = (0, -1) first, then every chart direction.
    let mut charts = vec![[0.0, -1.0]];
    charts.extend(dirs.iter().copied().filter(|u| *u != [0.0, -1.0]));
    for (ci, &u) in charts.iter().enumerate() {
        let chart = boundary_chart(&d, u)?;
        for &delta in &deltas {
            let part = timed(&mut out, format!("chart {ci} delta={delta}"), || boundary_partition(&chart, delta))?;
            let result = part.check(&chart);
            checked += 1;
            if let Err(e) = &result {
                failures.push(format!("chart {ci} delta {delta}: {e}"));
            }
            t.push(vec![ci.to_string(), num(u[0]), num(u[1]), num(delta), part.q.to_string(), if result.is_ok() { "ok".into() } else { "violated".into() }]);
            if ci == 0 {
                main.push((1.0 / delta, part.q as f64));
                for row in part.csv_rows(ci) {
                    intervals.push(std::iter::once(num(delta)).chain(row.split(',').map(String::from)).collect());
                }
            }
        }
    }
    let (ft, power, _) = fits("partition_fit", &main, Model::Power)?;
    let beta = power.beta.unwrap_or(f64::NAN);
    out.check("exponent", (lo..=hi).contains(&beta), format!("Q(delta) ~ delta^-{beta:.4} on the chart u = (0,-1) (range [{lo}, {hi}])"));
    let detail = if failures.is_empty() { format!("{checked} partitions over {} charts", charts.len()) } else { failures.join(" | ") };
    out.check("invariants", failures.is_empty(), detail);
    out.tables.extend([t, intervals, ft]);
    out.plots.push(Plot::new("partition", "Partition count Q(delta)", ("1/delta", true), ("Q", true)).with_series("u = (0,-1)", main));
    Ok(out)
}
