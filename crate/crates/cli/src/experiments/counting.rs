use bkm_counting::{counting_stress, fan_family, h_profiles, h_profiles_csv, verify_counting_bounds};

use super::{p, timed};
use crate::config::{ParamSpec, Params};
use crate::output::{num, parse_csv, Plot, Table};
use crate::{ExperimentError, Outcome};

pub static COUNTING: &[ParamSpec] = &[
    p!("ns", "16,32,64,128", "eccentricities N"),
    p!("families", "1000", "random witness families per N"),
    p!("seed", "2024", "sweep seed; family k uses stream k"),
    p!("fan_n", "128", "N of the fan family"),
    p!("fan_min", "0.05", "least cross-term sup / (N log N) the fan must reach"),
    p!("drift", "2", "largest allowed ratio between maxima at consecutive N"),
];

pub fn counting(params: &Params) -> Result<Outcome, ExperimentError> {
    let ns = params.usize_list("ns")?;
    let families = params.usize("families")?;
    let seed = params.u64("seed")?;
    let fan_n = params.usize("fan_n")?;
    let fan_min = params.f64("fan_min")?;
    let drift = params.f64("drift")?;
    let mut out = Outcome::new("counting");
    let mut t = Table::new(
        "counting",
        &["N", "families", "max_diag_ratio", "max_a3_ratio", "max_cross_ratio", "max_gamma", "gamma_bound", "trivial_bound", "strip_checks", "strip_violations", "strip_worst", "slanted_violations"],
    );
    let mut rows = Vec::new();
    for &n in &ns {
        let s = timed(&mut out, format!("N={n}"), || counting_stress(n, families, seed))?;
        let b = |v: bool| if v { "true" } else { "false" }.to_string();
        t.push(vec![
            n.to_string(),
            families.to_string(),
            num(s.max_diag_ratio),
            num(s.max_a3_ratio),
            num(s.max_cross_ratio),
            s.max_gamma.to_string(),
            b(s.gamma_bound_holds),
            b(s.trivial_bound_holds),
            s.strip_checks.to_string(),
            s.strip_violations.to_string(),
            num(s.strip_worst),
            s.slanted_violations.to_string(),
        ]);
        rows.push(s);
    }
    let worst_drift = |get: fn(&bkm_counting::StressSummary) -> f64| {
        rows.windows(2).map(|w| {
            let (a, b) = (get(&w[0]), get(&w[1]));
            a.max(b) / a.min(b)
        }).fold(1.0f64, f64::max)
    };
    let dd = worst_drift(|s| s.max_diag_ratio);
    let da = worst_drift(|s| s.max_a3_ratio);
    let finite = rows.iter().all(|s| s.max_diag_ratio.is_finite() && s.max_a3_ratio.is_finite() && s.max_a3_ratio > 0.0 && s.max_diag_ratio > 0.0);
    out.check("diag", finite && dd < drift, format!("max_l sup h_ll/N in {:?}, worst consecutive ratio {dd:.3}", rows.iter().map(|s| format!("{:.3}", s.max_diag_ratio)).collect::<Vec<_>>()));
    out.check("a3", finite && da < drift, format!("max_l sup h_l3/N in {:?}, worst consecutive ratio {da:.3}", rows.iter().map(|s| format!("{:.3}", s.max_a3_ratio)).collect::<Vec<_>>()));
    out.check(
        "trivial",
        rows.iter().all(|s| s.gamma_bound_holds && s.trivial_bound_holds),
        "|gamma_i| <= 3(N+2) and sup h_lk <= |A_k| max |gamma_i|",
    );

    let fam = timed(&mut out, "fan", || fan_family(fan_n))?;
    let rep = verify_counting_bounds(&fam);
    out.check("fan", rep.cross_ratio >= fan_min, format!("fan at N={fan_n}: cross sup / (N log N) = {:.4} (least {fan_min})", rep.cross_ratio));

    let strip_total: usize = rows.iter().map(|s| s.strip_violations).sum::<usize>() + rep.strip_violations.len();
    let checks: usize = rows.iter().map(|s| s.strip_checks).sum::<usize>() + rep.strip_checks;
    let worst = rows.iter().map(|s| s.strip_worst).fold(rep.strip_worst, f64::max);
    out.check("strip", strip_total == 0, format!("count <= N/(d-2)+2 violated in {strip_total} of {checks} strip checks, worst count/bound {worst:.3}"));
    let slanted: usize = rows.iter().map(|s| s.slanted_violations).sum::<usize>() + rep.slanted_violations;
    out.check("strip_slanted", slanted == 0, format!("count <= 2N/(d-2)+2 violated in {slanted} of {checks} strip checks"));

    out.tables.push(t);
    let profiles = h_profiles(&fam);
    out.tables.push(parse_csv("counting_fan_profiles", &h_profiles_csv(&profiles)).map_err(|e| ExperimentError::Runtime(e.to_string()))?);
    let mut plot = Plot::new("counting", "Overlap maxima over random families", ("N", true), ("sup / N", false));
    plot = plot.with_series("max sup h_ll / N", rows.iter().map(|s| (s.n as f64, s.max_diag_ratio)).collect());
    plot = plot.with_series("max sup h_l3 / N", rows.iter().map(|s| (s.n as f64, s.max_a3_ratio)).collect());
    out.plots.push(plot);
    Ok(out)
}
