use bkm_convex::ConvexDomain;
use bkm_grid::{lp_norm, Grid, SampledFunction};
use bkm_multiplier::{apply_with_cache, bochner_riesz_apply, quadrature_oracle, subordination_reconstruct, FrequencyPlan, MultiplierSymbol, ScalarProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{p, timed};
use crate::config::{ParamSpec, Params};
use crate::output::{num, Plot, Table};
use crate::{ExperimentError, Outcome};

pub static SUBORDINATION: &[ParamSpec] = &[
    p!("points", "20", "number of rho values, evenly spread over (0, 1)"),
    p!("lambda", "1", "Bochner-Riesz order used for the reconstruction (0, 1 or 2)"),
    p!("tol", "1e-8", "relative error allowed"),
];

pub fn subordination(params: &Params) -> Result<Outcome, ExperimentError> {
    let k = params.usize("points")?;
    let lambda = params.f64("lambda")?;
    let tol = params.f64("tol")?;
    let mut out = Outcome::new("subordination");
    let rhos: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) / k as f64 * 0.98).collect();
    let cases = [(ScalarProfile::exp_decay(), "exp(-rho)", &(|r: f64| (-r).exp()) as &dyn Fn(f64) -> f64), (ScalarProfile::power_cut(2), "(1-rho)^2", &|r: f64| (1.0 - r).max(0.0).powi(2))];
    let mut t = Table::new("subordination", &["profile", "rho", "reconstructed", "exact", "rel_err"]);
    let mut worst = 0.0f64;
    for (profile, label, exact) in cases {
        let got = timed(&mut out, label, || subordination_reconstruct(&profile, lambda, &rhos))?;
        for (&r, &v) in rhos.iter().zip(&got) {
            let e = exact(r);
            let err = (v - e).abs() / e.abs();
            worst = worst.max(err);
            t.push(vec![label.into(), num(r), num(v), num(e), num(err)]);
        }
    }
    let secs: f64 = out.timings.iter().map(|t| t.1).sum();
    out.check("rel_err", worst <= tol, format!("max relative error {worst:.3e} (limit {tol:e}) at {k} points"));
    out.check("runtime", secs < 1.0, format!("{secs:.3} s (limit 1 s)"));
    out.tables.push(t);
    Ok(out)
}

pub static ORACLE: &[ParamSpec] = &[
    p!("grid_n", "128", "samples on [-8, 8]"),
    p!("tol", "1e-8", "relative L2 error allowed"),
];

fn gaussian(g: &Grid, sigma: f64, c: f64) -> Result<SampledFunction, ExperimentError> {
    Ok(SampledFunction::from_fn(*g, |x| (-(x - c) * (x - c) / (2.0 * sigma * sigma)).exp())?)
}

fn oracle_symbols() -> Result<Vec<MultiplierSymbol>, ExperimentError> {
    Ok(vec![
        MultiplierSymbol::one(),
        MultiplierSymbol::bump(1.5)?,
        MultiplierSymbol::from_spec("br:domain=disc:r=1,lambda=2,R=2")?,
        MultiplierSymbol::from_spec("br:domain=ngon:k=8,r=1,lambda=1,R=1.5")?,
        MultiplierSymbol::new("skew", None, false, |x, y| (-(x - 0.3) * (x - 0.3) - 2.0 * y * y).exp()),
    ])
}

pub fn oracle(params: &Params) -> Result<Outcome, ExperimentError> {
    let n = params.usize("grid_n")?;
    let tol = params.f64("tol")?;
    let mut out = Outcome::new("multiplier-oracle");
    let g = Grid::new(-8.0, 8.0, n)?;
    let f = gaussian(&g, 1.0, 0.5)?;
    let h = gaussian(&g, 0.7, -1.0)?;
    let plan = FrequencyPlan::new(&g, 2)?;
    let mut t = Table::new("multiplier_oracle", &["symbol", "rel_l2"]);
    let mut worst = 0.0f64;
    for m in oracle_symbols()? {
        let fast = plan.apply_complex(&plan.symbol_cache(&m), &f, &h)?;
        let slow = timed(&mut out, format!("quadrature {}", m.name()), || quadrature_oracle(&m, &f, &h))?;
        let num_: f64 = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = slow.iter().map(|b| b.norm_sqr()).sum();
        let e = (num_ / den).sqrt();
        worst = worst.max(e);
        t.push(vec![m.name().to_string(), num(e)]);
    }
    // m = 1 against the pointwise product.
    let one = plan.apply_complex(&plan.symbol_cache(&MultiplierSymbol::one()), &f, &h)?;
    let id_err = one.iter().zip(f.values().iter().zip(h.values())).map(|(o, (a, b))| (o.re - a * b).abs().max(o.im.abs())).fold(0.0, f64::max);
    t.push(vec!["identity-vs-product".into(), num(id_err)]);
    let secs: f64 = out.timings.iter().map(|t| t.1).sum();
    out.check("oracle", worst <= tol, format!("max relative L2 error {worst:.3e} over 5 symbols at n={n}"));
    out.check("identity", id_err <= tol, format!("max |B_1(f,g) - fg| = {id_err:.3e}"));
    out.check("runtime", secs < 30.0, format!("{secs:.2} s (limit 30 s)"));
    out.tables.push(t);
    Ok(out)
}

pub static BR_CONVERGENCE: &[ParamSpec] = &[
    p!("domains", "disc:r=1|polygon:pts=-1,-1;1,-1;1,1;-1,1|ngon:k=8,r=1", "domain specs separated by |"),
    p!("lambda", "2", "Bochner-Riesz order"),
    p!("radii", "4,8,16,32", "dilations R"),
    p!("grid_n", "256", "samples on [-8, 8]"),
    p!("pairs", "50", "random band-limited pairs for the Holder probe"),
    p!("probe_r", "4", "dilation used for the Holder probe"),
    p!("seed", "11", "seed of the random pairs"),
    p!("final_tol", "0.05", "relative distance required at the largest R"),
    p!("holder_bound", "2", "single constant bounding the (2,2,1) ratio"),
];

fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Four shifted Gaussians with random signs and widths.
fn random_band_limited(g: &Grid, rng: &mut ChaCha8Rng) -> Result<SampledFunction, ExperimentError> {
    let bumps: Vec<(f64, f64, f64)> = (0..4).map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(0.6..1.2), rng.gen_range(-1.0..1.0))).collect();
    Ok(SampledFunction::from_fn(*g, |x| bumps.iter().map(|&(c, s, a)| a * (-(x - c) * (x - c) / (2.0 * s * s)).exp()).sum())?)
}

pub fn br_convergence(params: &Params) -> Result<Outcome, ExperimentError> {
    let specs = params.spec_list("domains");
    let lambda = params.f64("lambda")?;
    let radii = params.f64_list("radii")?;
    let n = params.usize("grid_n")?;
    let pairs = params.usize("pairs")?;
    let probe_r = params.f64("probe_r")?;
    let seed = params.u64("seed")?;
    let final_tol = params.f64("final_tol")?;
    let bound = params.f64("holder_bound")?;
    if radii.is_empty() || specs.is_empty() {
        return Err(ExperimentError::Runtime("need at least one domain and one radius".into()));
    }
    let mut out = Outcome::new("br-convergence");
    let g = Grid::new(-8.0, 8.0, n)?;
    let f = gaussian(&g, 1.0, 0.0)?;
    let prod: Vec<f64> = f.values().iter().map(|v| v * v).collect();
    let plan = FrequencyPlan::new(&g, 2)?;
    let mut t = Table::new("br_convergence", &["domain", "R", "rel_l2"]);
    let mut probe = Table::new("br_holder", &["domain", "pair", "ratio"]);
    let mut plot = Plot::new("br_convergence", "Relative distance to fg", ("R", true), ("relative L2 distance", true));
    for spec in &specs {
        let d = ConvexDomain::from_spec(spec)?;
        let mut series = Vec::new();
        for &r in &radii {
            let o = timed(&mut out, format!("{spec} R={r}"), || bochner_riesz_apply(&d, lambda, r, &f, &f))?;
            let e = rel_l2(o.values(), &prod);
            t.push(vec![spec.clone(), num(r), num(e)]);
            series.push((r, e));
        }
        let monotone = series.windows(2).all(|w| w[1].1 < w[0].1);
        let last = series.last().unwrap().1;
        out.check(&format!("{spec} monotone"), monotone, format!("distances {:?}", series.iter().map(|s| format!("{:.3e}", s.1)).collect::<Vec<_>>()));
        out.check(&format!("{spec} final"), last <= final_tol, format!("{last:.3e} at R={} (limit {final_tol})", series.last().unwrap().0));
        plot = plot.with_series(spec, series);

        let m = MultiplierSymbol::bochner_riesz(&d, lambda, probe_r)?;
        let cache = plan.symbol_cache(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        let start = std::time::Instant::now();
        for k in 0..pairs {
            let (a, b) = (random_band_limited(&g, &mut rng)?, random_band_limited(&g, &mut rng)?);
            let o = apply_with_cache(&plan, &cache, m.is_even(), &a, &b)?;
            let r = lp_norm(&o, 1.0)? / (lp_norm(&a, 2.0)? * lp_norm(&b, 2.0)?);
            worst = worst.max(r);
            probe.push(vec![spec.clone(), k.to_string(), num(r)]);
        }
        out.timings.push((format!("{spec} probe"), start.elapsed().as_secs_f64()));
        out.check(&format!("{spec} holder"), worst.is_finite() && worst <= bound, format!("max ratio {worst:.4} over {pairs} pairs (bound {bound})"));
    }
    out.tables.push(t);
    out.tables.push(probe);
    out.plots.push(plot);
    Ok(out)
}
