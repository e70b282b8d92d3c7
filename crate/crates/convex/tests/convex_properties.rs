use std::f64::consts::PI;

use bkm_convex::geom::{self, P2};
use bkm_convex::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn domains() -> Vec<ConvexDomain> {
    vec![
        ConvexDomain::disc(1.5).unwrap(),
        ConvexDomain::square(1.0).unwrap(),
        ConvexDomain::ngon(64, 1.0).unwrap(),
        ConvexDomain::from_spec("polygon:pts=-1,-0.5;2,-1;1.5,1;-0.5,2").unwrap(),
        ConvexDomain::rounded(vec![[-1.0, -1.0], [1.0, -1.0], [0.0, 1.0]], 0.4).unwrap(),
    ]
}

fn arb_domain() -> impl Strategy<Value = usize> {
    0..5usize
}

proptest! {
    #[test]
    fn gauge_is_homogeneous(i in arb_domain(), x in -5.0..5.0f64, y in -5.0..5.0f64, t in 0.01..100.0f64) {
        let d = &domains()[i];
        let (a, b) = (d.rho([t * x, t * y]), t * d.rho([x, y]));
        prop_assert!((a - b).abs() <= 1e-10 * b.max(1e-300));
    }

    #[test]
    fn boundary_samples_have_unit_gauge(i in arb_domain(), theta in 0.0..(2.0 * PI)) {
        let d = &domains()[i];
        let bp = d.boundary_point(theta);
        prop_assert!((d.rho(bp.position) - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn supporting_lines_leave_domain_on_one_side(i in arb_domain(), theta in 0.0..(2.0 * PI)) {
        let d = &domains()[i];
        let bp = d.boundary_point(theta);
        for n in [bp.normal_lo, bp.normal_hi] {
            for k in 0..720 {
                let x = d.boundary_point(2.0 * PI * k as f64 / 720.0).position;
                prop_assert!(geom::dot(geom::sub(x, bp.position), n) <= 1e-9);
            }
        }
    }
}

#[test]
fn gauge_is_subadditive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in domains() {
        for _ in 0..10_000 {
            let u: P2 = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let v: P2 = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            assert!(d.rho(geom::add(u, v)) <= d.rho(u) + d.rho(v) + 1e-10);
        }
    }
}

#[test]
fn covering_number_is_monotone_in_delta() {
    for d in domains() {
        let mut prev = usize::MAX;
        for j in (0..24).rev() {
            let delta = 0.3 * 2f64.powf(-j as f64 / 3.0);
            let c = covering_number(&d, delta).unwrap().count;
            assert!(c <= prev, "delta {delta}: {c} > {prev}");
            prev = c;
        }
    }
}

#[test]
fn partitions_satisfy_invariants_on_every_chart() {
    for base in [ConvexDomain::disc(1.0).unwrap(), ConvexDomain::ngon(8, 1.0).unwrap(), ConvexDomain::square(1.0).unwrap()] {
        let d = base.normalized().unwrap();
        for u in chart_directions(d.scale_exponent()) {
            let chart = boundary_chart(&d, u).unwrap();
            assert!(chart.tangent_margin(100) >= 2f64.powi(-(d.scale_exponent() as i32)));
            for delta in [0.3, 2f64.powi(-6), 2f64.powi(-11)] {
                let p = boundary_partition(&chart, delta).unwrap();
                p.check(&chart).unwrap();
            }
        }
    }
}

#[test]
fn chart_stays_in_half_strip_range() {
    let d = ConvexDomain::ngon(5, 1.0).unwrap().normalized().unwrap();
    let top = -(2f64.powi(d.scale_exponent() as i32));
    let slope = 2f64.powi(d.scale_exponent() as i32 - 1);
    for u in chart_directions(2) {
        let c = boundary_chart(&d, u).unwrap();
        for k in 0..=40 {
            let x = -2.0 + 0.1 * k as f64;
            let g = c.gamma(x);
            assert!(g >= top && g <= -2.0);
            assert!((d.rho(c.point(x)) - 1.0).abs() < 1e-12);
            assert!(c.d_left(x) <= c.d_right(x) && c.d_left(x).abs() <= slope && c.d_right(x).abs() <= slope);
        }
    }
}

// Least-squares slope of ln y against ln x.
fn loglog_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0.ln()).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0.ln() - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0.ln() - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn circle_partition_count_scales_like_inverse_root_delta() {
    let d = ConvexDomain::disc(1.0).unwrap().normalized().unwrap();
    let chart = boundary_chart(&d, [0.0, -1.0]).unwrap();
    let pts: Vec<(f64, f64)> = (6..=14)
        .map(|j| {
            let delta = 2f64.powi(-j);
            (1.0 / delta, boundary_partition(&chart, delta).unwrap().q as f64)
        })
        .collect();
    let beta = loglog_slope(&pts);
    assert!((0.4..=0.6).contains(&beta), "{beta}");
}

#[test]
fn chart_sum_is_comparable_to_covering_number() {
    let d = ConvexDomain::disc(1.0).unwrap().normalized().unwrap();
    let dirs = chart_directions(d.scale_exponent());
    let mut ratios = Vec::new();
    for j in [6, 9, 12] {
        let delta = 2f64.powi(-j);
        let sum: usize = dirs.iter().map(|&u| boundary_partition(&boundary_chart(&d, u).unwrap(), delta).unwrap().q).sum();
        let n = covering_number(&d, delta).unwrap().count;
        ratios.push(sum as f64 / (n as f64 * (1.0 / delta).ln()));
        assert!(sum as f64 >= n as f64 / 64.0);
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo < 4.0, "{ratios:?}");
}
