use bkm_grid::*;
use proptest::prelude::*;

fn grid(n: usize) -> Grid {
    Grid::new(-1.0, 2.0, n).unwrap()
}

fn sampled(values: Vec<f64>) -> SampledFunction {
    let n = values.len();
    SampledFunction::new(grid(n), values).unwrap()
}

/// Level-set scan over a dense ladder of thresholds, independent of the
/// attained-value shortcut used by the library.
fn distribution_oracle(f: &SampledFunction, p: f64) -> f64 {
    let top = f.max_abs();
    let mut best = 0.0f64;
    let steps = 20_000;
    for k in 0..steps {
        let lambda = top * k as f64 / steps as f64;
        let count = f.values().iter().filter(|v| v.abs() > lambda).count();
        best = best.max(lambda * (count as f64 * f.h()).powf(1.0 / p));
    }
    best
}

#[test]
fn powercut_l2_norm() {
    let g = Grid::new(0.0, 16.0, 1600).unwrap();
    let f = parse_function_spec("powercut:a=-1.0,lo=3,hi=12", g).unwrap();
    let norm = lp_norm(&f, 2.0).unwrap();
    assert!((norm - 0.5).abs() < g.h(), "{norm}");
}

#[test]
fn reciprocal_weak_l1() {
    let n_cut = 64.0;
    let g = Grid::new(0.0, 66.0, 66 * 32).unwrap();
    let f = parse_function_spec("powercut:a=-1,lo=1,hi=64", g).unwrap();
    let w = weak_lp_quasinorm(&f, 1.0).unwrap();
    assert!(w >= 1.0 - 1.0 / n_cut && w <= 1.0, "{w}");
    let oracle = distribution_oracle(&f, 1.0);
    assert!(oracle <= w + 1e-12 && w - oracle < 1e-3, "{w} vs {oracle}");
}

#[test]
fn maximal_scales_linearly() {
    let g = Grid::new(-2.0, 3.0, 500).unwrap();
    let f = parse_function_spec("gaussian:sigma=0.3", g).unwrap();
    let m1 = hl_maximal(&f, 1.0).unwrap();
    let m3 = hl_maximal(&f.scaled(3.0), 1.0).unwrap();
    for (a, b) in m1.values().iter().zip(m3.values()) {
        assert!((3.0 * a - b).abs() <= 1e-12 * b.max(1.0));
    }
}

#[test]
fn refinement_is_first_order() {
    for spec in ["gaussian:sigma=0.4", "powercut:a=2,lo=0,hi=1"] {
        let mut g = Grid::new(-2.0, 2.0, 50).unwrap();
        let mut prev = lp_norm(&parse_function_spec(spec, g).unwrap(), 2.0).unwrap();
        for _ in 0..5 {
            let fine = g.refined();
            let next = lp_norm(&parse_function_spec(spec, fine).unwrap(), 2.0).unwrap();
            assert!((next - prev).abs() <= 4.0 * g.h(), "{spec}: {prev} -> {next}");
            prev = next;
            g = fine;
        }
    }
}

#[test]
fn weak_matches_oracle_on_gaussian() {
    let g = Grid::new(-3.0, 3.0, 300).unwrap();
    let f = parse_function_spec("gaussian:sigma=0.7", g).unwrap();
    for p in [0.5, 1.0, 2.0] {
        let w = weak_lp_quasinorm(&f, p).unwrap();
        let o = distribution_oracle(&f, p);
        assert!(o <= w + 1e-12 && (w - o) / w < 1e-3, "p={p}: {w} vs {o}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_homogeneous(values in prop::collection::vec(-5.0f64..5.0, 2..80), c in -4.0f64..4.0, p in 0.3f64..4.0) {
        let f = sampled(values);
        let a = lp_norm(&f.scaled(c), p).unwrap();
        let b = c.abs() * lp_norm(&f, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300) + 1e-300);
    }

    #[test]
    fn chebyshev(values in prop::collection::vec(-5.0f64..5.0, 2..80)) {
        let f = sampled(values);
        for p in [0.5, 1.0, 2.0] {
            let w = weak_lp_quasinorm(&f, p).unwrap();
            let s = lp_norm(&f, p).unwrap();
            prop_assert!(w <= s * (1.0 + 1e-12));
        }
    }

    #[test]
    fn maximal_dominates_and_is_monotone(
        base in prop::collection::vec(0.0f64..3.0, 2..60),
        bump in prop::collection::vec(0.0f64..1.0, 60),
        s in 1.0f64..3.0,
    ) {
        let n = base.len();
        let f = sampled(base.clone());
        let g = sampled(base.iter().zip(&bump).map(|(a, b)| a + b).collect());
        let mf = hl_maximal(&f, s).unwrap();
        let mg = hl_maximal(&g, s).unwrap();
        for i in 0..n {
            prop_assert!(mf.values()[i] >= f.values()[i].abs() * (1.0 - 1e-12));
            prop_assert!(mf.values()[i] <= mg.values()[i] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn hull_agrees_with_brute(values in prop::collection::vec(-3.0f64..3.0, 2..70), s in 1.0f64..2.5) {
        let f = sampled(values);
        let a = hl_maximal_with(&f, s, HlMode::BruteForce).unwrap();
        let b = hl_maximal_with(&f, s, HlMode::Hull).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() <= 1e-12 * x.max(1.0));
        }
    }
}
