use std::f64::consts::{FRAC_1_SQRT_2, PI};

use bkm_grid::{centered_maximal, parse_function_spec, Grid, SampledFunction};
use bkm_kakeya::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_pair(lo: f64, hi: f64, n: usize) -> (SampledFunction, Grid) {
    let grid = Grid::new(lo, hi, n).unwrap();
    (parse_function_spec("indicator:lo=0,hi=1", grid).unwrap(), grid)
}

fn random_fn(grid: Grid, rng: &mut ChaCha8Rng) -> SampledFunction {
    let vals = (0..grid.n()).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(-2.0..2.0) }).collect();
    SampledFunction::new(grid, vals).unwrap()
}

#[test]
fn exact_average_matches_clipping() {
    let grid = Grid::new(-2.0, 6.0, 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_fn(grid, &mut rng);
    let g = random_fn(grid, &mut rng);
    for _ in 0..300 {
        let c = [rng.gen_range(-1.0..5.0), rng.gen_range(-1.0..5.0)];
        let len = rng.gen_range(0.1..5.0);
        let wid = rng.gen_range(0.05..1.0) * len;
        let theta = if rng.gen_bool(0.2) { PI / 4.0 * rng.gen_range(0..4) as f64 } else { rng.gen_range(0.0..PI) };
        let r = Rectangle::from_angle(c, theta, len, wid).unwrap();
        let a = rect_average(&f, &g, &r);
        let b = rect_average_clipped(&f, &g, &r);
        assert!((a - b).abs() <= 1e-10 * (1.0 + b), "{r}: {a} vs {b}");
    }
}

#[test]
fn average_of_constant() {
    let grid = Grid::new(-4.0, 4.0, 128).unwrap();
    let one = parse_function_spec("indicator:lo=-4,hi=4", grid).unwrap();
    let r = Rectangle::from_angle([0.3, -0.2], 0.7, 3.0, 1.5).unwrap();
    assert!((rect_average(&one, &one, &r) - 1.0).abs() < 1e-10);
    assert!((rect_average_clipped(&one, &one, &r) - 1.0).abs() < 1e-10);
}

#[test]
fn axis_and_diagonal_averages() {
    let (f, _) = unit_pair(-2.0, 6.0, 128);
    let axis = Rectangle::new([2.0, 0.5], [1.0, 0.0], 4.0, 1.0).unwrap();
    assert!((rect_average(&f, &f, &axis) - 0.25).abs() < 1e-12);

    let diag = Rectangle::from_angle([0.5, 0.5], PI / 4.0, 4.0, 1.0).unwrap();
    let expected = (1.0 - (1.0 - FRAC_1_SQRT_2).powi(2)) / 4.0;
    assert!((rect_average_clipped(&f, &f, &diag) - expected).abs() < 1e-12);
    assert!((rect_average(&f, &f, &diag) - expected).abs() < 1e-12);
    assert!((expected - 0.2286).abs() < 1e-4);
}

#[test]
fn fixed_scale_examples() {
    let (f, _) = unit_pair(-6.0, 7.0, 208);
    let h = f.h();
    let v = kakeya_fixed_scale(&f, &f, 4, 1.0, 0.5).unwrap();
    assert!((v - 0.25).abs() <= 2.0 * h, "{v}");
    assert_eq!(kakeya_fixed_scale(&f, &f, 4, 1.0, 10.0).unwrap(), 0.0);
    assert!(kakeya_fixed_scale(&f, &f, 1, 1.0, 0.5).is_err());
}

// Dense brute force over 1×2 rectangles through (½, ½).
#[test]
fn fixed_scale_two_against_dense_search() {
    let (f, _) = unit_pair(-3.0, 4.0, 112);
    let x = 0.5;
    let mut oracle = 0.0f64;
    for a in 0..360 {
        let theta = PI * a as f64 / 360.0;
        for i in 0..=40 {
            let s = 2.0 * (i as f64 / 40.0 - 0.5);
            for j in 0..=20 {
                let t = j as f64 / 20.0 - 0.5;
                let r = Rectangle::anchored([x, x], theta, s, t, 2.0, 1.0).unwrap();
                oracle = oracle.max(rect_average(&f, &f, &r));
            }
        }
    }
    let v = kakeya_fixed_scale(&f, &f, 2, 1.0, x).unwrap();
    assert!(oracle >= 0.5 - 1e-12, "{oracle}");
    assert!((v - oracle).abs() <= 0.01 * oracle, "{v} vs {oracle}");
}

#[test]
fn full_examples() {
    let (f, _) = unit_pair(-4.0, 6.0, 160);
    let h = f.h();
    for n in [1, 4, 16] {
        let v = kakeya_full(&f, &f, n, 0.5).unwrap();
        assert!((v - 1.0).abs() <= 2.0 * h, "N={n}: {v}");
    }
    let far = kakeya_full(&f, &f, 4, 2.0).unwrap();
    assert!(far >= 0.30, "{far}");
    assert!(kakeya_full(&f, &f, 0, 0.5).is_err());
}

#[test]
fn directional_examples() {
    let (f, _) = unit_pair(-3.0, 4.0, 112);
    let h = f.h();
    let horiz = DirectionSet::new(&[[1.0, 0.0]]).unwrap();
    let v = directional_maximal(&f, &f, &horiz, 0.5).unwrap();
    assert!((v - 1.0).abs() <= 2.0 * h, "{v}");

    // Strips along the diagonal centred at (½, ½), clipped exactly.
    let diag = DirectionSet::new(&[[1.0, 1.0]]).unwrap();
    let w = directional_maximal(&f, &f, &diag, 0.5).unwrap();
    let mut oracle = 0.0f64;
    for wi in 1..=32 {
        let wid = wi as f64 * h;
        for li in wi..=64 {
            let len = li as f64 * h;
            let r = Rectangle::from_angle([0.5, 0.5], PI / 4.0, len, wid).unwrap();
            oracle = oracle.max(rect_average_clipped(&f, &f, &r));
        }
    }
    assert!(oracle >= 0.914 - 1e-3, "{oracle}");
    assert!(w >= 0.98 * oracle, "{w} vs {oracle}");
}

#[test]
fn directional_errors() {
    assert!(DirectionSet::new(&[]).is_err());
    assert!(DirectionSet::new(&[[0.0, 0.0]]).is_err());
    assert!(DirectionSet::new(&[[f64::NAN, 1.0]]).is_err());
}

#[test]
fn lacey_examples() {
    let (f, _) = unit_pair(-3.0, 4.0, 224);
    let h = f.h();
    let a0 = lacey_maximal(&f, &f, 0.0, 0.5).unwrap();
    assert!((a0 - 1.0).abs() <= 2.0 * h, "{a0}");
    let a2 = lacey_maximal(&f, &f, 2.0, 0.0).unwrap();
    assert!((a2 - 0.5).abs() <= 2.0 * h, "{a2}");
    assert!(lacey_maximal(&f, &f, f64::INFINITY, 0.0).is_err());
}

#[test]
fn lacey_diagonal_is_centered_maximal_of_product() {
    let grid = Grid::new(-4.0, 4.0, 128).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = random_fn(grid, &mut rng);
    let g = random_fn(grid, &mut rng);
    let prod = f.combine(&g, |a, b| a * b).unwrap();
    let centred = centered_maximal(&prod);
    let lacey = lacey_profile(&f, &g, 1.0).unwrap();
    for (a, b) in lacey.values().iter().zip(centred.values()) {
        assert!(*a <= 1.25 * b + 1e-12 && *a >= 0.8 * b - 1e-12, "{a} vs {b}");
    }
}

#[test]
fn domination_examples() {
    let (f, _) = unit_pair(-20.0, 21.0, 328);
    let h = f.h();
    let rep = domination_report(&f, &f, 2.0, 16, 2.0).unwrap();
    assert_eq!(rep.rows.len(), 328);
    assert!(rep.max_ratio[3] <= 1.0 + 5.0 * h, "{:?}", rep.max_ratio);
    assert_eq!(rep.unbounded[3], 0);

    let zero = domination_report(&f, &f, 0.0, 8, 2.0).unwrap();
    assert_eq!(zero.unbounded[0], 0);
    assert!(zero.max_ratio[0].is_finite());
    assert!(domination_report(&f, &f, 2.0, 8, 1.0).is_err());
}

#[test]
fn domination_third_ratio_is_stable_in_n() {
    let (f, _) = unit_pair(-36.0, 37.0, 584);
    let r: Vec<f64> = [8, 16, 32].iter().map(|&n| domination_report(&f, &f, 2.0, n, 2.0).unwrap().max_ratio[2]).collect();
    let (lo, hi) = r.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi < 2.0 * lo, "{r:?}");
}

#[test]
fn profiles_agree_with_pointwise_search() {
    let grid = Grid::with_spacing(-2.0, 10.0, 0.125).unwrap();
    let f = parse_function_spec("powercut:a=-0.5,lo=1,hi=8", grid).unwrap();
    let g = parse_function_spec("gaussian:sigma=3", grid).unwrap();
    let op = KakeyaMaximal::new(&f, &g).unwrap();
    let prof = op.fixed_scale_profile(4, 1.0).unwrap();
    let mut rels = Vec::new();
    for i in (0..grid.n()).step_by(7) {
        let x = grid.center(i);
        let p = op.fixed_scale(4, 1.0, x).unwrap();
        let q = prof.values()[i];
        let rel = (p - q).abs() / p.max(q);
        assert!(rel <= 0.25, "x={x}: point {p}, profile {q}");
        rels.push(rel);
    }
    assert!(rels.iter().sum::<f64>() / (rels.len() as f64) < 0.08, "{rels:?}");
}

#[test]
fn witness_contains_point_and_reproduces_value() {
    let grid = Grid::with_spacing(-2.0, 10.0, 0.125).unwrap();
    let f = parse_function_spec("powercut:a=-0.5,lo=1,hi=8", grid).unwrap();
    let op = KakeyaMaximal::new(&f, &f).unwrap();
    for x in [1.5, 3.0, 6.25] {
        let w = op.full_witness(8, x).unwrap().unwrap();
        assert!(w.rect.contains([x, x]));
        assert!(w.rect.eccentricity() <= 8.0 + 1e-9);
        assert!((rect_average_clipped(&f, &f, &w.rect) - w.value).abs() <= 1e-10 * (1.0 + w.value));
    }
    let csv = witnesses_csv(&[op.fixed_scale_witness(4, 1.0, 3.0).unwrap().unwrap()]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("center_x,center_y,angle,length,width,value"));
    let fields: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(fields.len(), 6);
    assert_eq!((fields[3], fields[4]), (4.0, 1.0));
}
