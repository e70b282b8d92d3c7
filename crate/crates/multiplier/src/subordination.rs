use std::sync::Arc;

use crate::{MultiplierError, Result};

type F1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A profile `m: [0, ∞) → ℝ` with its first few derivatives and the points
/// where some derivative is not smooth.
#[derive(Clone)]
pub struct ScalarProfile {
    pub name: String,
    value: F1,
    derivatives: Vec<F1>,
    breakpoints: Vec<f64>,
}

impl std::fmt::Debug for ScalarProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarProfile").field("name", &self.name).field("breakpoints", &self.breakpoints).finish()
    }
}

impl ScalarProfile {
    /// `derivatives[k-1]` is the k-th derivative.
    pub fn new(name: impl Into<String>, value: F1, derivatives: Vec<F1>, breakpoints: Vec<f64>) -> Self {
        Self { name: name.into(), value, derivatives, breakpoints }
    }

    /// `e^{−t}`.
    pub fn exp_decay() -> Self {
        let d: Vec<F1> = (1..=3).map(|k| Arc::new(move |t: f64| if k % 2 == 1 { -(-t).exp() } else { (-t).exp() }) as F1).collect();
        Self::new("exp", Arc::new(|t: f64| (-t).exp()), d, Vec::new())
    }

    /// `(1 − t)^p_+`.
    pub fn power_cut(p: u32) -> Self {
        let cut = move |t: f64, q: i32, c: f64| if t < 1.0 { c * (1.0 - t).powi(q) } else { 0.0 };
        let d: Vec<F1> = (1..=3u32)
            .map(|k| {
                let c = if k > p { 0.0 } else { (p - k + 1..=p).map(|i| i as f64).product::<f64>() * if k % 2 == 1 { -1.0 } else { 1.0 } };
                let q = p as i32 - k as i32;
                Arc::new(move |t: f64| if q < 0 { 0.0 } else { cut(t, q, c) }) as F1
            })
            .collect();
        Self::new(format!("powercut:p={p}"), Arc::new(move |t| cut(t, p as i32, 1.0)), d, vec![1.0])
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.value)(t)
    }

    pub fn derivative(&self, k: usize, t: f64) -> Option<f64> {
        self.derivatives.get(k.checked_sub(1)?).map(|d| d(t))
    }
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = hl * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * hl, ((k - g) * hl).abs())
}

/// Adaptive Gauss–Kronrod on `[a, b]`; returns the value and the estimated
/// error relative to the value's magnitude.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> (f64, f64) {
    let mut parts = vec![(a, b, gk15(f, a, b))];
    for _ in 0..2000 {
        let total: f64 = parts.iter().map(|p| p.2 .0).sum();
        let err: f64 = parts.iter().map(|p| p.2 .1).sum();
        if err <= rel_tol * total.abs() || err < 1e-300 {
            break;
        }
        let (i, _) = parts.iter().enumerate().fold((0, -1.0), |acc, (i, p)| if p.2 .1 > acc.1 { (i, p.2 .1) } else { acc });
        let (lo, hi, _) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        parts.push((lo, mid, gk15(f, lo, mid)));
        parts.push((mid, hi, gk15(f, mid, hi)));
    }
    let total: f64 = parts.iter().map(|p| p.2 .0).sum();
    let err: f64 = parts.iter().map(|p| p.2 .1).sum();
    (total, err / total.abs().max(f64::MIN_POSITIVE))
}

/// `m(ρ) = ((−1)^{λ+1}/Γ(λ+1)) ∫_0^∞ s^λ m^{(λ+1)}(s) (1 − ρ/s)^λ_+ ds` for
/// `λ + 1 ∈ {1, 2, 3}`, evaluated by adaptive quadrature at each `ρ`.
pub fn subordination_reconstruct(m: &ScalarProfile, lambda: f64, rhos: &[f64]) -> Result<Vec<f64>> {
    if !(lambda == 0.0 || lambda == 1.0 || lambda == 2.0) {
        return Err(MultiplierError::SubordinationOrder(lambda));
    }
    let order = lambda as usize + 1;
    if m.derivative(order, 0.0).is_none() {
        return Err(MultiplierError::SubordinationOrder(lambda));
    }
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    let gamma = (1..=lambda as u32).map(|i| i as f64).product::<f64>();
    rhos.iter()
        .map(|&rho| {
            if !(rho >= 0.0 && rho.is_finite()) {
                return Err(MultiplierError::BadParameter { name: "rho", value: rho });
            }
            // s^λ (1 − ρ/s)^λ = (s − ρ)^λ on s > ρ.
            let integrand = |s: f64| (s - rho).powi(lambda as i32) * m.derivative(order, s).unwrap_or(0.0);
            let mut cuts: Vec<f64> = m.breakpoints.iter().copied().filter(|&b| b > rho).collect();
            cuts.sort_by(f64::total_cmp);
            let mut total = 0.0;
            let mut worst = 0.0f64;
            let mut lo = rho;
            for &c in &cuts {
                let (v, e) = integrate(&integrand, lo, c, 1e-14);
                total += v;
                worst = worst.max(e * v.abs());
                lo = c;
            }
            // Tail [lo, ∞) through s = lo + u/(1 − u).
            let tail = |u: f64| {
                let w = 1.0 - u;
                integrand(lo + u / w) / (w * w)
            };
            let (v, e) = integrate(&tail, 0.0, 1.0, 1e-14);
            total += v;
            worst = worst.max(e * v.abs());
            let change = worst / total.abs().max(f64::MIN_POSITIVE);
            if change > 1e-10 && worst > 1e-300 {
                return Err(MultiplierError::Quadrature { rho, change });
            }
            Ok(sign * total / gamma)
        })
        .collect()
}
