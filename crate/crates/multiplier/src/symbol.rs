use std::fmt;
use std::sync::Arc;

use bkm_convex::ConvexDomain;

use crate::{MultiplierError, Result};

type Eval = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A real bilinear symbol `m(ξ, η)`.
#[derive(Clone)]
pub struct MultiplierSymbol {
    name: String,
    eval: Eval,
    support_radius: Option<f64>,
    even: bool,
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("name", &self.name)
            .field("support_radius", &self.support_radius)
            .field("even", &self.even)
            .finish()
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(MultiplierError::BadParameter { name, value: v })
    }
}

/// `e^{-1/x}` glued to 0; `C^∞`.
fn flat(x: f64) -> f64 {
    if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() }
}

/// Smooth monotone step, 0 for `x <= 0` and 1 for `x >= 1`.
pub fn smooth_step(x: f64) -> f64 {
    let (a, b) = (flat(x), flat(1.0 - x));
    a / (a + b)
}

/// Inner cutoff: 1 on `[0, 1/2]`, 0 on `[3/4, ∞)`.
pub fn inner_cutoff(r: f64) -> f64 {
    1.0 - smooth_step(4.0 * (r - 0.5))
}

/// Littlewood–Paley piece `ψ(s) = G(s/2) − G(s)` with `G(t) = 1 − Θ(1 − t)`,
/// so that `Σ_{l>=1} ψ(2^l t) = G(t)` for `t > 0`. Supported in `[1/4, 1]`.
pub fn lp_bump(s: f64) -> f64 {
    let g = |t: f64| smooth_step(4.0 * (0.5 - t));
    g(0.5 * s) - g(s)
}

/// `exp(1 − 1/(1 − x²))` on `|x| < 1`, peak value 1.
pub fn radial_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 { 0.0 } else { (1.0 - 1.0 / (1.0 - x * x)).exp() }
}

impl MultiplierSymbol {
    pub fn new(name: impl Into<String>, support_radius: Option<f64>, even: bool, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), eval: Arc::new(f), support_radius, even }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.support_radius
    }

    /// `m(-ζ) = m(ζ)`; with real inputs the operator output is then real.
    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn eval(&self, xi: f64, eta: f64) -> f64 {
        if let Some(r) = self.support_radius {
            if xi.hypot(eta) > r {
                return 0.0;
            }
        }
        (self.eval)(xi, eta)
    }

    pub fn one() -> Self {
        Self::new("one", None, true, |_, _| 1.0)
    }

    pub fn bump(r: f64) -> Result<Self> {
        let r = positive("bump radius", r)?;
        Ok(Self::new(format!("bump:r={r}"), Some(r), true, move |x, y| radial_bump(x.hypot(y) / r)))
    }

    pub fn disc_indicator(r: f64) -> Result<Self> {
        let r = positive("disc radius", r)?;
        Ok(Self::new(format!("disc-indicator:r={r}"), Some(r), true, move |x, y| if x.hypot(y) <= r { 1.0 } else { 0.0 }))
    }

    /// `(1 − ρ_Ω(ξ/R, η/R))^λ_+`.
    pub fn bochner_riesz(domain: &ConvexDomain, lambda: f64, r: f64) -> Result<Self> {
        let lambda = positive("lambda", lambda)?;
        let r = positive("R", r)?;
        let even = is_centrally_symmetric(domain);
        let d = domain.clone();
        Ok(Self::new(format!("br:lambda={lambda},R={r}"), Some(r * domain.circumradius() * (1.0 + 1e-12)), even, move |x, y| {
            let t = 1.0 - d.rho([x / r, y / r]);
            if t > 0.0 { t.powf(lambda) } else { 0.0 }
        }))
    }

    /// `(1 − |ζ|/R)^λ_+` computed without the convex-domain gauge.
    pub fn radial_bochner_riesz(lambda: f64, r: f64) -> Result<Self> {
        let lambda = positive("lambda", lambda)?;
        let r = positive("R", r)?;
        Ok(Self::new(format!("radial-br:lambda={lambda},R={r}"), Some(r), true, move |x, y| {
            let t = 1.0 - x.hypot(y) / r;
            if t > 0.0 { t.powf(lambda) } else { 0.0 }
        }))
    }

    /// `(1 − (ξ² + η²)/R²)^λ_+`.
    pub fn classical_bochner_riesz(lambda: f64, r: f64) -> Result<Self> {
        let lambda = positive("lambda", lambda)?;
        let r = positive("R", r)?;
        Ok(Self::new(format!("classical-br:lambda={lambda},R={r}"), Some(r), true, move |x, y| {
            let t = 1.0 - (x * x + y * y) / (r * r);
            if t > 0.0 { t.powf(lambda) } else { 0.0 }
        }))
    }

    /// Parse `one`, `bump:r=<r>` or `br:domain=<domain spec>,lambda=<λ>,R=<R>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |reason: &str| MultiplierError::Malformed { spec: spec.to_string(), reason: reason.to_string() };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("`{s}` is not a number")));
        if spec == "one" {
            return Ok(Self::one());
        }
        if let Some(rest) = spec.strip_prefix("bump:") {
            let r = rest.strip_prefix("r=").ok_or_else(|| bad("expected r=<radius>"))?;
            return Self::bump(num(r)?);
        }
        if let Some(rest) = spec.strip_prefix("br:") {
            let rest = rest.strip_prefix("domain=").ok_or_else(|| bad("expected domain=<spec> first"))?;
            let lam_at = rest.rfind(",lambda=").ok_or_else(|| bad("missing lambda"))?;
            let r_at = rest.rfind(",R=").ok_or_else(|| bad("missing R"))?;
            let cut = lam_at.min(r_at);
            let domain = ConvexDomain::from_spec(&rest[..cut])?;
            let field = |at: usize, key: &str| {
                let tail = &rest[at + key.len()..];
                let end = tail.find(',').unwrap_or(tail.len());
                num(&tail[..end])
            };
            let lambda = field(lam_at, ",lambda=")?;
            let r = field(r_at, ",R=")?;
            let mut s = Self::bochner_riesz(&domain, lambda, r)?;
            s.name = spec.to_string();
            return Ok(s);
        }
        Err(bad("unknown symbol; expected one, bump:r= or br:domain=,lambda=,R="))
    }
}

/// `Ω = −Ω`, tested on the boundary in 256 directions.
fn is_centrally_symmetric(domain: &ConvexDomain) -> bool {
    (0..256).all(|k| {
        let th = std::f64::consts::PI * k as f64 / 128.0;
        let v = [th.cos(), th.sin()];
        (domain.rho(v) - domain.rho([-v[0], -v[1]])).abs() <= 1e-12 * domain.rho(v)
    })
}

/// The pieces `m_0, m_1, …, m_L` of `(1 − ρ)^λ_+ = m_0 + Σ_l 2^{−λl} m_l`:
/// `m_0 = Θ(ρ)(1 − ρ)^λ_+` and `m_l = 2^{λl} ψ(2^l(1 − ρ))(1 − ρ)^λ_+`.
pub fn dyadic_decomposition(domain: &ConvexDomain, lambda: f64, levels: u32) -> Result<Vec<MultiplierSymbol>> {
    let lambda = positive("lambda", lambda)?;
    if levels < 1 {
        return Err(MultiplierError::BadParameter { name: "levels", value: 0.0 });
    }
    let even = is_centrally_symmetric(domain);
    let radius = Some(domain.circumradius() * (1.0 + 1e-12));
    let mut out = Vec::with_capacity(levels as usize + 1);
    let d = domain.clone();
    out.push(MultiplierSymbol::new(format!("dyadic:l=0,lambda={lambda}"), radius, even, move |x, y| {
        let rho = d.rho([x, y]);
        if rho >= 1.0 { 0.0 } else { inner_cutoff(rho) * (1.0 - rho).powf(lambda) }
    }));
    for l in 1..=levels {
        let d = domain.clone();
        let scale = 2f64.powi(l as i32);
        out.push(MultiplierSymbol::new(format!("dyadic:l={l},lambda={lambda}"), radius, even, move |x, y| {
            let t = 1.0 - d.rho([x, y]);
            if t <= 0.0 { 0.0 } else { scale.powf(lambda) * lp_bump(scale * t) * t.powf(lambda) }
        }));
    }
    Ok(out)
}

/// `m_0 + Σ_{l<=L} 2^{−λl} m_l` at one point.
pub fn dyadic_reconstruct(pieces: &[MultiplierSymbol], lambda: f64, xi: f64, eta: f64) -> f64 {
    pieces
        .iter()
        .enumerate()
        .map(|(l, m)| 2f64.powf(-lambda * l as f64) * m.eval(xi, eta))
        .sum()
}
