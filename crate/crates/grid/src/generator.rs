use std::collections::BTreeMap;
use std::fmt;

use crate::{Grid, GridError, Result, Sampled2d, SampledFunction};

/// A named one-dimensional generator.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Indicator { lo: f64, hi: f64 },
    PowerCut { a: f64, lo: f64, hi: f64 },
    Gaussian { sigma: f64 },
    Spike { center: f64, width: f64 },
}

impl Generator {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Generator::Indicator { lo, hi } => inside(x, lo, hi) as u8 as f64,
            Generator::PowerCut { a, lo, hi } => {
                if inside(x, lo, hi) {
                    x.powf(a)
                } else {
                    0.0
                }
            }
            Generator::Gaussian { sigma } => (-x * x / (2.0 * sigma * sigma)).exp(),
            Generator::Spike { center, width } => {
                if inside(x, center - 0.5 * width, center + 0.5 * width) {
                    1.0 / width
                } else {
                    0.0
                }
            }
        }
    }

    pub fn sample(&self, grid: Grid) -> Result<SampledFunction> {
        SampledFunction::from_fn(grid, |x| self.eval(x))
    }
}

fn inside(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x < hi
}

/// Parsed form of the `name:key=val,...` mini-language.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    OneD(Generator),
    Product { fy: Generator, fz: Generator },
}

impl FunctionSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        if name == "product2d" {
            let mut fy = None;
            let mut fz = None;
            for part in rest.split(';') {
                let (key, inner) = part.split_once('=').ok_or_else(|| malformed(spec, "expected fx=<spec>;fy=<spec>"))?;
                let parsed = parse_generator(inner)?;
                match key.trim() {
                    "fx" => fy = Some(parsed),
                    "fy" => fz = Some(parsed),
                    other => return Err(malformed(spec, &format!("unknown factor `{other}`"))),
                }
            }
            let fy = fy.ok_or_else(|| malformed(spec, "missing fx"))?;
            let fz = fz.ok_or_else(|| malformed(spec, "missing fy"))?;
            return Ok(FunctionSpec::Product { fy, fz });
        }
        parse_generator(spec).map(FunctionSpec::OneD)
    }
}

fn malformed(spec: &str, reason: &str) -> GridError {
    GridError::Malformed { spec: spec.to_string(), reason: reason.to_string() }
}

fn out_of_range(spec: &str, reason: &str) -> GridError {
    GridError::OutOfRange { spec: spec.to_string(), reason: reason.to_string() }
}

fn parse_generator(spec: &str) -> Result<Generator> {
    let spec = spec.trim();
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = BTreeMap::new();
    for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| malformed(spec, &format!("`{kv}` is not key=val")))?;
        let v: f64 = v.trim().parse().map_err(|_| malformed(spec, &format!("`{v}` is not a number")))?;
        if !v.is_finite() {
            return Err(out_of_range(spec, &format!("{k} is not finite")));
        }
        if params.insert(k.trim().to_string(), v).is_some() {
            return Err(malformed(spec, &format!("duplicate key `{k}`")));
        }
    }
    let keys: &[&str] = match name {
        "indicator" => &["lo", "hi"],
        "powercut" => &["a", "lo", "hi"],
        "gaussian" => &["sigma"],
        "spike" => &["center", "width"],
        _ => return Err(GridError::UnknownGenerator(name.to_string())),
    };
    if let Some(k) = params.keys().find(|k| !keys.contains(&k.as_str())) {
        return Err(malformed(spec, &format!("unknown key `{k}`")));
    }
    let get = |k: &str| params.get(k).copied().ok_or_else(|| malformed(spec, &format!("missing key `{k}`")));
    let g = match name {
        "indicator" => {
            let (lo, hi) = (get("lo")?, get("hi")?);
            if hi <= lo {
                return Err(out_of_range(spec, "hi must exceed lo"));
            }
            Generator::Indicator { lo, hi }
        }
        "powercut" => {
            let (a, lo, hi) = (get("a")?, get("lo")?, get("hi")?);
            if hi <= lo {
                return Err(out_of_range(spec, "hi must exceed lo"));
            }
            if lo < 0.0 || (a < 0.0 && lo == 0.0) {
                return Err(out_of_range(spec, "power needs lo > 0 (or lo = 0 with a >= 0)"));
            }
            Generator::PowerCut { a, lo, hi }
        }
        "gaussian" => {
            let sigma = get("sigma")?;
            if sigma <= 0.0 {
                return Err(out_of_range(spec, "sigma must be positive"));
            }
            Generator::Gaussian { sigma }
        }
        _ => {
            let (center, width) = (get("center")?, get("width")?);
            if width <= 0.0 {
                return Err(out_of_range(spec, "width must be positive"));
            }
            Generator::Spike { center, width }
        }
    };
    Ok(g)
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Indicator { lo, hi } => write!(f, "indicator:lo={lo},hi={hi}"),
            Generator::PowerCut { a, lo, hi } => write!(f, "powercut:a={a},lo={lo},hi={hi}"),
            Generator::Gaussian { sigma } => write!(f, "gaussian:sigma={sigma}"),
            Generator::Spike { center, width } => write!(f, "spike:center={center},width={width}"),
        }
    }
}

/// Sample a one-dimensional spec on `grid`.
pub fn parse_function_spec(spec: &str, grid: Grid) -> Result<SampledFunction> {
    match FunctionSpec::parse(spec)? {
        FunctionSpec::OneD(g) => g.sample(grid),
        FunctionSpec::Product { .. } => Err(malformed(spec, "product2d needs a tensor grid")),
    }
}

/// Sample a spec on the tensor grid `gy × gz`; one-dimensional generators are
/// rejected.
pub fn parse_function_spec_2d(spec: &str, gy: Grid, gz: Grid) -> Result<Sampled2d> {
    match FunctionSpec::parse(spec)? {
        FunctionSpec::Product { fy, fz } => Ok(Sampled2d::tensor(&fy.sample(gy)?, &fz.sample(gz)?)),
        FunctionSpec::OneD(_) => Err(malformed(spec, "expected product2d")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_counts_cells() {
        let grid = Grid::new(-2.0, 2.0, 400).unwrap();
        let f = parse_function_spec("indicator:lo=0,hi=1", grid).unwrap();
        assert_eq!(f.values().iter().filter(|&&v| v == 1.0).count(), 100);
        assert!(f.values().iter().all(|&v| v == 0.0 || v == 1.0));
    }

    #[test]
    fn powercut_values() {
        let grid = Grid::new(0.0, 16.0, 160).unwrap();
        let f = parse_function_spec("powercut:a=-1.0,lo=3,hi=12", grid).unwrap();
        for (i, &v) in f.values().iter().enumerate() {
            let x = grid.center(i);
            let want = if (3.0..12.0).contains(&x) { 1.0 / x } else { 0.0 };
            assert_eq!(v, want);
        }
    }

    #[test]
    fn gaussian_peak() {
        let g = parse_generator("gaussian:sigma=1").unwrap();
        assert_eq!(g.eval(0.0), 1.0);
        assert!((g.eval(1.0) - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn errors_are_diagnostic() {
        let grid = Grid::new(0.0, 1.0, 10).unwrap();
        assert!(matches!(parse_function_spec("wave:k=1", grid), Err(GridError::UnknownGenerator(_))));
        assert!(matches!(parse_function_spec("powercut:a=-1,lo=12,hi=3", grid), Err(GridError::OutOfRange { .. })));
        assert!(matches!(parse_function_spec("indicator:lo=0", grid), Err(GridError::Malformed { .. })));
        assert!(matches!(parse_function_spec("indicator:lo=0,hi=x", grid), Err(GridError::Malformed { .. })));
        assert!(matches!(parse_function_spec("indicator:lo=0,hi=1,w=2", grid), Err(GridError::Malformed { .. })));
        assert!(parse_function_spec("gaussian:sigma=0", grid).is_err());
        assert!(parse_function_spec("spike:center=0,width=-1", grid).is_err());
    }

    #[test]
    fn product_spec() {
        let g = Grid::new(0.0, 4.0, 8).unwrap();
        let f = parse_function_spec_2d("product2d:fx=indicator:lo=0,hi=1;fy=gaussian:sigma=2", g, g).unwrap();
        let want = (-(0.25f64 * 0.25) / 8.0).exp();
        assert!((f.value_at(0.25, 0.25) - want).abs() < 1e-15);
        assert_eq!(f.value_at(3.0, 0.25), 0.0);
        assert!(parse_function_spec("product2d:fx=indicator:lo=0,hi=1;fy=gaussian:sigma=2", g).is_err());
        assert!(parse_function_spec_2d("gaussian:sigma=2", g, g).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["indicator:lo=0,hi=1", "powercut:a=-1.5,lo=3,hi=64", "gaussian:sigma=0.25", "spike:center=0.5,width=0.0625"] {
            let g = parse_generator(s).unwrap();
            assert_eq!(parse_generator(&g.to_string()).unwrap(), g);
        }
    }
}
