//! Named, reproducible experiments over the workspace libraries. Each run
//! resolves its parameters, writes CSV tables and SVG plots, and reports
//! pass or fail against its acceptance check.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;

pub use config::{Config, ConfigError, ParamSpec, Params};
pub use experiments::{find, registry, Experiment};
pub use output::{Plot, Series, Table};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Runtime(String),
}

macro_rules! runtime_from {
    ($($t:ty),*) => {$(
        impl From<$t> for ExperimentError {
            fn from(e: $t) -> Self {
                ExperimentError::Runtime(e.to_string())
            }
        }
    )*};
}

runtime_from!(
    bkm_grid::GridError,
    bkm_convex::ConvexError,
    bkm_multiplier::MultiplierError,
    bkm_kakeya::KakeyaError,
    bkm_counting::CountingError,
    bkm_extremal::ExtremalError,
    bkm_estimator::EstimatorError,
    std::io::Error
);

impl ExperimentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::Runtime(_) => 3,
        }
    }
}

/// One clause of an experiment's acceptance check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(label: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self { label: label.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
    /// Wall-clock seconds per stage; kept out of the CSV tables so those
    /// stay byte-identical between runs.
    pub timings: Vec<(String, f64)>,
    pub seconds: f64,
}

impl Outcome {
    pub fn new(name: &str) -> Self {
        Self { name: name.into(), checks: Vec::new(), tables: Vec::new(), plots: Vec::new(), timings: Vec::new(), seconds: 0.0 }
    }

    pub fn check(&mut self, label: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(label, pass, detail));
    }

    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }

    /// `PASS name: ...` or `FAIL name: ...` with every clause.
    pub fn summary_line(&self) -> String {
        let parts: Vec<String> = self.checks.iter().map(|c| format!("[{}] {}: {}", if c.pass { "ok" } else { "FAILED" }, c.label, c.detail)).collect();
        format!("{} {} ({:.1} s): {}", if self.pass() { "PASS" } else { "FAIL" }, self.name, self.seconds, parts.join("; "))
    }

    pub fn timing_table(&self) -> Table {
        let mut t = Table::new(format!("{}_runtime", self.name), &["stage", "seconds"]);
        for (stage, s) in &self.timings {
            t.push(vec![stage.clone(), output::num(*s)]);
        }
        t.push(vec!["total".into(), output::num(self.seconds)]);
        t
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        let mut files = output::write_all(dir, &self.tables, &self.plots)?;
        let t = self.timing_table();
        let p = dir.join(format!("{}.csv", t.name));
        output::emit_csv(&t, &p)?;
        files.push(p);
        Ok(files)
    }
}

/// Resolves `config` against the experiment's declared keys and runs it.
pub fn run_experiment(name: &str, config: &Config) -> Result<Outcome, ExperimentError> {
    let exp = find(name).ok_or_else(|| ConfigError::UnknownExperiment(name.to_string()))?;
    let params = config.resolve(exp.name, exp.params)?;
    let start = Instant::now();
    let mut out = (exp.run)(&params)?;
    out.seconds = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Exit status for a finished run: 0 pass, 1 fail.
pub fn exit_code(outcome: &Outcome) -> i32 {
    if outcome.pass() {
        0
    } else {
        1
    }
}
