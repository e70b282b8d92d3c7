use std::path::PathBuf;
use std::process::ExitCode;

use bkm_cli::{exit_code, find, registry, run_experiment, Config, ConfigError, ExperimentError};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bkm", about = "Bilinear Kakeya and Bochner-Riesz experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered experiments.
    List,
    /// Show an experiment's parameters and defaults.
    Describe { name: String },
    /// Run an experiment; extra `--key value` pairs override parameters.
    Run {
        name: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long = "grid-n")]
        grid_n: Option<usize>,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
}

/// Flags of `run`, which may also appear after the first override.
struct RunFlags {
    config: Option<PathBuf>,
    out: PathBuf,
    seed: Option<String>,
    threads: Option<usize>,
    grid_n: Option<String>,
}

fn bad(key: &str, value: &str, expected: &'static str) -> ConfigError {
    ConfigError::BadValue { key: key.to_string(), value: value.to_string(), expected }
}

/// Splits `--key value` and `--key=value` items into run flags and
/// parameter overrides.
fn parse_overrides(args: &[String], flags: &mut RunFlags) -> Result<Vec<(String, String)>, ConfigError> {
    let mut pairs = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let Some(key) = a.strip_prefix("--") else {
            return Err(ConfigError::Syntax { line: 0, text: a.clone() });
        };
        let (k, v) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => (key.to_string(), it.next().ok_or_else(|| ConfigError::Syntax { line: 0, text: a.clone() })?.clone()),
        };
        match k.as_str() {
            "config" => flags.config = Some(PathBuf::from(v)),
            "out" => flags.out = PathBuf::from(v),
            "seed" => flags.seed = Some(v.parse::<u64>().map_err(|_| bad("seed", &v, "an unsigned integer"))?.to_string()),
            "threads" => flags.threads = Some(v.parse().map_err(|_| bad("threads", &v, "a positive integer"))?),
            "grid-n" | "grid_n" => flags.grid_n = Some(v.parse::<usize>().map_err(|_| bad("grid-n", &v, "a positive integer"))?.to_string()),
            _ => pairs.push((k, v)),
        }
    }
    Ok(pairs)
}

fn run(name: &str, mut flags: RunFlags, overrides: &[String]) -> Result<i32, ExperimentError> {
    let exp = find(name).ok_or_else(|| ConfigError::UnknownExperiment(name.to_string()))?;
    let pairs = parse_overrides(overrides, &mut flags)?;
    let mut cfg = match &flags.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let declares = |k: &str| exp.params.iter().any(|p| p.key == k);
    if let Some(s) = &flags.seed {
        if declares("seed") {
            cfg.set("seed", s);
        } else {
            eprintln!("warning: {name} is deterministic and takes no seed; --seed ignored");
        }
    }
    if let Some(g) = &flags.grid_n {
        if declares("grid_n") {
            cfg.set("grid_n", g);
        } else {
            eprintln!("warning: {name} has no grid_n parameter; --grid-n ignored");
        }
    }
    for (k, v) in &pairs {
        cfg.set(k, v);
    }
    if let Some(t) = flags.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| ExperimentError::Runtime(e.to_string()))?;
    }
    let outcome = run_experiment(name, &cfg)?;
    let files = outcome.write(&flags.out)?;
    for f in files {
        println!("wrote {}", f.display());
    }
    println!("{}", outcome.summary_line());
    Ok(exit_code(&outcome))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::List => {
            for e in registry() {
                println!("{:<18} {}", e.name, e.summary);
            }
            0
        }
        Command::Describe { name } => match find(&name) {
            Some(e) => {
                println!("{}: {}", e.name, e.summary);
                println!("budget: {} s", e.budget_secs);
                for p in e.params {
                    println!("  --{:<14} {:<24} {}", p.key.replace('_', "-"), p.default, p.help);
                }
                0
            }
            None => {
                eprintln!("error: {}", ConfigError::UnknownExperiment(name));
                2
            }
        },
        Command::Run { name, config, out, seed, threads, grid_n, overrides } => match run(&name, RunFlags { config, out, seed: seed.map(|s| s.to_string()), threads, grid_n: grid_n.map(|g| g.to_string()) }, &overrides) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    };
    ExitCode::from(code as u8)
}
