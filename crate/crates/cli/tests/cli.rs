use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use bkm_cli::output::{csv_string, emit_csv, emit_plot, parse_csv, svg_string};
use bkm_cli::{registry, run_experiment, Config, ConfigError, ExperimentError, Plot, Table};

fn bkm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bkm")).args(args).output().expect("spawn bkm")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Every CSV under `dir` except the runtime table, by file name.
fn csvs(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv") && !p.file_stem().unwrap().to_string_lossy().ends_with("_runtime"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn list_and_describe() {
    let o = bkm(&["list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for e in registry() {
        assert!(text.contains(e.name), "{} missing from list", e.name);
    }
    assert_eq!(registry().len(), 12);
    let mut criteria: Vec<u8> = registry().iter().map(|e| e.criterion).collect();
    criteria.sort();
    assert_eq!(criteria, (1..=12).collect::<Vec<u8>>());
    assert!(registry().iter().all(|e| e.budget_secs <= 600));

    let d = bkm(&["describe", "kappa"]);
    assert_eq!(code(&d), 0);
    assert!(stdout(&d).contains("--domain") && stdout(&d).contains("disc:r=1"));
    assert_eq!(code(&bkm(&["describe", "nope"])), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let ok = bkm(&["run", "subordination", "--out", out]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).lines().last().unwrap().starts_with("PASS subordination"));
    assert!(dir.path().join("subordination.csv").exists() && dir.path().join("subordination_runtime.csv").exists());

    assert_eq!(code(&bkm(&["run", "nope", "--out", out])), 2);
    assert_eq!(code(&bkm(&["run", "kappa", "--bogus", "1", "--out", out])), 2);
    assert_eq!(code(&bkm(&["run", "kappa", "--j-min", "six", "--out", out])), 2);
    assert_eq!(code(&bkm(&["run", "kappa", "--domain"])), 2);
    // Too few scales for a dimension estimate.
    assert_eq!(code(&bkm(&["run", "kappa", "--j-min", "6", "--j-max", "7", "--out", out])), 3);
    let fail = bkm(&["run", "kappa", "--smooth-tol", "1e-6", "--out", out]);
    assert_eq!(code(&fail), 1);
    assert!(stdout(&fail).contains("FAIL kappa"));
}

#[test]
fn kappa_on_an_octagon() {
    let dir = tempfile::tempdir().unwrap();
    let o = bkm(&["run", "kappa", "--domain", "ngon:k=8,r=1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let t = parse_csv("kappa", &std::fs::read_to_string(dir.path().join("kappa.csv")).unwrap()).unwrap();
    assert_eq!(t.header, ["delta", "covering_number"]);
    assert_eq!(t.rows.len(), 10);
    // Eight caps suffice for an octagon at every scale.
    assert!(t.rows[..9].iter().all(|r| r[1] == "8"), "{:?}", t.rows);
    let svg = std::fs::read_to_string(dir.path().join("kappa.svg")).unwrap();
    roxmltree::Document::parse(&svg).unwrap();
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# coarse run\nj_min = 5\nj-max = 9   # four scales or more\n").unwrap();
    let out = dir.path().join("out");
    let o = bkm(&["run", "kappa", "--config", cfg.to_str().unwrap(), "--j-max=10", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let t = parse_csv("kappa", &std::fs::read_to_string(out.join("kappa.csv")).unwrap()).unwrap();
    assert_eq!(t.rows.first().unwrap()[0], "0.03125");
    assert_eq!(t.rows.len(), 7);

    let c = Config::parse("a = 1\n\n# x\nb-c = 4/3\n").unwrap();
    assert_eq!(c.get("b_c"), Some("4/3"));
    assert!(matches!(Config::parse("just words"), Err(ConfigError::Syntax { line: 1, .. })));
    assert!(matches!(Config::load(Path::new("/nonexistent/x.cfg")), Err(ConfigError::Io { .. })));

    let exp = bkm_cli::find("mn-nonbanach").unwrap();
    let p = Config::default().resolve(exp.name, exp.params).unwrap();
    assert!((p.f64("p1").unwrap() - 4.0 / 3.0).abs() < 1e-15);
    assert_eq!(p.usize_list("ns").unwrap(), [16, 32, 64, 128, 256]);
    let mut bad = Config::default();
    bad.set("colour", "red");
    assert!(matches!(run_experiment("kappa", &bad), Err(ExperimentError::Config(ConfigError::UnknownKey { .. }))));
}

#[test]
fn empty_plot_is_valid_svg() {
    let plot = Plot::new("empty", "Nothing <here>", ("N", true), ("ratio", false));
    let svg = svg_string(&plot);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert!(svg.contains("no data"));
    // Nonpositive points on a log axis are dropped, not drawn.
    let p = Plot::new("p", "t", ("x", true), ("y", true)).with_series("s", vec![(0.0, 1.0), (-1.0, 2.0), (10.0, 3.0), (100.0, 4.0)]);
    let svg = svg_string(&p);
    roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(svg.matches("<circle").count(), 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a/b/empty.svg");
    emit_plot(&plot, &path).unwrap();
    assert!(path.exists());
}

#[test]
fn csv_round_trip() {
    let mut t = Table::new("t", &["N", "value", "label"]);
    t.push(vec!["16".into(), "0.1".into(), "a,b".into()]);
    t.push(vec!["32".into(), "1e-300".into(), "quote \"q\"".into()]);
    t.push(vec!["64".into(), (1.0f64 / 3.0).to_string(), String::new()]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    emit_csv(&t, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, csv_string(&t));
    let back = parse_csv("t", &text).unwrap();
    assert_eq!(back, t);
    assert_eq!(back.rows[2][1].parse::<f64>().unwrap(), 1.0 / 3.0);

    let blocked = dir.path().join("file");
    std::fs::write(&blocked, "x").unwrap();
    let err = emit_csv(&t, &blocked.join("t.csv")).unwrap_err();
    assert!(err.to_string().contains("file"), "{err}");
}

#[test]
fn runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = bkm(&["run", "counting", "--ns", "16,32", "--families", "40", "--fan-n", "32", "--seed", "5", "--out", d.path().to_str().unwrap()]);
        assert!(code(&o) <= 1, "{}", stdout(&o));
    }
    let (x, y) = (csvs(a.path()), csvs(b.path()));
    assert!(x.len() >= 2);
    assert_eq!(x, y);

    let c = tempfile::tempdir().unwrap();
    bkm(&["run", "counting", "--ns", "16,32", "--families", "40", "--fan-n", "32", "--seed", "6", "--out", c.path().to_str().unwrap()]);
    assert_ne!(x["counting.csv"], csvs(c.path())["counting.csv"]);
}

#[test]
fn thread_count_does_not_change_results() {
    let dirs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for (d, t) in dirs.iter().zip(["1", "3"]) {
        let o = bkm(&["run", "domination", "--pairs", "3", "--ns", "8,16", "--grid-n", "8", "--threads", t, "--out", d.path().to_str().unwrap()]);
        assert!(code(&o) <= 1, "{}", stdout(&o));
    }
    assert_eq!(csvs(dirs[0].path()), csvs(dirs[1].path()));
}
