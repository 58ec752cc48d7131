use std::path::Path;
use std::process::{Command, Output};

use maxmult::lab::{ExperimentConfig, ExperimentReport, Verdict};

fn maxmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxmult"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn list_names_every_experiment() {
    let out = maxmult(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in maxmult::lab::list() {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn missing_config_is_a_usage_error() {
    let out = maxmult(&["experiment", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not found"));
}

#[test]
fn unknown_experiment_lists_the_known_ones() {
    let out = maxmult(&["experiment", "no_such_thing"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("partition"));
}

#[test]
fn invalid_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let mut c = ExperimentConfig::base("partition");
    c.epsilon = 0.7;
    std::fs::write(&cfg, serde_json::to_string(&c).unwrap()).unwrap();
    let out = maxmult(&["experiment", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_writes_report_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("embedding");
    let out = maxmult(&["experiment", "embedding", "--out", path(&out_dir)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["report.json", "cases.csv", "shells.csv", "embedding.csv", "config.json"] {
        assert!(out_dir.join(f).exists(), "{f} missing");
    }
    let report = ExperimentReport::load(&out_dir.join("report.json")).unwrap();
    assert_eq!(report.verdict(), Verdict::Pass);
    let cfg = ExperimentConfig::load(&out_dir.join("config.json")).unwrap();
    maxmult::lab::verify(&report, &cfg).unwrap();
}

#[test]
fn written_config_round_trips_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("partition.json");
    assert_eq!(
        maxmult(&["experiment", "partition", "--write-config", path(&cfg)])
            .status
            .code(),
        Some(0)
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(
        maxmult(&["experiment", "--config", path(&cfg), "--out", path(&a)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        maxmult(&["experiment", "partition", "--out", path(&b)]).status.code(),
        Some(0)
    );
    for f in ["cases.csv", "partition.csv"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn failing_experiment_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxmult(&["experiment", "convergence", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn norm_command_writes_shells() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxmult(&[
        "norm",
        "--family",
        "ring",
        "--param",
        "c=1",
        "--space",
        "besov:2:1",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("shells.csv")).unwrap();
    assert!(csv.starts_with("j,norm,weighted"));
    assert!(dir.path().join("norm.json").exists());
}

#[test]
fn maximal_command_writes_a_field_container() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("max.bin");
    let out = maxmult(&["maximal", "--n", "512", "--out", path(&file)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let f = maxmult::spectral::read_field(std::fs::File::open(&file).unwrap()).unwrap();
    assert_eq!(f.grid().samples_per_axis(), 512);
    assert!(f.values().iter().all(|v| v.re >= 0.0 && v.im == 0.0));
}

#[test]
fn bad_space_is_rejected_by_the_parser() {
    let out = maxmult(&["norm", "--space", "sobolev"]);
    assert_eq!(out.status.code(), Some(2));
}
