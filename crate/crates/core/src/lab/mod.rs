//! Config-driven experiments with persisted JSON and CSV reports.
//!
//! An experiment is a named function from an [`ExperimentConfig`] to a list
//! of [`Case`]s. Each case stores its metrics and the checks applied to
//! them, so verdicts can be recomputed from a saved report.

mod config;
mod corpus;
mod experiments;
mod report;

pub use config::{ExperimentConfig, GridSpec, SymbolSpec, SCHEMA_VERSION};
pub use corpus::{random_band_limited, wave_packet, CorpusKind, CorpusSpec};
pub use experiments::{find, registry, Experiment, Tables};
pub use report::{num, Case, Check, ExperimentReport, Relation, Table, Verdict};

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// SHA-256 of the canonical JSON encoding, as lowercase hex.
pub fn fingerprint<T: Serialize + ?Sized>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable value");
    let digest = Sha256::digest(&bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Names of all registered experiments.
pub fn list() -> Vec<&'static str> {
    registry().iter().map(|e| e.name).collect()
}

/// The registered default config of an experiment.
pub fn default_config(name: &str) -> Result<ExperimentConfig> {
    find(name)
        .map(|e| (e.default_config)())
        .ok_or_else(|| Error::Config(format!("unknown experiment {name:?}")))
}

/// Run an experiment in memory. Returns the report and its CSV tables.
pub fn run(cfg: &ExperimentConfig) -> Result<(ExperimentReport, Tables)> {
    cfg.validate()?;
    let exp = find(&cfg.experiment).ok_or_else(|| Error::Config(format!("unknown experiment {:?}", cfg.experiment)))?;
    let start = Instant::now();
    let mut tables = Tables::new();
    let cases = (exp.run)(cfg, &mut tables)?;
    let mut artifacts = vec!["report.json".to_string(), "cases.csv".to_string()];
    artifacts.extend(tables.keys().cloned());
    let report = ExperimentReport {
        schema_version: SCHEMA_VERSION,
        experiment: cfg.experiment.clone(),
        config_fingerprint: cfg.fingerprint(),
        refined: cfg.refined,
        cases,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        artifacts,
    };
    Ok((report, tables))
}

/// Run an experiment and write `report.json`, `cases.csv`, its tables and
/// the config it ran with into `out`.
pub fn run_to_dir(cfg: &ExperimentConfig, out: &Path) -> Result<ExperimentReport> {
    let (report, tables) = run(cfg)?;
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    std::fs::write(out.join("cases.csv"), report.cases_csv())?;
    for (name, t) in &tables {
        std::fs::write(out.join(name), t.to_csv())?;
    }
    cfg.save(&out.join("config.json"))?;
    Ok(report)
}

/// Check a saved report against the config it claims to come from.
pub fn verify(report: &ExperimentReport, cfg: &ExperimentConfig) -> Result<()> {
    let expect = cfg.fingerprint();
    if report.config_fingerprint != expect {
        return Err(Error::Config(format!(
            "fingerprint mismatch: report {} vs config {expect}",
            report.config_fingerprint
        )));
    }
    report.verify_verdicts()
}
