//! Run manifests and the artifact writer.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::report::{to_csv, ScanReport};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Assertion {
    /// Acceptance criterion number, when the assertion realizes one.
    pub criterion: Option<u8>,
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Pass,
    Fail,
    Skipped,
    Aborted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub wall_seconds: f64,
    pub status: StageStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub workers: usize,
    pub versions: BTreeMap<String, String>,
    pub stages: Vec<StageRecord>,
    pub assertions: Vec<Assertion>,
    pub exit_code: i32,
}

impl RunManifest {
    pub fn all_passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

/// SHA-256 of the canonical JSON form of the effective configuration.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let canon = serde_json::to_vec(cfg).expect("config serializes");
    let digest = Sha256::digest(&canon);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn versions() -> BTreeMap<String, String> {
    let v = env!("CARGO_PKG_VERSION").to_string();
    ["curvlens", "special_functions", "sphere_spectral", "hyperbolic_spectral", "norm_engine", "experiments_cli"]
        .iter()
        .map(|m| (m.to_string(), v.clone()))
        .collect()
}

/// Accumulates stage timings, assertions and artifacts of one subcommand.
pub struct Run {
    pub subcommand: String,
    pub config: ExperimentConfig,
    pub workers: usize,
    pub stages: Vec<StageRecord>,
    pub assertions: Vec<Assertion>,
    pub reports: Vec<ScanReport>,
    pub documents: BTreeMap<String, serde_json::Value>,
    pub svgs: Vec<(String, String)>,
    aborted: Option<Error>,
}

impl Run {
    pub fn new(subcommand: &str, config: ExperimentConfig, workers: usize) -> Self {
        Self {
            subcommand: subcommand.into(),
            config,
            workers,
            stages: Vec::new(),
            assertions: Vec::new(),
            reports: Vec::new(),
            documents: BTreeMap::new(),
            svgs: Vec::new(),
            aborted: None,
        }
    }

    /// Times `body` as a named stage. Numerical errors mark the stage
    /// aborted and let later stages run; configuration errors propagate.
    pub fn stage<F>(&mut self, name: &str, body: F) -> Result<()>
    where
        F: FnOnce(&mut Run) -> Result<()>,
    {
        let before = self.assertions.len();
        let start = Instant::now();
        let outcome = body(self);
        let wall_seconds = start.elapsed().as_secs_f64();
        let (status, reason) = match outcome {
            Ok(()) => {
                let ok = self.assertions[before..].iter().all(|a| a.passed);
                (if ok { StageStatus::Pass } else { StageStatus::Fail }, None)
            }
            Err(Error::Config(m)) => return Err(Error::Config(m)),
            Err(e) => {
                let msg = e.to_string();
                self.aborted.get_or_insert(e);
                (StageStatus::Aborted, Some(msg))
            }
        };
        self.stages.push(StageRecord { name: name.into(), wall_seconds, status, reason });
        Ok(())
    }

    pub fn skip(&mut self, name: &str, reason: &str) {
        self.stages.push(StageRecord {
            name: name.into(),
            wall_seconds: 0.0,
            status: StageStatus::Skipped,
            reason: Some(reason.into()),
        });
    }

    pub fn check(&mut self, criterion: Option<u8>, name: &str, measured: f64, passed: bool, threshold: impl Into<String>) {
        self.assertions.push(Assertion {
            criterion,
            name: name.into(),
            passed: passed && !measured.is_nan(),
            measured,
            threshold: threshold.into(),
        });
    }

    pub fn exit_code(&self) -> i32 {
        if self.aborted.is_some() {
            4
        } else if self.assertions.iter().all(|a| a.passed) {
            0
        } else {
            2
        }
    }

    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            subcommand: self.subcommand.clone(),
            experiment: self.config.experiment.clone(),
            config_hash: config_hash(&self.config),
            seed: self.config.seed,
            workers: self.workers,
            versions: versions(),
            stages: self.stages.clone(),
            assertions: self.assertions.clone(),
            exit_code: self.exit_code(),
        }
    }

    /// Writes `manifest.json`, `records.json`, `records.csv` and the SVGs.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let manifest = self.manifest();
        std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
        let records = serde_json::json!({ "scans": self.reports, "documents": self.documents });
        std::fs::write(dir.join("records.json"), serde_json::to_string_pretty(&records)?)?;
        std::fs::write(dir.join("records.csv"), to_csv(&self.reports))?;
        for (name, svg) in &self.svgs {
            std::fs::write(dir.join(format!("{name}.svg")), svg)?;
        }
        Ok(dir.join("manifest.json"))
    }
}
