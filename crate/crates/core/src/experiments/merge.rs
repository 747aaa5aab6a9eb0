//! Consolidation of several run directories into one report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::manifest::{Assertion, RunManifest};
use super::CRITERIA;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionSummary {
    pub id: u8,
    pub title: String,
    pub subcommand: String,
    /// `pass`, `fail` or `missing`.
    pub status: String,
    pub assertions: Vec<Assertion>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsolidatedReport {
    pub runs: Vec<RunManifest>,
    pub criteria: Vec<CriterionSummary>,
    pub all_present_pass: bool,
}

pub fn load_manifest(dir: &Path) -> Result<RunManifest> {
    let path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Config(format!("missing manifest {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("incompatible manifest {}: {e}", path.display())))
}

/// Merges manifests; runs of the same subcommand must share a config hash.
pub fn consolidate(dirs: &[PathBuf]) -> Result<ConsolidatedReport> {
    if dirs.is_empty() {
        return Err(Error::Config("report needs at least one run directory".into()));
    }
    let runs: Vec<RunManifest> = dirs.iter().map(|d| load_manifest(d)).collect::<Result<_>>()?;
    let mut hashes: BTreeMap<&str, &str> = BTreeMap::new();
    for m in &runs {
        if let Some(prev) = hashes.insert(&m.subcommand, &m.config_hash) {
            if prev != m.config_hash {
                return Err(Error::Config(format!(
                    "conflicting config hashes for {}: {prev} vs {}",
                    m.subcommand, m.config_hash
                )));
            }
        }
    }
    let criteria: Vec<CriterionSummary> = CRITERIA
        .iter()
        .map(|&(id, title, sub)| {
            let assertions: Vec<Assertion> = runs
                .iter()
                .flat_map(|m| m.assertions.iter())
                .filter(|a| a.criterion == Some(id))
                .cloned()
                .collect();
            let status = if assertions.is_empty() {
                "missing"
            } else if assertions.iter().all(|a| a.passed) {
                "pass"
            } else {
                "fail"
            };
            CriterionSummary { id, title: title.into(), subcommand: sub.into(), status: status.into(), assertions }
        })
        .collect();
    let all_present_pass = criteria.iter().all(|c| c.status != "fail");
    Ok(ConsolidatedReport { runs, criteria, all_present_pass })
}

impl ConsolidatedReport {
    pub fn to_markdown(&self) -> String {
        let mut s = String::from("# curvlens consolidated report\n\n| # | criterion | subcommand | status | measured |\n|---|---|---|---|---|\n");
        for c in &self.criteria {
            let measured: Vec<String> = c.assertions.iter().map(|a| format!("{} = {:.4e} ({})", a.name, a.measured, a.threshold)).collect();
            let _ = writeln!(s, "| {} | {} | {} | {} | {} |", c.id, c.title, c.subcommand, c.status, measured.join("; "));
        }
        s.push_str("\n## Runs\n\n");
        for m in &self.runs {
            let _ = writeln!(s, "- {} (config {}, seed {}, exit {})", m.subcommand, &m.config_hash[..12.min(m.config_hash.len())], m.seed, m.exit_code);
        }
        s
    }
}
