//! Experiment runner behind the `curvlens` binary.

mod commands;
mod config;
mod manifest;
mod merge;

pub use commands::{hyp_resolvent, hyp_stein_tomas, osc_check, sphere_projector, sphere_resolvent, sphere_scaling};
pub use config::{
    AllZetaParams, DyadicParams, ExperimentConfig, ExponentPair, HypResolventParams, HypSteinTomasParams, OscCase,
    OscCheckParams, PeriodicityParams, PlancherelParams, PowerConfig, ReconstructionParams, SphereProjectorParams,
    SphereResolventParams, SphereScalingParams, TailParams, WaveIdentityParams,
};
pub use manifest::{config_hash, Assertion, Run, RunManifest, StageRecord, StageStatus};
pub use merge::{consolidate, load_manifest, ConsolidatedReport, CriterionSummary};

use crate::error::{Error, Result};

/// Acceptance criteria: number, title, owning subcommand.
pub const CRITERIA: [(u8, &str, &str); 14] = [
    (1, "projector algebra", "sphere-projector"),
    (2, "sup growth", "sphere-projector"),
    (3, "projector norm growth", "sphere-projector"),
    (4, "projector asymptotics", "sphere-projector"),
    (5, "wave identity", "sphere-resolvent"),
    (6, "wave periodicity", "sphere-resolvent"),
    (7, "region uniformity and sharpness", "sphere-resolvent"),
    (8, "curvature scaling", "sphere-scaling"),
    (9, "H3 Plancherel consistency", "hyp-resolvent"),
    (10, "Stein-Tomas slope", "hyp-stein-tomas"),
    (11, "dyadic decay", "hyp-resolvent"),
    (12, "dyadic reconstruction", "hyp-resolvent"),
    (13, "oscillatory decay", "osc-check"),
    (14, "H3 all-zeta boundedness", "hyp-resolvent"),
];

pub const SUBCOMMANDS: [&str; 6] =
    ["sphere-projector", "sphere-resolvent", "sphere-scaling", "hyp-stein-tomas", "hyp-resolvent", "osc-check"];

/// Runs one experiment subcommand to completion.
pub fn run_subcommand(name: &str, config: ExperimentConfig, workers: usize) -> Result<Run> {
    let mut run = Run::new(name, config, workers);
    match name {
        "sphere-projector" => sphere_projector(&mut run)?,
        "sphere-resolvent" => sphere_resolvent(&mut run)?,
        "sphere-scaling" => sphere_scaling(&mut run)?,
        "hyp-stein-tomas" => hyp_stein_tomas(&mut run)?,
        "hyp-resolvent" => hyp_resolvent(&mut run)?,
        "osc-check" => osc_check(&mut run)?,
        other => return Err(Error::Config(format!("unknown subcommand {other}"))),
    }
    Ok(run)
}

/// Process exit code for a library error: 3 for configuration and I/O
/// problems, 4 for numerical aborts.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Io(_) | Error::Json(_) | Error::UnsupportedDimension(_) => 3,
        _ => 4,
    }
}
