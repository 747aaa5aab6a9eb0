//! End-to-end checks of the `curvlens` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn curvlens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvlens")).args(args).env_remove("CURVLENS_OUT").output().unwrap()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn unknown_key_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"sphere_scaling": {"kapas": [2.0]}}"#);
    let out = curvlens(&["sphere-scaling", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("kapas"));
}

#[test]
fn inadmissible_pair_is_rejected_before_running() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"sphere_projector": {"exponents": {"r": 2.0, "s": 2.0}}}"#);
    let out_dir = tmp.path().join("o");
    let out = curvlens(&["sphere-projector", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(!out_dir.join("manifest.json").exists());
}

#[test]
fn low_degree_run_skips_with_reasons() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"sphere_projector": {"k_max": 4, "algebra_k_max": 4, "trace_k_max": 4}}"#);
    let out_dir = tmp.path().join("o");
    let out = curvlens(&["sphere-projector", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("k below asymptotic threshold"));
    let manifest = read_json(&out_dir.join("manifest.json"));
    let skipped: Vec<&str> = manifest["stages"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["status"] == "skipped")
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert!(skipped.contains(&"asymptotics"));
    assert!(skipped.contains(&"norm_growth"));
}

#[test]
fn scaling_run_is_deterministic_and_merges() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"seed": 11}"#);
    let dirs: Vec<_> = (0..2).map(|i| tmp.path().join(format!("run{i}"))).collect();
    for d in &dirs {
        let out = curvlens(&["sphere-scaling", "--config", &cfg, "--out", d.to_str().unwrap(), "--workers", "2"]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        for f in ["manifest.json", "records.json", "records.csv"] {
            assert!(d.join(f).exists(), "{f}");
        }
    }
    for f in ["records.json", "records.csv"] {
        assert_eq!(std::fs::read(dirs[0].join(f)).unwrap(), std::fs::read(dirs[1].join(f)).unwrap(), "{f}");
    }
    // Manifests differ only in the recorded wall times.
    let untimed = |d: &Path| {
        let mut m = read_json(&d.join("manifest.json"));
        for s in m["stages"].as_array_mut().unwrap() {
            s.as_object_mut().unwrap().remove("wall_seconds");
        }
        m
    };
    assert_eq!(untimed(&dirs[0]), untimed(&dirs[1]));
    let manifest = read_json(&dirs[0].join("manifest.json"));
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["exit_code"], 0);
    assert!(manifest["assertions"].as_array().unwrap().iter().any(|x| x["criterion"] == 8));

    let rep_dir = tmp.path().join("report");
    let out = curvlens(&["report", dirs[0].to_str().unwrap(), "--out", rep_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = read_json(&rep_dir.join("report.json"));
    assert!(rep["all_present_pass"].as_bool().unwrap());
    assert!(std::fs::read_to_string(rep_dir.join("report.md")).unwrap().contains("curvature scaling"));
}

#[test]
fn report_rejects_conflicting_and_empty_inputs() {
    let tmp = TempDir::new().unwrap();
    let mut dirs = Vec::new();
    for (i, tol) in ["1e-10", "1e-9"].iter().enumerate() {
        let cfg = write_config(tmp.path(), &format!("c{i}.json"), &format!(r#"{{"sphere_scaling": {{"tol": {tol}}}}}"#));
        let d = tmp.path().join(format!("run{i}"));
        assert_eq!(code(&curvlens(&["sphere-scaling", "--config", &cfg, "--out", d.to_str().unwrap()])), 0);
        dirs.push(d);
    }
    let out_dir = tmp.path().join("rep");
    let out = curvlens(&["report", dirs[0].to_str().unwrap(), dirs[1].to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(!out_dir.join("report.json").exists());

    assert_eq!(code(&curvlens(&["report", "--out", out_dir.to_str().unwrap()])), 3);
    let missing = tmp.path().join("nothing");
    assert_eq!(code(&curvlens(&["report", missing.to_str().unwrap()])), 3);
}
