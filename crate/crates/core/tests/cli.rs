//! The `aqc` binary end to end.

use std::path::{Path, PathBuf};
use std::process::Command;

fn aqc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_aqc"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn list_experiments_names_every_kind() {
    let out = aqc().arg("list-experiments").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for kind in [
        "tunnel",
        "anneal-matrix",
        "anneal-paulispin",
        "nn-toy",
        "nn-binary",
        "spectrum",
        "mass-scan",
        "classical-pool",
        "accuracy-curves",
        "enumerate",
    ] {
        assert!(text.lines().any(|l| l.starts_with(kind)), "{kind} missing");
    }
}

#[test]
fn validate_fills_and_reports_missing_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"kind": "nn-binary"}"#);
    let out = aqc().arg("validate").arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let d: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(d["effective"]["seed"], 25);
    assert!(d["defaulted"].as_array().unwrap().contains(&"seed".into()));
}

#[test]
fn validate_rejects_oversized_dense_register() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"kind": "anneal-matrix", "num_qubits": 30}"#);
    let out = aqc().arg("validate").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    let d: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(d["errors"][0].as_str().unwrap().contains("exceeds the cap"));
    // The run path refuses it too, before doing any work.
    let run = aqc().arg("run").arg(&cfg).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert!(!run.status.success());
    assert!(String::from_utf8_lossy(&run.stderr).contains("cap"));
}

#[test]
fn band_flag_is_echoed_in_effective_config() {
    for flag in ["min", "max"] {
        let out = aqc()
            .args(["validate"])
            .arg(configs().join("nn_toy_band.json"))
            .args(["--band-prob", flag])
            .output()
            .unwrap();
        let d: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(d["effective"]["band_prob"], flag);
    }
}

#[test]
fn schema_violations_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"kind": "nn-toy", "stepz": 3}"#);
    let out = aqc().arg("validate").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    let d: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(d["errors"][0].as_str().unwrap().contains("stepz"));
}

#[test]
fn reruns_write_identical_data_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("nn_toy_circle.json");
    for o in ["a", "b"] {
        let st = aqc().arg("run").arg(&cfg).arg("--out").arg(dir.path().join(o)).output().unwrap();
        assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    }
    let mut names: Vec<_> = std::fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 4);
    for n in names {
        let a = std::fs::read(dir.path().join("a").join(&n)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(&n)).unwrap();
        if n == "summary.json" {
            continue;
        }
        assert_eq!(a, b, "{n:?} differs");
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("# config=") || text.contains("\"config_hash\""), "{n:?} lacks hash");
    }
}

#[test]
fn seed_override_changes_the_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("nn_toy_circle.json");
    for (o, seed) in [("a", "1"), ("b", "2")] {
        let out = aqc()
            .arg("run")
            .arg(&cfg)
            .args(["--seed", seed, "--out"])
            .arg(dir.path().join(o))
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a/dataset.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/dataset.csv")).unwrap();
    assert_ne!(a, b);
}
