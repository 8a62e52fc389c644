use std::path::Path;
use std::process::{Command, Output};

fn ocba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocba")).args(args).output().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn list_prints_builtins() {
    let out = ocba(&["list"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "instance1\ninstance2\n");
}

#[test]
fn theory_prints_report() {
    let out = ocba(&["theory", "--instance", "instance1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["alpha_star", "alpha_star2", "eta_star", "eta_star2", "h_star", "rho_star"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let close = |x: &serde_json::Value, want: f64| (x.as_f64().unwrap() - want).abs() < 1e-9 * want.max(1.0);
    assert!(close(&v["alpha_star"][9], 0.465412731344777));
    assert!(close(&v["alpha_star2"][8], 0.437320256927725));
    assert!(close(&v["eta_star"], 0.00241609941526508));
    assert!(close(&v["eta_star2"], 0.00256897429990874));
    assert!(close(&v["h_star"], 227.134351459726));
    assert!(close(&v["rho_star"], 1.14122265574435));
}

#[test]
fn unknown_instance_is_a_config_error() {
    let out = ocba(&["theory", "--instance", "instance3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: config:"), "{}", stderr(&out));
}

#[test]
fn budget_below_initial_samples_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = ocba(&[
        "run", "--instance", "instance1", "--policy", "ocba1", "--budget", "50", "--n0", "5",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: config:"));
    assert!(!out_dir.exists());
}

#[test]
fn usage_errors_exit_one() {
    for args in [&["run", "--bogus"][..], &["frobnicate"], &["run", "--policy", "thompson"], &[]] {
        let out = ocba(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr(&out).starts_with("error: usage:"), "{args:?}: {}", stderr(&out));
    }
    assert!(ocba(&["--help"]).status.success());
    let out = ocba(&["run", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ocba(&["run", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = ocba(&[
        "run", "--instance", "instance2", "--policy", "ocba2", "--budget", "100", "--reps", "2",
        "--out", blocker.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: io:"), "{}", stderr(&out));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.json");
    std::fs::write(
        &config,
        r#"{"instance":"instance1","policies":[{"kind":"ocba1","delta":10}],"budget":100000,
            "replications":1000,"checkpoints":{"geometric":{"points":8}}}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("results");
    let out = ocba(&[
        "run", config.to_str().unwrap(), "--instance", "instance2", "--budget", "400", "--reps", "20",
        "--delta", "3", "--seed", "9", "--out", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = out_dir.join("instance2_ocba1_d3.csv");
    assert!(csv.exists());
    assert!(out_dir.join("instance2_theory.json").exists());
    assert_last_total(&csv, 400, 3);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 9);
    assert_eq!(manifest["config"]["replications"], 20);
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
}

fn assert_last_total(csv: &Path, budget: u64, delta: u64) {
    let text = std::fs::read_to_string(csv).unwrap();
    let t: u64 = text.lines().last().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!(t >= budget && t < budget + delta, "{t}");
}
