use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use qha::io::write_phase_csv;
use qha::{PhaseFunction, PhaseGrid};
use serde_json::Value;

fn qha(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qha"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gaussian_weyl_prints_table_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = qha(&["gaussian-weyl", "--n", "128", "--eps2", "0.3,0.5,1.0", "--frozen-clock"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("min_eig") && stdout.contains("PASS"));
    let r = report(&dir.path().join("gaussian-weyl.json"));
    assert_eq!(r["name"], "gaussian_weyl");
    assert_eq!(r["pass"], true);
    assert!(r.get("timestamp").is_none());
    for key in ["params", "ratios", "max_ratio", "tolerance"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert!(dir.path().join("gaussian-weyl_00_gaussian_weyl.csv").exists());
}

#[test]
fn timestamp_only_without_frozen_clock() {
    let dir = tempfile::tempdir().unwrap();
    let o = qha(&["m-at-zero", "--n", "64", "--length", "8"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(report(&dir.path().join("m-at-zero.json"))["timestamp"].is_string());
}

#[test]
fn bad_configs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"grid": {"n": 64, "length": 8, "d": 2}, "seed": 1}"#).unwrap();
    assert_eq!(qha(&["m-at-zero", "--config", cfg.to_str().unwrap()], dir.path()).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"grid": {"n": 64, "length": 8}}"#).unwrap();
    assert_eq!(qha(&["m-at-zero", "--config", cfg.to_str().unwrap()], dir.path()).status.code(), Some(2));
    std::fs::write(&cfg, "not json").unwrap();
    assert_eq!(qha(&["m-at-zero", "--config", cfg.to_str().unwrap()], dir.path()).status.code(), Some(2));
    assert_eq!(qha(&["m-at-zero", "--symbol", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(qha(&["m-at-zero", "--symbol", "bochner_riesz"], dir.path()).status.code(), Some(2));
    assert_eq!(qha(&["m-at-zero", "--n", "63"], dir.path()).status.code(), Some(2));
    assert_eq!(qha(&["modulation-probe", "--n", "64"], dir.path()).status.code(), Some(2));
    assert_eq!(qha(&["no-such-suite"], dir.path()).status.code(), Some(2));
}

#[test]
fn wrap_guard_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = qha(&["equivalence", "--n", "32", "--length", "4", "--symbol", "bochner_riesz", "--delta", "1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wrap guard"));
}

#[test]
fn csv_symbol_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let pg = PhaseGrid::with_length(64, 8.0).unwrap();
    let table = PhaseFunction::from_fn(&pg, |x, xi| Complex64::new(0.25 + (-(x * x + xi * xi)).exp(), 0.0));
    write_phase_csv(dir.path().join("m.csv"), &table).unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"grid": {"n": 64, "length": 8, "d": 1}, "symbol": {"family": "csv", "path": "m.csv"}, "seed": 3}"#,
    )
    .unwrap();
    let o = qha(&["m-at-zero", "--config", cfg.to_str().unwrap(), "--frozen-clock"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&dir.path().join("m-at-zero.json"));
    let v = r["series"]["value_re"][0].as_f64().unwrap();
    assert!((v - 1.25).abs() < 1e-4);
}

#[test]
fn assertion_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = qha(&["parity-limit", "--n", "32", "--length", "5"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("failing report"));
    assert!(dir.path().join("parity-limit.json").exists());
}

#[test]
fn refine_ladder_and_probe() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qha(&["refine", "--frozen-clock"], dir.path()).status.code(), Some(0));
    let r = report(&dir.path().join("refine.json"));
    let errs: Vec<f64> = r["series"]["gaussian_ambiguity_error"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(errs.len(), 4);
    assert!(errs.windows(2).all(|w| w[1] < w[0]));
    let o = qha(&["modulation-probe", "--n", "16", "--length", "4", "--q", "1,2,inf"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn report_only_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = qha(&["trace-probe", "--n", "64", "--length", "8", "--seed", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("REPORT"));
}
