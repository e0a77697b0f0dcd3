use std::fs;
use std::path::PathBuf;
use std::process::Command;

use lie_momentum_bench::{preset, presets, ExperimentConfig, Preset};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lie-momentum-bench"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lie-momentum-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn presets_round_trip_through_json() {
    for p in presets() {
        let text = serde_json::to_string(&p).unwrap();
        let back: Preset = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}

#[test]
fn preset_parameters_are_pinned() {
    let row = |n: &str| {
        let p = preset(n).unwrap();
        (p.epochs, p.mu, p.eta, p.init.to_string(), p.objective.name())
    };
    assert_eq!(row("frobenius1"), (100, 0.7, 0.1, "cay:1,1,1".into(), "frobenius"));
    assert_eq!(row("frobenius2"), (250, 0.7, 0.01, "cay:1,1,1".into(), "frobenius"));
    assert_eq!(row("rosenbrock91"), (100, 0.25, 1e-4, "cay:0.1,0.1,0.1".into(), "restricted-rosenbrock"));
    assert_eq!(row("rosenbrock92"), (100, 0.7, 1e-4, "cay:0.1,0.1,0.1".into(), "restricted-rosenbrock"));
    assert_eq!(row("rosenbrock3exp"), (1000, 0.99, 1e-4, "exp:0,0,1".into(), "retracted-rosenbrock-exp"));
    assert_eq!(row("rosenbrock3cay"), (1000, 0.99, 1e-4, "cay:0,0,1".into(), "retracted-rosenbrock-cay"));
}

#[test]
fn run_writes_three_artifacts() {
    let dir = scratch("run");
    let out = bin()
        .args(["run", "--objective", "frobenius", "--solver", "cay", "--method", "nag"])
        .args(["--epochs", "20", "--mu", "0.7", "--eta", "0.1", "--init", "cay:1,1,1"])
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stem = dir.join("run-frobenius-cay-nag");
    let csv = fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("epoch,gd,phb,nag,ref"));
    assert_eq!(csv.lines().count(), 22);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    for key in ["config", "final_residues", "wall_ms"] {
        assert!(meta.get(key).is_some(), "{key}");
    }
    let config: ExperimentConfig = serde_json::from_value(meta["config"].clone()).unwrap();
    assert_eq!(config.epochs, 20);
    assert!(fs::read_to_string(stem.with_extension("svg")).unwrap().contains("<polyline"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_with_flag_override() {
    let dir = scratch("config");
    fs::create_dir_all(&dir).unwrap();
    let mut cfg = preset("frobenius1").unwrap().config(lie_momentum_bench::SolverName::Exp, lie_momentum_bench::Method::Phb);
    cfg.epochs = 5;
    let path = dir.join("cfg.json");
    fs::write(&path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&path)
        .args(["--method", "gd", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("run-frobenius-exp-gd.csv").exists());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validation_errors_exit_with_two() {
    let cases: [&[&str]; 4] = [
        &["run", "--objective", "frobenius", "--solver", "exp", "--method", "gd", "--epochs", "0", "--eta", "0.1", "--init", "cay:1,1,1"],
        &["run", "--objective", "frobenius", "--solver", "skw", "--method", "gd", "--epochs", "3", "--eta", "0.1", "--init", "skw:2,0,0"],
        &["run", "--objective", "frobenius", "--solver", "exp", "--method", "newton", "--epochs", "3", "--eta", "0.1", "--init", "cay:1,1,1"],
        &["preset", "frobenius9"],
    ];
    for args in cases {
        let out = bin().args(args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn numerical_failure_exits_with_three() {
    let dir = scratch("numerical");
    let out = bin()
        .args(["run", "--objective", "frobenius", "--solver", "skw", "--method", "phb"])
        .args(["--epochs", "50", "--mu", "0.9", "--eta", "1", "--init", "cay:1,1,1"])
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step"));
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn preset_output_is_byte_identical() {
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    for dir in [&a, &b] {
        let out = bin().args(["preset", "rosenbrock91", "--out-dir"]).arg(dir).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for solver in ["exp", "cay", "skw"] {
        let name = format!("rosenbrock91-{solver}.csv");
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name}");
    }
    fs::remove_dir_all(&a).unwrap();
    fs::remove_dir_all(&b).unwrap();
}
