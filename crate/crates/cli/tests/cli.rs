use std::path::Path;
use std::process::Command;

use ordlab::{ExperimentRecord, Outcome, replay, run};
use serde_json::Value;

fn ordlab(args: &[&str]) -> Outcome {
    run(std::iter::once("ordlab").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn oracle_addx_example() {
    let out = ordlab(&["oracle", "addx", "--n", "2", "--k", "1", "--alpha", "0", "--j", "1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!((json(&out)["value"].as_f64().unwrap() - 0.125).abs() < 1e-12);
}

#[test]
fn classify_triangle_free_example() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "K3.el", "3\n0 1\n1 2\n0 2\n");
    let out = ordlab(&["classify", "--forbidden", &k3]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["label"], "UNIFORM");
    assert_eq!(v["certificate"], "t:free");
}

#[test]
fn repro_spectral_example() {
    let out = ordlab(&["repro", "spectral-P3", "--seed", "7", "--samples", "1000000"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let middle = v["metrics"]["middle_prob"].as_f64().unwrap();
    assert!((middle - 0.39183).abs() < 0.003, "{middle}");
}

#[test]
fn exit_codes() {
    assert_eq!(ordlab(&["--help"]).code, 0);
    assert_eq!(ordlab(&["frobnicate"]).code, 2);
    assert_eq!(ordlab(&["oracle", "addx", "--n", "2"]).code, 2);
    assert_eq!(ordlab(&["repro", "mod1-P3", "--significance", "2"]).code, 2);
    assert_eq!(ordlab(&["sample", "--graph", "no-such-graph"]).code, 2);
    assert_eq!(ordlab(&["classify"]).code, 2);
    // The block order is not uniform on P3, so the check fails.
    let out = ordlab(&["verify", "--graph", "P3", "--sampler", "block", "--check", "uniformity"]);
    assert_eq!(out.code, 1);
    let out = ordlab(&["verify", "--graph", "P3", "--check", "uniformity"]);
    assert_eq!(out.code, 0);
}

#[test]
fn binary_exit_code_and_stdout() {
    let out = Command::new(env!("CARGO_BIN_EXE_ordlab"))
        .args(["oracle", "edgedist", "--n", "3", "--alpha", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() + 0.25).abs() < 1e-12);

    let out = Command::new(env!("CARGO_BIN_EXE_ordlab")).arg("--bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

/// Run with `--out`, then replay the record and demand identical output.
fn record_roundtrip(args: &[&str]) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("record.json");
    let mut argv: Vec<&str> = args.to_vec();
    argv.extend(["--out", path.to_str().unwrap()]);
    let out = ordlab(&argv);
    assert_ne!(out.code, 2, "{}", out.stderr);
    let record = ExperimentRecord::load(&path).unwrap();
    assert_eq!(record.command, args);
    assert_eq!(record.output, out.stdout);
    assert_eq!(record.pass, out.code == 0);
    let again = replay(&record).unwrap();
    assert!(again.identical, "{args:?}");
    assert_eq!(again.output, out.stdout);
}

#[test]
fn replay_sample() {
    record_roundtrip(&["sample", "--graph", "C5", "--sampler", "spectral", "--samples", "20", "--seed", "4"]);
}

#[test]
fn replay_verify() {
    record_roundtrip(&["verify", "--graph", "bull", "--sampler", "spectral", "--samples", "20000", "--seed", "5"]);
}

#[test]
fn replay_classify() {
    record_roundtrip(&["classify", "--forbidden", "C3,C4"]);
}

#[test]
fn replay_oracle() {
    record_roundtrip(&["oracle", "addx", "--n", "3", "--k", "2", "--alpha", "0.3", "--j", "2"]);
}

#[test]
fn replay_blowup_stats() {
    record_roundtrip(&["blowup-stats", "--template", "fe:0-1", "--samples", "100", "--seed", "9"]);
}

#[test]
fn replay_repro() {
    record_roundtrip(&["repro", "block-K2K1", "--seed", "11", "--samples", "50000"]);
}

#[test]
fn record_captures_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = ordlab(&["--seed", "3", "oracle", "bernoulli", "--n", "2", "--x", "0.5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["config"]["common"]["seed"], 3);
    assert_eq!(v["config"]["command"]["subcommand"], "oracle");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["wall_clock_ms"].is_u64());
    // B_2(1/2) = -1/12
    assert!((v["reports"]["value"].as_f64().unwrap() + 1.0 / 12.0).abs() < 1e-12);
}

#[test]
fn tampered_record_is_not_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    ordlab(&["sample", "--graph", "P4", "--samples", "5", "--out", path.to_str().unwrap()]);
    let mut record = ExperimentRecord::load(&path).unwrap();
    record.output.push('x');
    assert!(!replay(&record).unwrap().identical);
}

#[test]
fn thread_count_does_not_change_output() {
    for args in [
        &["verify", "--graph", "C5", "--sampler", "spectral", "--samples", "30000", "--seed", "2"][..],
        &["blowup-stats", "--template", "ff", "--sampler", "block", "--samples", "60", "--seed", "2"][..],
        &["repro", "flower-inconsistency", "--seed", "2", "--samples", "20000"][..],
    ] {
        let mut one = args.to_vec();
        one.extend(["--threads", "1"]);
        let mut four = args.to_vec();
        four.extend(["--threads", "4"]);
        let a = ordlab(&one);
        let b = ordlab(&four);
        assert_eq!(a, b, "{args:?}");
        assert_eq!(a, ordlab(args));
    }
}

#[test]
fn seed_changes_samples() {
    let a = ordlab(&["sample", "--graph", "C6", "--samples", "8", "--seed", "1"]);
    let b = ordlab(&["sample", "--graph", "C6", "--samples", "8", "--seed", "2"]);
    assert_eq!(a.stdout.lines().count(), 8);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn csv_outputs() {
    let out = ordlab(&["sample", "--graph", "P3", "--samples", "3", "--format", "csv"]);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    for l in lines {
        let mut v: Vec<usize> = l.split(',').map(|x| x.parse().unwrap()).collect();
        v.sort();
        assert_eq!(v, [0, 1, 2]);
    }

    let out = ordlab(&["verify", "--graph", "P3", "--kmax", "2", "--samples", "1000", "--format", "csv"]);
    assert!(out.stdout.starts_with("tuple,order,count,probability\n"));
    // three pairs, two orders each
    assert_eq!(out.stdout.lines().count(), 1 + 6);

    let out = ordlab(&["oracle", "zeros", "--n", "2", "--format", "csv"]);
    assert!(out.stdout.starts_with("term,value\nvalue,2\n"), "{}", out.stdout);

    let out = ordlab(&["classify", "--forbidden", "P3", "--format", "csv"]);
    assert!(out.stdout.starts_with("label,certificate,detail\nNON_UNIFORM,"), "{}", out.stdout);

    let out = ordlab(&["blowup-stats", "--template", "ee", "--samples", "10", "--format", "csv"]);
    assert_eq!(out.stdout.lines().count(), 11);

    let out = ordlab(&["repro", "mod1-P3", "--samples", "20000", "--format", "csv"]);
    assert!(out.stdout.starts_with("kind,name,value\n"));
    assert!(out.stdout.contains("check,"));
}

#[test]
fn spec_file_seed_is_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"kind":"mod1_edge","alpha":0.25,"seed":999}"#;
    let path = write(dir.path(), "spec.json", spec);
    let a = ordlab(&["sample", "--graph", "P4", "--spec", &path, "--seed", "6", "--samples", "5"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let b = ordlab(&["sample", "--graph", "P4", "--sampler", "mod1_edge", "--alpha", "0.25", "--seed", "6", "--samples", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn graph_files_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let el = write(dir.path(), "c4.el", "# a square\n4\n0 1\n1 2\n2 3\n3 0\n");
    let g6 = write(dir.path(), "c4.g6", "Cl\n");
    let a = ordlab(&["sample", "--graph", &el, "--samples", "4", "--seed", "1"]);
    let b = ordlab(&["sample", "--graph", &g6, "--samples", "4", "--seed", "1"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a, b);

    let fam = write(dir.path(), "fam.el", "3\n0 1\n1 2\n0 2\n4\n0 1\n1 2\n2 3\n3 0\n");
    let v = json(&ordlab(&["classify", "--forbidden", &fam]));
    assert_eq!(v["certificate"], "t:joins");
}
