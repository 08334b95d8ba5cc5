//! End-to-end checks of the binary: exit codes, printed matrices, and
//! byte-for-byte reproducibility of every output file.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_polarlat")
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polarlat-cli-{name}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn construct_prints_smallest_generator() {
    let dir = tmpdir("construct-d2");
    let cfg = write_config(&dir, r#"{"lattice": {"n": 2, "r": 1, "sets": [[2]]}}"#);
    let out = run(&["construct", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("[2, 0]"), "missing first row: {text}");
    assert!(text.contains("[1, 1]"), "missing second row: {text}");
    assert!(text.contains("det check: |det G| = 2 (ok)"), "{text}");
    assert!(dir.join("run.spec.json").exists());
}

#[test]
fn construct_rejects_broken_nesting() {
    let dir = tmpdir("construct-nest");
    let cfg = write_config(&dir, r#"{"lattice": {"n": 4, "r": 2, "sets": [[2, 4], [3, 4]]}}"#);
    let out = run(&["construct", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains("1") && err.contains("2"), "diagnostic should name the levels: {err}");
}

#[test]
fn unknown_config_field_is_a_config_error() {
    let dir = tmpdir("badfield");
    let cfg = write_config(
        &dir,
        r#"{"lattice": {"n": 2, "r": 1, "sets": [[2]], "surprise": true}}"#,
    );
    let out = run(&["construct", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

fn sim_config(taps: bool) -> String {
    let lattice = if taps {
        r#"{"n": 16, "r": 2, "kind": "pac", "taps": [2, 3, 4],
            "sets": [[8, 12, 14, 15, 16], [4, 6, 7, 8, 12, 14, 15, 16]]}"#
    } else {
        r#"{"n": 16, "r": 2,
            "sets": [[8, 12, 14, 15, 16], [4, 6, 7, 8, 12, 14, 15, 16]]}"#
    };
    let decoder = if taps {
        r#"{"kind": "pac-scl", "list_size": 2}"#
    } else {
        r#"{"kind": "sc"}"#
    };
    format!(
        r#"{{
  "lattice": {lattice},
  "channel": {{"sigmas": [0.5, 0.4]}},
  "decoder": {decoder},
  "sim": {{"trials": 4096, "seed": 11, "stop_at_errors": 0}},
  "output": {{"stem": "sweep"}}
}}"#
    )
}

#[test]
fn simulate_is_deterministic_across_worker_counts() {
    let mut outputs = Vec::new();
    for &workers in &[1usize, 4, 8] {
        let dir = tmpdir(&format!("sim-w{workers}"));
        let cfg = write_config(&dir, &sim_config(false));
        let out = run(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
            "--workers",
            &workers.to_string(),
        ]);
        assert!(out.status.success(), "workers={workers}: {}", stderr(&out));
        let csv = std::fs::read(dir.join("sweep.csv")).unwrap();
        let json = std::fs::read(dir.join("sweep.json")).unwrap();
        outputs.push((workers, csv, json));
    }
    let (_, csv0, json0) = &outputs[0];
    for (workers, csv, json) in &outputs[1..] {
        assert_eq!(csv, csv0, "CSV differs at workers={workers}");
        assert_eq!(json, json0, "JSON differs at workers={workers}");
    }
    let text = String::from_utf8(csv0.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "spec_hash,kind,N,r,decoder,list_size,sigma,nvnr_db,trials,errors,p_e,ci_low,ci_high,level1_errors,level2_errors,laststage_errors,seed"
    );
    assert_eq!(lines.count(), 2, "one row per grid point");
}

#[test]
fn simulate_rerun_is_byte_identical() {
    let dir_a = tmpdir("sim-rerun-a");
    let dir_b = tmpdir("sim-rerun-b");
    for dir in [&dir_a, &dir_b] {
        let cfg = write_config(dir, &sim_config(true));
        let out = run(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
            "--workers",
            "2",
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let a = std::fs::read(dir_a.join("sweep.csv")).unwrap();
    let b = std::fs::read(dir_b.join("sweep.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("pac,16,2,pac-scl,2"), "{text}");
}

#[test]
fn analyze_refuses_spec_hash_mismatch() {
    let dir = tmpdir("analyze-hash");
    // first construct a spec file
    let cfg = write_config(
        &dir,
        r#"{"lattice": {"n": 4, "r": 2, "sets": [[4], [2, 3, 4]]}, "output": {"stem": "lat"}}"#,
    );
    let out = run(&["construct", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let spec_path = dir.join("lat.spec.json");
    // then analyze it with a deliberately wrong expected hash
    let bad = format!(
        r#"{{"lattice": {{"n": 4, "r": 2, "spec_file": "{}", "spec_hash": "{}"}}}}"#,
        spec_path.to_str().unwrap(),
        "0".repeat(64)
    );
    let cfg2 = dir.join("analyze.json");
    std::fs::write(&cfg2, bad).unwrap();
    let out = run(&["analyze", "--config", cfg2.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("hash mismatch"), "{}", stderr(&out));
}

#[test]
fn analyze_reports_distance_from_spec_file() {
    let dir = tmpdir("analyze-dist");
    let cfg = write_config(
        &dir,
        r#"{"lattice": {"n": 4, "r": 2, "sets": [[4], [2, 3, 4]]}, "output": {"stem": "lat"}}"#,
    );
    let out = run(&["construct", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let spec_path = dir.join("lat.spec.json");
    let cfg2 = dir.join("analyze.json");
    std::fs::write(
        &cfg2,
        format!(
            r#"{{"lattice": {{"n": 4, "r": 2, "spec_file": "{}"}},
                 "channel": {{"sigmas": [0.5]}}}}"#,
            spec_path.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = run(&["analyze", "--config", cfg2.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("d2_min: 4"), "{text}");
    assert!(text.contains("nvnr 16"), "{text}");
    assert!(dir.join("run.analysis.json").exists());
}

#[test]
fn profile_cache_is_reproducible() {
    let dir = tmpdir("profile");
    let cfg = write_config(
        &dir,
        r#"{
  "lattice": {"n": 8, "r": 2,
              "derive": {"sigma": 0.45, "trials": 2000, "seed": 13, "targets": [2, 5]}},
  "output": {"stem": "prof"}
}"#,
    );
    let args = ["profile", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()];
    let out = run(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    let first = std::fs::read(dir.join("prof.relcache.txt")).unwrap();
    let first_spec = std::fs::read(dir.join("prof.spec.json")).unwrap();
    let out = run(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(first, std::fs::read(dir.join("prof.relcache.txt")).unwrap());
    assert_eq!(first_spec, std::fs::read(dir.join("prof.spec.json")).unwrap());
    let text = stdout(&out);
    assert!(text.contains("I_1:") && text.contains("I_2:"), "{text}");
}

#[test]
fn capacity_prints_each_level() {
    let dir = tmpdir("capacity");
    let cfg = write_config(
        &dir,
        r#"{"lattice": {"n": 4, "r": 2, "sets": [[4], [2, 3, 4]]},
            "channel": {"sigmas": [0.3]}}"#,
    );
    let out = run(&["capacity", "--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("C(Z/2Z").count(), 2, "{text}");
    assert!(text.contains("telescoping check"), "{text}");
}
