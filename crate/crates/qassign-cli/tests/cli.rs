//! End-to-end tests of the command-line driver.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qassign"))
}

fn run_ok(args: &[&str]) -> Value {
    let out = bin().args(args).output().expect("spawn qassign");
    assert!(
        out.status.success(),
        "command failed: {:?}\nstdout: {}\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn run_err(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn qassign");
    assert!(!out.status.success(), "expected failure for {args:?}");
    out
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().expect("tempdir")
}

#[test]
fn gen_noisemap_is_byte_deterministic() {
    let dir = tmp();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        run_ok(&[
            "gen-noisemap",
            "--rows",
            "4",
            "--cols",
            "4",
            "--seed",
            "11",
            "-o",
            out.to_str().unwrap(),
        ]);
    }
    assert_eq!(read(&a), read(&b));

    let c = dir.path().join("c.json");
    run_ok(&["gen-noisemap", "--rows", "4", "--cols", "4", "--seed", "12", "-o", c.to_str().unwrap()]);
    assert_ne!(read(&a), read(&c));
}

#[test]
fn planted_map_sweep_peaks_on_the_planted_path() {
    let dir = tmp();
    let map = dir.path().join("map.json");
    let gen = run_ok(&[
        "gen-noisemap",
        "--rows",
        "4",
        "--cols",
        "4",
        "--seed",
        "3",
        "--planted-len",
        "4",
        "-o",
        map.to_str().unwrap(),
    ]);
    let planted = gen["planted"].as_str().expect("planted path").to_string();

    let sweep_dir = dir.path().join("sweep");
    run_ok(&[
        "sweep",
        "--layout",
        map.to_str().unwrap(),
        "--circuit",
        "ghz",
        "--n",
        "4",
        "--noise",
        "local",
        "-o",
        sweep_dir.to_str().unwrap(),
    ]);
    let csv = read(&sweep_dir.join("sweep.csv"));
    let mut best: Option<(String, f64)> = None;
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let f_le: f64 = cols[2].parse().unwrap();
        if best.as_ref().map(|(_, b)| f_le > *b).unwrap_or(true) {
            best = Some((cols[0].to_string(), f_le));
        }
    }
    let (best_path, _) = best.unwrap();
    let reversed: String = planted
        .split('-')
        .rev()
        .collect::<Vec<_>>()
        .join("-");
    assert!(
        best_path == planted || best_path == reversed,
        "argmax F_LE {best_path} is not the planted path {planted}"
    );
}

#[test]
fn noiseless_sweep_is_all_ones() {
    let dir = tmp();
    let map = dir.path().join("map.json");
    run_ok(&[
        "gen-noisemap", "--rows", "3", "--cols", "3", "--seed", "5",
        "--p10-lo", "0", "--p10-hi", "0", "--p01-lo", "0", "--p01-hi", "0",
        "-o", map.to_str().unwrap(),
    ]);
    let out = dir.path().join("sweep");
    run_ok(&[
        "sweep",
        "--layout", map.to_str().unwrap(),
        "--circuit", "ghz",
        "--n", "3",
        "--noise", "none",
        "-o", out.to_str().unwrap(),
    ]);
    let csv = read(&out.join("sweep.csv"));
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        for idx in [1usize, 2] {
            let v: f64 = cols[idx].parse().unwrap();
            assert!((v - 1.0).abs() < 1e-12, "column {idx} not 1: {line}");
        }
        // f0 < 1 (weights nonzero) but extrapolation stays consistent
        assert_eq!(cols[9], "false");
    }
}

#[test]
fn high_readout_rows_are_flagged_not_dropped() {
    let dir = tmp();
    let map = dir.path().join("map.json");
    run_ok(&[
        "gen-noisemap", "--rows", "3", "--cols", "3", "--seed", "5",
        "--p01-lo", "0.3", "--p01-hi", "0.4",
        "-o", map.to_str().unwrap(),
    ]);
    let out = dir.path().join("sweep");
    let summary = run_ok(&[
        "sweep",
        "--layout", map.to_str().unwrap(),
        "--circuit", "ghz",
        "--n", "3",
        "--noise", "local",
        "-o", out.to_str().unwrap(),
    ]);
    let csv = read(&out.join("sweep.csv"));
    let rows = csv.lines().count() - 1;
    assert_eq!(rows, summary["assignments"].as_u64().unwrap() as usize);
    assert_eq!(summary["rejected"], summary["assignments"]);
    for line in csv.lines().skip(1) {
        assert!(line.ends_with(",true"), "row not flagged: {line}");
    }
}

#[test]
fn sweep_budget_guard_trips() {
    let dir = tmp();
    let map = dir.path().join("map.json");
    run_ok(&[
        "gen-noisemap", "--rows", "7", "--cols", "7", "--seed", "1",
        "-o", map.to_str().unwrap(),
    ]);
    // 13-vertex simple paths on a 7x7 grid outnumber the sweep budget; the
    // enumeration must abort early instead of simulating anything
    let out = dir.path().join("sweep");
    let err = run_err(&[
        "sweep",
        "--layout", map.to_str().unwrap(),
        "--circuit", "random",
        "--n", "13",
        "--depth", "2",
        "-o", out.to_str().unwrap(),
    ]);
    let msg: Value = serde_json::from_slice(&err.stderr).expect("stderr is JSON");
    assert_eq!(msg["kind"], "budget-exceeded");
}

#[test]
fn anneal_minimal_run_writes_two_row_trace() {
    let dir = tmp();
    let map = dir.path().join("map.json");
    run_ok(&[
        "gen-noisemap", "--rows", "3", "--cols", "3", "--seed", "5",
        "-o", map.to_str().unwrap(),
    ]);
    let out = dir.path().join("anneal");
    run_ok(&[
        "anneal",
        "--layout", map.to_str().unwrap(),
        "--circuit", "ghz",
        "--n", "3",
        "--steps", "1",
        "--trials", "1",
        "-o", out.to_str().unwrap(),
    ]);
    let trace = read(&out.join("trace_0000.csv"));
    assert_eq!(trace.lines().count(), 2, "header plus one step");
    assert_eq!(trace.lines().next().unwrap(), "step,temperature,cost,accepted,n_s");
    let trials = read(&out.join("trials.csv"));
    assert_eq!(trials.lines().count(), 2);
}

#[test]
fn online_and_offline_anneal_agree() {
    let dir = tmp();
    let map = dir.path().join("map.json");
    run_ok(&[
        "gen-noisemap", "--rows", "3", "--cols", "3", "--seed", "8",
        "--planted-len", "3",
        "-o", map.to_str().unwrap(),
    ]);
    let run_mode = |mode: &[&str], out: &PathBuf| {
        let mut args = vec![
            "anneal",
            "--layout", map.to_str().unwrap(),
            "--circuit", "ghz",
            "--n", "3",
            "--steps", "40",
            "--trials", "5",
            "--seed", "4",
            "-o", out.to_str().unwrap(),
        ];
        args.extend_from_slice(mode);
        run_ok(&args);
    };
    let off = dir.path().join("off");
    let on = dir.path().join("on");
    run_mode(&[], &off);
    run_mode(&["--online"], &on);
    // identical trial outcomes: same seeds drive both oracle modes
    let strip = |text: String| -> Vec<String> {
        text.lines().skip(1).map(|l| l.to_string()).collect()
    };
    assert_eq!(strip(read(&off.join("trials.csv"))), strip(read(&on.join("trials.csv"))));
}

#[test]
fn report_schema_and_ordering() {
    let dir = tmp();
    let map = dir.path().join("map.json");
    run_ok(&[
        "gen-noisemap", "--rows", "4", "--cols", "4", "--seed", "3",
        "--planted-len", "4",
        "-o", map.to_str().unwrap(),
    ]);
    let sweep_dir = dir.path().join("sweep");
    run_ok(&[
        "sweep",
        "--layout", map.to_str().unwrap(),
        "--circuit", "ghz",
        "--n", "4",
        "--noise", "local",
        "-o", sweep_dir.to_str().unwrap(),
    ]);
    let report_dir = dir.path().join("report");
    let report = run_ok(&[
        "report",
        "--sweep", sweep_dir.join("sweep.csv").to_str().unwrap(),
        "--layout", map.to_str().unwrap(),
        "-o", report_dir.to_str().unwrap(),
    ]);

    let tau = read(&report_dir.join("tau.csv"));
    assert_eq!(tau.lines().next().unwrap(), "metric,tau_b,bootstrap_std,rows");
    let cond = read(&report_dir.join("conditional.csv"));
    assert_eq!(cond.lines().next().unwrap(), "metric,k,p");
    let loc = read(&report_dir.join("locality.csv"));
    assert_eq!(loc.lines().next().unwrap(), "k,mean_abs_delta_f_le");

    // echo survival must out-rank the benchmark product as a fidelity proxy
    let taus: Vec<(String, f64)> = report["tau"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["metric"].as_str().unwrap().to_string(),
                t["tau_b"].as_f64().unwrap(),
            )
        })
        .collect();
    let get = |name: &str| taus.iter().find(|(m, _)| m == name).unwrap().1;
    assert!(get("f_le") > get("f0"), "tau ordering violated: {taus:?}");

    // locality table decreases toward smaller k
    let locality: Vec<f64> = report["locality"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["mean_abs_delta_f_le"].as_f64().unwrap())
        .collect();
    for w in locality.windows(2) {
        assert!(w[0] <= w[1] + 1e-15, "locality not monotone: {locality:?}");
    }
}

#[test]
fn rerun_reproduces_outputs_byte_identically() {
    let dir = tmp();
    let map = dir.path().join("map.json");
    run_ok(&[
        "gen-noisemap", "--rows", "3", "--cols", "3", "--seed", "5",
        "-o", map.to_str().unwrap(),
    ]);
    let out = dir.path().join("sweep");
    run_ok(&[
        "sweep",
        "--layout", map.to_str().unwrap(),
        "--circuit", "ghz",
        "--n", "3",
        "--noise", "local",
        "--shots", "500",
        "-o", out.to_str().unwrap(),
    ]);
    let first = read(&out.join("sweep.csv"));
    let manifest = out.join("manifest.json");
    run_ok(&["rerun", "--manifest", manifest.to_str().unwrap()]);
    let second = read(&out.join("sweep.csv"));
    assert_eq!(first, second, "rerun changed sweep.csv");
}

#[test]
fn asymmetric_readout_inflates_uncorrected_survival() {
    // scripted scenario: p(0|1) >> p(1|0) sends population back to the
    // all-zeros reading, so the uncorrected sampled Loschmidt estimate
    // overshoots the exact survival; correction removes the bias
    let dir = tmp();
    let map = dir.path().join("map.json");
    run_ok(&[
        "gen-noisemap", "--rows", "3", "--cols", "3", "--seed", "2",
        "--eta-lo", "0.05", "--eta-hi", "0.08",
        "--p10-lo", "0.005", "--p10-hi", "0.01",
        "--p01-lo", "0.12", "--p01-hi", "0.14",
        "-o", map.to_str().unwrap(),
    ]);
    let exact_dir = dir.path().join("exact");
    let raw_dir = dir.path().join("raw");
    let corr_dir = dir.path().join("corr");
    let base: Vec<String> = [
        "sweep",
        "--layout", map.to_str().unwrap(),
        "--circuit", "ghz",
        "--n", "3",
        "--noise", "local",
        "--seed", "6",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let with = |extra: &[&str], out: &Path| {
        let mut args: Vec<String> = base.clone();
        args.extend(extra.iter().map(|s| s.to_string()));
        args.push("-o".into());
        args.push(out.to_str().unwrap().into());
        let strs: Vec<&str> = args.iter().map(String::as_str).collect();
        run_ok(&strs);
    };
    with(&[], &exact_dir);
    with(&["--shots", "20000"], &raw_dir);
    with(&["--shots", "20000", "--readout-correct"], &corr_dir);

    let f_le_column = |dir: &Path| -> Vec<f64> {
        read(&dir.join("sweep.csv"))
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect()
    };
    let exact = f_le_column(&exact_dir);
    let raw = f_le_column(&raw_dir);
    let corr = f_le_column(&corr_dir);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!(
        mean(&raw) > mean(&exact) + 0.01,
        "uncorrected estimates should inflate: raw {} vs exact {}",
        mean(&raw),
        mean(&exact)
    );
    assert!(
        (mean(&corr) - mean(&exact)).abs() < 0.01,
        "corrected estimates should track the exact survival: corr {} vs exact {}",
        mean(&corr),
        mean(&exact)
    );
}

#[test]
fn errors_are_machine_readable_json() {
    let out = run_err(&[
        "sweep",
        "--layout", "/nonexistent/layout.json",
        "--circuit", "ghz",
        "--n", "3",
        "-o", "/tmp/qassign-err-test",
    ]);
    let msg: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(msg["command"], "sweep");
    assert!(msg["error"].as_str().unwrap().contains("layout"));
}
