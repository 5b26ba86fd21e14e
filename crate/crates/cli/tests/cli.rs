use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn dlambda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlambda")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn point_reports_both_engines_and_gains() {
    let o = dlambda(&["point", "--preset", "fig4", "--engine", "both"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    for e in ["exact", "effective"] {
        let entry = &v["engines"][e];
        assert_eq!(entry["engine"], e);
        assert!(entry["medium"]["alpha14"].is_f64());
        assert!(entry["coherences"]["r14"].is_array());
    }
}

#[test]
fn dump_operators_has_superoperator_of_dimension_16() {
    let o = dlambda(&["point", "--preset", "fig2", "--dump-operators"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["operators"]["superoperator"].as_array().unwrap().len(), 16);
    assert_eq!(v["operators"]["hamiltonian"].as_array().unwrap().len(), 4);
    assert_eq!(v["operators"]["collapse_ops"].as_array().unwrap().len(), 4);
}

#[test]
fn sweep_csv_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let base = ["sweep", "--preset", "fig2", "--axis", "delta4:-5:5:41", "--engine", "both"];
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let mut args = base.to_vec();
        args.extend(["--parallel", threads, "--out", path.to_str().unwrap()]);
        let o = dlambda(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# config-hash="));
    assert!(lines[1].starts_with("index,delta4,engine,rho14_re_exact,"));
    assert!(lines[1].ends_with(",error"));
    assert_eq!(lines.len(), 2 + 41);
    let width = lines[1].split(',').count();
    assert!(lines[2..].iter().all(|l| l.split(',').count() == width && l.contains("exact+effective")));
    assert!(!text.contains("NaN"));
}

#[test]
fn sweep_two_axes_json() {
    let o = dlambda(&[
        "sweep", "--preset", "fig3", "--axis", "delta4:10:20:3", "--axis", "phi0:0:2pi:4", "--outputs", "alpha14,alpha24",
        "--format", "json",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
    assert_eq!(v["columns"], serde_json::json!(["alpha14_exact", "alpha24_exact"]));
    assert_eq!(v["metadata"]["grid_size"], 12);
}

#[test]
fn lasing_search_reports_equal_gain_points() {
    let o = dlambda(&["lasing-search", "--preset", "fig4", "--samples", "180"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let n = v["crossings"].as_u64().unwrap();
    assert!(n >= 2);
    assert_eq!(v["feasibility"].as_array().unwrap().len() as u64, n);
    assert!(v["threshold"]["alpha"].as_f64().unwrap() > 1.8);
}

#[test]
fn cavity_numbers() {
    let o = dlambda(&["cavity", "--preset", "fig4", "--alpha", "1.8"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert!((v["length_m"].as_f64().unwrap() - 0.04386).abs() < 1e-4);
    assert!((v["per_pass"].as_f64().unwrap() - 0.079).abs() < 1e-3);
}

#[test]
fn evolve_and_verify_run() {
    let o = dlambda(&["evolve", "--preset", "fig2", "--t-final", "2", "--sample-every", "50"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("t,pop1,"));
    let o = dlambda(&["verify-adiabatic", "--preset", "fig2", "--t-final", "15"]);
    assert_eq!(code(&o), 0);
    assert!(stdout_json(&o)["probe"]["max_deviation"].is_f64());
}

#[test]
fn config_errors_exit_1_with_schema() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "omega13_rabi = 1\nwarp_factor = 9\n").unwrap();
    let mismatched = dir.path().join("mismatched.cfg");
    fs::write(&mismatched, "delta13 = 1\ndelta23 = 2\n").unwrap();
    for args in [
        vec!["point", "--config", bad.to_str().unwrap()],
        vec!["point", "--config", mismatched.to_str().unwrap()],
        vec!["point", "--config", "/no/such/file.cfg"],
        vec!["point", "--preset", "fig9"],
        vec!["sweep", "--preset", "fig2", "--axis", "delta4:0:1"],
        vec!["sweep", "--preset", "fig2", "--axis", "delta4:0:1:3", "--outputs", "alpha14"],
        vec!["frobnicate"],
    ] {
        let o = dlambda(&args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("Scenario file"), "{args:?}");
    }
}

#[test]
fn solver_errors_exit_2() {
    let o = dlambda(&["point", "--preset", "fig2", "--engine", "effective", "--delta4", "0"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}
