use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn shorkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shorkit"))
        .args(args)
        .env_remove("SHORKIT_DENSE_CAP")
        .output()
        .expect("run shorkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn simulate_trivial_base() {
    let o = shorkit(&["simulate", "--N", "5", "--y", "1", "--nx", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "outcome,probability\n0,1\n");
}

#[test]
fn simulate_order_four_peaks() {
    let o = shorkit(&[
        "simulate", "--N", "5", "--y", "3", "--nx", "8", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let outcomes: Vec<u64> = v["distribution"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["outcome"].as_u64().unwrap())
        .collect();
    assert_eq!(outcomes, [0, 64, 128, 192]);
}

#[test]
fn dense_engine_and_cap_from_env() {
    let args = [
        "simulate", "--N", "3", "--y", "2", "--nx", "2", "--engine", "dense",
    ];
    let ok = shorkit(&args);
    assert!(ok.status.success(), "{}", stderr(&ok));
    assert_eq!(
        stdout(&ok),
        stdout(&shorkit(&["simulate", "--N", "3", "--y", "2", "--nx", "2"]))
    );

    let capped = Command::new(env!("CARGO_BIN_EXE_shorkit"))
        .args(args)
        .env("SHORKIT_DENSE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(1));
    assert!(stderr(&capped).contains("dense cap of 10"));
}

#[test]
fn factor_fifteen() {
    let o = shorkit(&["factor", "--N", "15", "--seed", "7"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let f = v["factor"].as_u64().unwrap();
    assert!(f == 3 || f == 5);
    assert_eq!(v["N"], 15);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["factor", "--N", "21", "--seed", "4", "--shots", "1000"];
    assert_eq!(shorkit(&args).stdout, shorkit(&args).stdout);
}

#[test]
fn estimate_csv_has_four_rows() {
    let o = shorkit(&["estimate", "--n-range", "2..5", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("max_N,all_native,two_qubit,depth_bound"));
    let first: Vec<_> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(first, ["4", "8", "16", "32"]);
}

#[test]
fn decompose_hadamard() {
    let h = "0.7071067811865476";
    let o = shorkit(&[
        "decompose-u",
        h,
        "0",
        h,
        "0",
        h,
        "0",
        "-0.7071067811865476",
        "0",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["b"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-11);
}

#[test]
fn decompose_rejects_non_unitary() {
    let o = shorkit(&["decompose-u", "1", "0", "1", "0", "0", "0", "1", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not unitary"));
}

#[test]
fn build_then_transpile_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let circ = dir.path().join("carry.txt");
    let native = dir.path().join("carry.native");
    let o = shorkit(&["build", "--template", "CARRY", "-o", circ.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(fs::read_to_string(&circ).unwrap().starts_with("qubits 4\n"));

    let o = shorkit(&[
        "transpile",
        circ.to_str().unwrap(),
        "--verify",
        "-o",
        native.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&native).unwrap();
    assert!(text.lines().all(|l| l.starts_with("R ")
        || l.starts_with("XX ")
        || l.starts_with('#')
        || l.starts_with("qubits")));
    assert!(text.contains("# global_phase "));

    let o = shorkit(&[
        "transpile",
        circ.to_str().unwrap(),
        "--format",
        "json",
        "--negative-pair",
        "1,3",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for g in v["gates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|g| g["gate"] == "XX")
    {
        let pair = (
            g["w1"].as_u64().unwrap().min(g["w2"].as_u64().unwrap()),
            g["w1"].as_u64().unwrap().max(g["w2"].as_u64().unwrap()),
        );
        let chi = g["chi"].as_f64().unwrap();
        assert_eq!(chi < 0.0, pair == (1, 3));
    }
}

#[test]
fn validation_errors_exit_one_with_reason() {
    let o = shorkit(&["build", "--template", "ADDER_MOD", "--N", "9", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("N is too big"));

    let o = shorkit(&["build", "--template", "NOPE"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NOPE"));

    let o = shorkit(&["simulate", "--N", "15", "--y", "5"]);
    assert_eq!(o.status.code(), Some(1));

    let o = shorkit(&["estimate", "--n-range", "5..2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--n-range"));

    let o = shorkit(&["factor"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_circuit_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.txt");
    fs::write(&p, "qubits 2\nCNOT 0 1\nFOO 1\n").unwrap();
    let o = shorkit(&["transpile", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn io_errors_exit_two() {
    let o = shorkit(&["transpile", "/definitely/not/here.txt"]);
    assert_eq!(o.status.code(), Some(2));
    let o = shorkit(&[
        "build",
        "--template",
        "SUM",
        "-o",
        "/definitely/not/here/out.txt",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
