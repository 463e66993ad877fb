use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_secular"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn secular");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str], input: &str) -> Value {
    let out = run(args, input);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const SAMPLE3: &str = r#"{"rows":3,"cols":3,"entries":[[1,-1,0],[-1,2,1],[0,1,1]]}"#;
const YV_REPEATED: &str = r#"{"model":{"kind":"yvon-villarceau-2dof","parameters":{"g":2,"f":2,"a":0,"c":3}}}"#;

#[test]
fn charpoly_of_three_by_three() {
    let v = json(&["charpoly"], SAMPLE3);
    assert_eq!(v["command"], "charpoly");
    assert_eq!(v["path"], "exact");
    let coeffs: Vec<&str> = v["result"]["polynomial"]["coefficients"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["0", "-3", "4", "-1"]);
    assert!(v["provenance"]["source"].is_string());
}

#[test]
fn identity_pair_has_one_component() {
    let pair = r#"{"Phi":{"rows":2,"cols":2,"entries":[1,0,0,1]},"Psi":{"rows":2,"cols":2,"entries":[1,0,0,1]}}"#;
    let v = json(&["weierstrass-reduce"], pair);
    let comps = v["result"]["components"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["multiplicity"], 2);
    assert_eq!(comps[0]["root"]["value"], "1");
}

#[test]
fn classify_reports_disagreement() {
    let v = json(&["classify"], YV_REPEATED);
    assert_eq!(v["result"]["historical"]["verdict"], "conditional");
    assert_eq!(v["result"]["corrected"]["verdict"], "stable");
    assert_eq!(v["result"]["agreement"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["charpoly"], "{not json").status.code(), Some(2));
    let indefinite = r#"{"Phi":{"rows":2,"cols":2,"entries":[1,0,0,-1]},"Psi":{"rows":2,"cols":2,"entries":[0,1,1,0]}}"#;
    assert_eq!(run(&["weierstrass-reduce"], indefinite).status.code(), Some(3));
    let irrational = r#"{"rows":2,"cols":2,"entries":[0,1,2,0]}"#;
    assert_eq!(run(&["expm", "--path", "exact"], irrational).status.code(), Some(4));
    let v = json(&["expm", "--time", "0"], irrational);
    assert_eq!(v["path"], "floating");
    assert_eq!(v["result"]["exp"]["entries"], serde_json::json!([1.0, 0.0, 0.0, 1.0]));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (verb, input) in [("eigvec", SAMPLE3), ("classify", YV_REPEATED), ("solve", YV_REPEATED)] {
        let a = run(&[verb], input);
        let b = run(&[verb], input);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{verb} output differs between runs");
    }
}

#[test]
fn written_matrices_reparse() {
    let input = r#"{"rows":2,"cols":2,"entries":["1/3",2,2,"-5/7"]}"#;
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("expm.json");
    let status = run(&["expm", "--time", "0", "-o", out.to_str().unwrap()], input).status;
    assert!(status.success());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(written["result"].is_object());

    let phi = r#"{"rows":2,"cols":2,"entries":[["1/3",0],[0,"5/7"]]}"#;
    let pair = format!(r#"{{"Phi":{phi},"Psi":{{"rows":2,"cols":2,"entries":[1,0,0,3]}}}}"#);
    let v = json(&["weierstrass-reduce"], &pair);
    let mut sum = secular::matpoly::QMatrix::zeros(2, 2);
    for c in v["result"]["components"].as_array().unwrap() {
        let theta = secular::io::parse_matrix(&c["theta"].to_string()).unwrap();
        let again = secular::io::parse_matrix(&serde_json::to_string(&secular::io::MatrixDoc::from_matrix(&theta)).unwrap()).unwrap();
        assert_eq!(theta, again);
        sum = &sum + &theta;
    }
    assert_eq!(sum, secular::io::parse_matrix(phi).unwrap());
}

#[test]
fn trajectory_csv() {
    let scenario = r#"{"model":{"kind":"dalembert-two-mass","parameters":{"T":1}},
        "initial_conditions":{"positions":[0.1,0],"velocities":[0,0]},"t_grid":{"t_max":1,"steps":10}}"#;
    let out = run(&["trajectory"], scenario);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,y1,y2");
    assert_eq!(lines.len(), 12);
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 0.1).abs() < 1e-12);
}
