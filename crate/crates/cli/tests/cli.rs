use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddseries"))
        .args(args)
        .env_remove("DD_ENUM_CAP")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn zeta_at_zero() {
    let v = json(&["eval", "--base", "10", "--digits", "0-9", "--s", "0,0"]);
    assert!((v["value"]["re"].as_f64().unwrap() + 0.5).abs() < 1e-10);
    assert!(v["value"]["im"].as_f64().unwrap().abs() < 1e-10);
    assert_eq!(v["input"]["command"], "eval");
    assert!(v["tail_estimate"].as_f64().unwrap() < 1e-6);
    assert!(v["terms_used"].as_u64().unwrap() > 0);
    assert!(v["wall_time_ms"].is_number());
}

#[test]
fn negative_real_point_parses() {
    let v = json(&["eval", "--base", "10", "--digits", "0-9", "--s", "-1"]);
    assert!((v["value"]["re"].as_f64().unwrap() + 1.0 / 12.0).abs() < 1e-9);
}

#[test]
fn explicit_methods() {
    for method in ["geo", "feq", "direct"] {
        let v = json(&["eval", "--base", "10", "--digits", "0-8", "--s", "3.5,1", "--method", method, "--tol", "1e-8"]);
        assert_eq!(v["method"], method);
    }
    let v = json(&["eval", "--base", "10", "--digits", "7", "--s", "0.5", "--method", "closed-n1"]);
    assert_eq!(v["method"], "closed-n1");
    assert!(v["nearest_pole"].is_object());
}

#[test]
fn kempner_digits() {
    let v = json(&["kempner", "--base", "10", "--digits", "0-8"]);
    let k = v["value"]["re"].as_f64().unwrap();
    assert!((k - 22.920_676_619_264_15).abs() < 1e-9, "{k}");
}

#[test]
fn bernoulli_base_two() {
    let v = json(&["bernoulli", "--base", "2", "--digits", "0-1", "--order", "4"]);
    assert_eq!(v["value"]["convention"], "egf");
    let coeffs: Vec<&str> = v["value"]["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1", "-1/2", "1/6", "0", "-1/30"]);
}

#[test]
fn negative_values_are_rational_strings() {
    let v = json(&["neg-values", "--base", "10", "--digits", "1-9", "--order", "2"]);
    assert_eq!(v["value"][0], "-9/8");
    assert_eq!(v["value"].as_array().unwrap().len(), 3);
}

#[test]
fn residues_and_mgf() {
    let v = json(&["residues", "--base", "10", "--digits", "0-8", "--order", "3"]);
    assert_eq!(v["lambda"].as_array().unwrap().len(), 4);
    assert!(v["mu"].is_array());
    let v = json(&["residues", "--base", "10", "--digits", "0-9", "--order", "2"]);
    assert!(v["mu"].is_null());

    let v = json(&["mgf", "--base", "3", "--digits", "0,2", "--t", "1", "--order", "2"]);
    let e = v["value"]["re"].as_f64().unwrap();
    let b = v["reciprocal"]["re"].as_f64().unwrap();
    assert!((e * b - 1.0).abs() < 1e-12);
    assert_eq!(v["e_taylor"]["coeffs"][1], "1/2");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["eval", "--base", "10"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "--base", "10", "--digits", "0-9", "--s", "x"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "--base", "10", "--digits", "0-12", "--s", "2"]).status.code(), Some(1));
    assert_eq!(run(&["kempner", "--base", "10", "--digits", "0-9"]).status.code(), Some(2));
    assert_eq!(
        run(&["eval", "--base", "10", "--digits", "0-8", "--s", "0.5", "--method", "closed-n1"]).status.code(),
        Some(2)
    );
    let err = run(&["neg-values", "--base", "10", "--digits", "0-9"]);
    assert_eq!(err.status.code(), Some(2));
    assert!(!err.stderr.is_empty());
}

#[test]
fn enumeration_cap_from_environment() {
    let args = ["eval", "--base", "10", "--digits", "0-8", "--s", "3", "--method", "direct", "--tol", "1e-6"];
    assert!(run(&args).status.success());
    let capped = Command::new(env!("CARGO_BIN_EXE_ddseries"))
        .args(args)
        .env("DD_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "--base", "3", "--digits", "0,2", "--s", "-0.7,2.5"];
    let mut a = json(&args);
    let mut b = json(&args);
    a.as_object_mut().unwrap().remove("wall_time_ms");
    b.as_object_mut().unwrap().remove("wall_time_ms");
    assert_eq!(a, b);
}

#[test]
fn text_format() {
    let out = run(&["kempner", "--base", "10", "--digits", "0-8", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("method: "));
    assert!(text.contains("value: 2.29206766192"));
}

#[test]
fn quick_verification_passes() {
    let v = json(&["verify", "--quick"]);
    assert_eq!(v["passed"], true, "{v:#}");
    assert!(v["checks"].as_array().unwrap().len() >= 5);
}
