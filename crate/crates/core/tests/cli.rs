use std::io::Write;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn tracegeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracegeo"))
        .args(args)
        .env("TRACEGEO_THREADS", "2")
        .output()
        .expect("run binary")
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = tracegeo(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().expect("exit code"), v)
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tracegeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::File::create(&path).unwrap().write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn k_golden() {
    let (code, v) = json_of(&["k", "A3"]);
    assert_eq!(code, 0);
    assert_eq!(
        v,
        json!({
            "schema": "1",
            "command": "k",
            "group": "A3",
            "method": "default",
            "k": "3/1",
            "values": {"pairs": "3/1", "richardson": "3/1", "min_orbit": "3/1", "relative": null},
            "disagreement": false,
        })
    );
}

#[test]
fn k_with_relative_datum() {
    let path = temp_file("so31.json", r#"{"simple_roots": ["a"], "nilradical_dims": [2]}"#);
    let (code, v) = json_of(&["k", "D2", "--relative", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["k"], "2/1");
    assert_eq!(v["values"]["pairs"], "1/1");
    assert_eq!(v["disagreement"], true);
    let (code, v) = json_of(&["k", "D2", "--relative", path.to_str().unwrap(), "--assume-richardson"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "diagnostics");
}

#[test]
fn k_methods_and_degree() {
    let (_, v) = json_of(&["k", "A1", "--degree", "4", "--method", "minorbit"]);
    assert_eq!((v["method"].as_str(), v["k"].as_str()), (Some("minorbit"), Some("4/1")));
    let (_, v) = json_of(&["k", "E6", "--method", "richardson"]);
    assert_eq!(v["k"], "16/1");
    assert_eq!(v["values"]["pairs"], "11/1");
}

#[test]
fn orbits_golden() {
    let (code, v) = json_of(&["orbits", "gl3"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["orbits"],
        json!([
            {"label": "[3]", "dim": 6, "flags": []},
            {"label": "[2,1]", "dim": 4, "flags": []},
            {"label": "[1,1,1]", "dim": 0, "flags": ["trivial"]},
        ])
    );
    let (_, v) = json_of(&["orbits", "D4"]);
    let very_even = v["orbits"].as_array().unwrap().iter().filter(|o| o["flags"][0] == "very_even").count();
    assert_eq!(very_even, 2);
}

#[test]
fn parabolics_of_a1_plus_torus() {
    let (code, v) = json_of(&["parabolics", "A1+T1"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 3);
    let dims: Vec<(u64, u64)> = v["parabolics"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["dim_V"].as_u64().unwrap(), p["a_M_dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(dims.iter().filter(|d| **d == (1, 2)).count(), 2);
    assert!(dims.contains(&(0, 1)));
    assert_eq!(v["parabolics"][0]["members"][0].as_array().unwrap().len(), 2);
}

#[test]
fn discriminant_and_index() {
    let (code, v) = json_of(&["discriminant", "--matrix", r#"[["2", 0], [0, "1"]]"#, "--primes", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "-1/2");
    assert_eq!(v["abs_p"], json!({"2": "2/1", "3": "1/1"}));
    let path = temp_file("rot.json", "[[0, -1], [1, 0]]");
    let (_, v) = json_of(&["discriminant", "--matrix", &format!("@{}", path.display())]);
    assert_eq!(v["value"], "4/1");
    let (_, v) = json_of(&["index", "--group", "sl", "--n", "3", "--level", "4"]);
    assert_eq!(v["index"], "43008");
}

#[test]
fn levels() {
    let (code, v) = json_of(&["levels", "check-prime-fixed", "2,4,8,16", "--primes", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["prime_fixed"], true);
    let (_, v) = json_of(&["levels", "check-prime-fixed", "6,10"]);
    assert_eq!(v["prime_fixed"], false);
    let (_, v) = json_of(&["levels", "info", "360"]);
    assert_eq!(v["primes"], json!([2, 3, 5]));
    assert_eq!(v["bound_holds"], true);
}

#[test]
fn mellin_and_budget_floats_have_fifteen_digits() {
    let (code, v) = json_of(&["mellin-fp", "--preset", "exp", "--lambda", "2"]);
    assert_eq!(code, 0);
    let x = v["value"].as_f64().unwrap();
    assert!((x + 2f64.ln()).abs() < 1e-9);
    assert!(v["value"].to_string().trim_start_matches('-').len() <= 17);
    let (_, v) = json_of(&["budget", "--k", "1", "--eps", "0"]);
    assert_eq!(v["beta"].to_string(), "0.618033988749895");
    assert_eq!(v["all_ok"], true);
}

#[test]
fn mellin_spec_file() {
    let path = temp_file(
        "spec.json",
        r#"{"preset": {"name": "exp", "lambda": 1.0, "power": "-1/2"}, "t0": 0.5}"#,
    );
    let (code, v) = json_of(&["mellin-fp", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!((v["value"].as_f64().unwrap() + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-7);
    let wrong = temp_file(
        "wrong.json",
        r#"{"preset": {"name": "exp", "lambda": 1.0}, "terms": [["0", 2.0]], "remainder_order": "1"}"#,
    );
    let (code, v) = json_of(&["mellin-fp", "--spec", wrong.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "diagnostics");
}

#[test]
fn exit_codes() {
    let (code, v) = json_of(&["k", "A2xQ3"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["offset"], 3);
    assert_eq!(json_of(&["orbits", "E6"]).0, 2);
    assert_eq!(json_of(&["orbits", "A25"]).0, 3);
    assert_eq!(json_of(&["k", "A9", "--method", "pairs"]).0, 3);
    assert_eq!(json_of(&["index", "--n", "2", "--level", "0"]).0, 2);
    assert_eq!(json_of(&["k", "A1", "--relative", "/nonexistent/x.json"]).0, 2);
    assert_eq!(tracegeo(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn injected_fault_fails_and_names_the_check() {
    let (code, v) = json_of(&["reproduce", "--inject-fault", "k-sl4"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert_eq!(v["failures"], json!([{"id": 1, "name": v["checks"][0]["name"]}]));
    let text = String::from_utf8(tracegeo(&["reproduce", "--inject-fault", "k-sl4"]).stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("[FAIL]  1.")));
}
