use std::path::PathBuf;
use std::process::{Command, Output};

fn lieder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lieder"))
        .args(args)
        .env_remove("LIEDER_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a JSON document")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lieder-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn counterexample_p5() {
    let o = lieder(&["--json", "counterexample", "--p", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "ok");
    let r = &v["results"];
    assert_eq!(r["dim"], 15);
    assert_eq!(r["radical_dim"], 12);
    assert_eq!(r["derived_length"], 3);
    assert_eq!(r["characteristic"], false);
    assert_eq!(r["witness"]["verified"], true);
    assert_eq!(r["admissible_depth"], 2);
}

#[test]
fn bounds_n1() {
    let o = lieder(&["--json", "bounds", "--n", "1", "--kmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let values: Vec<u64> = v["results"]["table"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["bound"].as_u64().unwrap())
        .collect();
    assert_eq!(values, vec![1, 2, 3, 4, 5, 6]);
    assert_eq!(v["results"]["polynomial"], serde_json::json!(["1", "1"]));
}

#[test]
fn validate_reports_jacobi_violation() {
    let path = temp_file("bad.lie", "field Q\ndim 3\nb 1 2 : 3\nb 3 1 : 1\n");
    let o = lieder(&["--json", "validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let v = json(&o);
    assert_eq!(v["status"], "violation");
    assert_eq!(v["results"]["valid"], false);
    assert_eq!(v["results"]["violation"]["kind"], "jacobi");
}

#[test]
fn validate_accepts_sl2_file() {
    let path = temp_file(
        "sl2.lie",
        "# e f h\nfield Q\ndim 3\nb 1 2 : 1*3\nb 3 1 : 2*1\nb 3 2 : -2*2\n",
    );
    let o = lieder(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid: yes"));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let path = temp_file("conflict.lie", "field Q\ndim 3\nb 1 2 : 3\nb 2 1 : 3\n");
    let o = lieder(&["series", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn budget_exit_code_and_env() {
    let o = lieder(&["radical", "sl2", "--field", "GF(5)", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("125"));
    let o = Command::new(env!("CARGO_BIN_EXE_lieder"))
        .args(["radical", "sl2", "--field", "GF(5)"])
        .env("LIEDER_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    let o = lieder(&["radical", "sl2", "--field", "GF(5)"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors() {
    assert_eq!(lieder(&["series", "nonsense"]).status.code(), Some(2));
    assert_eq!(lieder(&["bounds"]).status.code(), Some(2));
    assert_eq!(lieder(&["check", "--suite", "other"]).status.code(), Some(2));
    assert_eq!(lieder(&["series", "sl2", "--ideal", "span:1"]).status.code(), Some(2));
}

#[test]
fn dclosure_with_derivation_file() {
    // Heisenberg x, y, z with D = diag(1, 0, 1): outer, J_1 of span(z) stays span(z).
    let alg = temp_file("heis.lie", "field Q\ndim 3\nb 1 2 : 3\n");
    let der = temp_file("heis.der", "dim 3\n1 0 0\n0 0 0\n0 0 1\n");
    let o = lieder(&[
        "--json",
        "dclosure",
        alg.to_str().unwrap(),
        "--derivation",
        der.to_str().unwrap(),
        "--ideal",
        "span:3",
        "--k",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &json(&o)["results"];
    assert_eq!(r["chain"][2]["dim"], 1);
    assert_eq!(r["stabilized_at"], 0);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["holds"] == true));

    let not_der = temp_file("bad.der", "dim 3\n1 0 0\n0 0 0\n0 0 0\n");
    let o = lieder(&[
        "dclosure",
        alg.to_str().unwrap(),
        "--derivation",
        not_der.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn characteristic_and_der() {
    let o = lieder(&["--json", "characteristic", "jacobson:3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["results"];
    assert_eq!(r["characteristic"], false);
    assert_eq!(r["hypotheses_met"], false);
    let o = lieder(&["--json", "der", "sl2"]);
    assert_eq!(json(&o)["results"]["dim"], 3);
    let o = lieder(&["series", "borel:3", "--ideal", "derived:1"]);
    assert!(stdout(&o).contains("derived length: 2"));
}

#[test]
fn check_is_deterministic_and_writes_out() {
    let out = std::env::temp_dir().join(format!("lieder-check-{}.json", std::process::id()));
    let args = ["--json", "check", "--suite", "key", "--seed", "9", "--count", "20"];
    let a = lieder(&args);
    let b = lieder(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let o = lieder(&[
        "--out",
        out.to_str().unwrap(),
        "check",
        "--suite",
        "key",
        "--seed",
        "9",
        "--count",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
    assert!(!has_float(&serde_json::from_slice(&a.stdout).unwrap()));
}

fn has_float(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_f64(),
        serde_json::Value::Array(a) => a.iter().any(has_float),
        serde_json::Value::Object(o) => o.values().any(has_float),
        _ => false,
    }
}

#[test]
fn reports_contain_no_floats() {
    for args in [
        &["--json", "counterexample", "--p", "3"][..],
        &["--json", "bounds", "--n", "3", "--kmax", "6"],
        &["--json", "characteristic", "sl2+affine"],
    ] {
        assert!(!has_float(&json(&lieder(args))), "{args:?}");
    }
}
