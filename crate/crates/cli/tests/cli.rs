use std::process::{Command, Output};

use serde_json::Value;

fn sinvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sinvar")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = sinvar(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn column(doc: &Value, key: &str) -> Vec<f64> {
    doc["rows"].as_array().unwrap().iter().map(|r| r[key].as_f64().unwrap()).collect()
}

#[test]
fn potential_csv_layout() {
    let out = sinvar(&["potential", "--a", "1", "--x-min", "0.05", "--x-max", "4", "--n", "200", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let meta: Vec<&str> = text.lines().filter(|l| l.starts_with('#')).collect();
    for key in ["schema_version=1", "tool_version=", "a=1", "eta=", "extension=", "scan_config="] {
        assert!(meta.iter().any(|l| l.contains(key)), "missing {key}");
    }
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "x,v,v_tilde,v_int");
    assert_eq!(body.len(), 201);
    assert!(body[1].split(',').all(|c| c.parse::<f64>().is_ok()));
}

#[test]
fn potential_spot_value_and_shape() {
    let d = json(&["potential", "--a", "1", "--x-min", "0.5", "--x-max", "1.5", "--n", "3"]);
    assert!((d["rows"][1]["v"].as_f64().unwrap() - 55.0 / 36.0).abs() < 1e-11);
    let d = json(&["potential", "--a", "2", "--x-min", "0.05", "--x-max", "4", "--n", "400"]);
    let v = column(&d, "v");
    let minima = (1..v.len() - 1).filter(|&i| v[i] < v[i - 1] && v[i] < v[i + 1]).count();
    assert_eq!(minima, 1);
    let d = json(&["potential", "--a", "1", "--x-min", "-1", "--x-max", "1", "--n", "4"]);
    let v = column(&d, "v");
    assert_eq!(v[0], v[3]);
    assert!(d["rows"][0]["v_int"].is_null());
}

#[test]
fn usage_errors_exit_2() {
    let out = sinvar(&["potential", "--a", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a must be"));
    assert_eq!(sinvar(&["spectrum", "--eta", "1"]).status.code(), Some(2));
    assert_eq!(sinvar(&["spectrum", "--eta", "-2", "--extension", "sideways"]).status.code(), Some(2));
    assert_eq!(sinvar(&["potential", "--a", "1", "--x-min", "-1", "--x-max", "1", "--n", "3"]).status.code(), Some(2));
    assert_eq!(sinvar(&["wavefunction", "--eta", "-2", "--level", "500"]).status.code(), Some(2));
    assert_eq!(sinvar(&["frobnicate"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_sinvar"))
        .args(["verify", "--suite", "model"])
        .env("SINVAR_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sge_scan_table() {
    let d = json(&["sge-scan", "--eta", "-2", "--y-min", "-2.5", "--y-max", "6", "--n", "171"]);
    let y = column(&d, "y");
    let v = column(&d, "value");
    assert_eq!(y.len(), 171);
    let i = y.iter().position(|y| (*y + 2.0).abs() < 1e-12).unwrap();
    assert!(v[i].abs() <= 1e-8);
    let s = json(&["spectrum", "--eta", "-2", "--y-max", "6"]);
    let roots: Vec<f64> = column(&s, "y").into_iter().skip(1).collect();
    let changes: Vec<f64> = (1..v.len()).filter(|&k| v[k - 1] * v[k] < 0.0).map(|k| y[k]).collect();
    assert_eq!(changes.len(), roots.len());
    let step = 8.5 / 170.0;
    for (c, r) in changes.iter().zip(&roots) {
        assert!((c - r).abs() <= step + 1e-12, "{c} vs {r}");
    }
}

#[test]
fn spectrum_with_oracle() {
    let d = json(&["spectrum", "--eta", "-2", "--extension", "minus", "--n-levels", "5", "--with-oracle"]);
    for key in ["schema_version", "tool_version", "a", "eta", "extension", "scan_config"] {
        assert!(d.get(key).is_some(), "missing {key}");
    }
    assert_eq!(d["a"].as_f64(), Some(2.0));
    assert_eq!(d["oracle_pass"], Value::Bool(true));
    let rows = d["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!((rows[0]["y"].as_f64().unwrap() + 2.0).abs() <= 1e-8);
    let nodes: Vec<u64> = rows.iter().map(|r| r["nodes"].as_u64().unwrap()).collect();
    assert_eq!(nodes, [0, 1, 2, 3, 4]);
    let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["n", "y", "e", "nodes", "residual", "oracle_y", "oracle_nodes", "rel_dev"]);
}

#[test]
fn spectrum_oracle_failure_exits_1() {
    let out = sinvar(&["spectrum", "--eta", "-2", "--n-levels", "4", "--with-oracle", "--oracle-tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
}

fn norm_in_s(d: &Value) -> f64 {
    let x = column(d, "x");
    let psi = column(d, "psi");
    let h = x[1].powf(2.0 / 3.0);
    let f: Vec<f64> = x.iter().zip(&psi).map(|(x, p)| 1.5 * x.powf(1.0 / 3.0) * p * p).collect();
    let n = f.len() - 1;
    let inner: f64 = (1..n).map(|i| if i % 2 == 1 { 4.0 * f[i] } else { 2.0 * f[i] }).sum();
    (f[0] + inner + f[n]) * h / 3.0
}

#[test]
fn wavefunction_tables() {
    let g = json(&["wavefunction", "--eta", "-2", "--level", "1"]);
    let psi = column(&g, "psi");
    assert!(psi[1..].iter().all(|v| *v > 0.0));
    assert!((norm_in_s(&g) - 1.0).abs() < 1e-6);
    let e = json(&["wavefunction", "--eta", "-2", "--level", "3"]);
    assert_eq!(e["sign_changes"].as_u64(), Some(2));
    let psi = column(&e, "psi");
    let changes = psi.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert_eq!(changes, 2);
    let m =
        json(&["wavefunction", "--eta", "-2", "--level", "2", "--extension", "plus", "--mirror", "--n-points", "1001"]);
    assert_eq!(m["parity"], Value::from("Even"));
    assert!(column(&m, "x")[0] < 0.0);
}

#[test]
fn verify_suites() {
    let out = sinvar(&["verify", "--suite", "specfun"]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.lines().any(|l| l.starts_with("PASS") && l.contains("recurrence A")));
    assert!(err.lines().any(|l| l.starts_with("PASS") && l.contains("recurrence B")));
    let d = json(&["verify", "--suite", "model"]);
    let shape = d["rows"].as_array().unwrap().iter().find(|r| r["check"] == "shape invariance").unwrap();
    assert!(shape["measured"].as_f64().unwrap() < 1e-12);
    assert_eq!(sinvar(&["verify", "--suite", "all"]).status.code(), Some(0));
}

#[test]
fn output_file_and_thread_cap() {
    let dir = std::env::temp_dir().join(format!("sinvar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_sinvar"))
        .args(["spectrum", "--eta", "-3", "--n-levels", "3", "--out", path.to_str().unwrap()])
        .env("SINVAR_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# eta=-3"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn repeated_runs_are_identical() {
    let a = sinvar(&["spectrum", "--eta", "-2", "--format", "json"]).stdout;
    let b = sinvar(&["spectrum", "--eta", "-2", "--format", "json"]).stdout;
    assert_eq!(a, b);
}
