use std::path::Path;
use std::process::{Command, Output};

fn surfwave(args: &[&str], config: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_surfwave"));
    c.args(args);
    if let Some(p) = config {
        c.arg("--config").arg(p);
    }
    c.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn speeds_of_the_poisson_solid() {
    let out = surfwave(&["speeds"], None);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["c_s"].as_f64(), Some(1.0));
    assert!((v["c_p"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-12);
    assert!((v["c_r"].as_f64().unwrap() - 0.919402).abs() < 1e-6);
    assert!(v.get("c_st").is_none());
}

#[test]
fn config_errors_exit_2_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"material": {"base": {"rho": 1, "lam": 1, "mu": "x"}}}"#, "material.base.mu"),
        (r#"{"ray": {"t_end": -1}}"#, "ray.t_end"),
        (r#"{"synth": {"n_xi": 1}}"#, "synth.n_xi"),
        (r#"{"wave": "stoneley"}"#, "pair"),
        ("{ not json", "at `"),
    ];
    for (i, (text, key)) in cases.iter().enumerate() {
        let p = write(dir.path(), &format!("c{i}.json"), text);
        let out = surfwave(&["speeds"], Some(&p));
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(2), "{text}: {err}");
        assert!(err.contains(key), "{text}: {err}");
    }
    let out = surfwave(&["speeds"], Some(&dir.path().join("missing.json")));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_stoneley_root_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "same.json",
        r#"{"wave": "stoneley", "pair": {"plus": {"base": {"rho": 1, "lam": 1, "mu": 1}},
            "minus": {"base": {"rho": 1, "lam": 1, "mu": 1}}}}"#,
    );
    let out = surfwave(&["ellipse"], Some(&p));
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_outputs_have_fixed_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let o = out_dir.to_str().unwrap();
    for cmd in ["scan", "trace"] {
        assert_eq!(surfwave(&[cmd, "--out", o], None).status.code(), Some(0));
    }
    let scan = std::fs::read_to_string(out_dir.join("scan.csv")).unwrap();
    assert_eq!(scan.lines().next(), Some("s,R,S,m1,m2,det_cleared"));
    assert_eq!(scan.lines().count(), 1001);
    let trace = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert_eq!(trace.lines().next(), Some("t,x1,x2,xi1,xi2,phase,det_jac,re_a0,im_a0"));
}

#[test]
fn ellipse_and_diag_reports() {
    let out = surfwave(&["ellipse"], None);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["retrograde"], serde_json::Value::Bool(true));
    assert!((v["axis_ratio"].as_f64().unwrap() - 1.4679).abs() < 1e-3);

    let out = surfwave(&["diag"], None);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["unitarity_defect"].as_f64().unwrap() < 1e-11);
    assert_eq!(v["r0"]["flag"], "flat_exact");
}

#[test]
fn synth_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "small.json",
        r#"{"synth": {"n_xi": 16, "x_grid": {"min": [-1, -1], "max": [1, 1], "n": [11, 11]}, "times": [0.5]}}"#,
    );
    let a = surfwave(&["synth", "--threads", "1"], Some(&p));
    let b = surfwave(&["synth", "--threads", "2"], Some(&p));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("t,x1,x2,re_f1"));
}
