use std::path::PathBuf;
use std::process::{Command, Output};

fn ness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ness")).args(args).output().expect("failed to run ness")
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn steady_equilibrium_is_gibbs() {
    let o = ness(&["steady", "--config", &config("equilibrium.json")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p: Vec<f64> = v["p"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let b = (-1.0_f64 / 0.8).exp();
    let z = (1.0 + b) * (1.0 + b);
    for (got, want) in p.iter().zip([1.0 / z, b / z, b / z, b * b / z]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!(v["c"]["re"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["c"]["im"].as_f64().unwrap(), 0.0);
}

#[test]
fn scan_negativity_header_and_determinism() {
    let args = ["scan-negativity", "--config", &config("negativity_scan.json"), "--t1-range", "0:20:200"];
    let a = ness(&args);
    let b = ness(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t1,negativity,p1,p2,p4,c,negativity_largeJ2"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 200);
    // T1 = 0 has no large-J2 value; the curve rises and falls
    assert_eq!(rows[0][6], "");
    let n: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let peak = n.iter().cloned().fold(0.0, f64::max);
    assert!(peak > 0.03 && peak < 0.04);
    assert!(n[199] < peak);
}

#[test]
fn scan_negativity_theta_axis() {
    let o = ness(&["scan-negativity", "--config", &config("negativity_scan.json"), "--t1-range", "0.01:0.1:2", "--t1-axis", "theta"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[0], "1.0000000000000000e-2");
    let n: f64 = first[1].parse().unwrap();
    let approx: f64 = first[6].parse().unwrap();
    assert!((n - approx).abs() < 1e-2);
}

#[test]
fn scan_boundary_writes_empty_field_without_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"delta": 1, "baths": [{"temperature": 0, "j": 1}, {"temperature": 0, "j": 50}]}"#,
    );
    let out = dir.path().join("b.csv");
    let o = ness(&["scan-boundary", "--config", &cfg, "--t1-range", "0.1:0.5:3", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text, "t1,t2_boundary\n1.0000000000000001e-1,\n3.0000000000000004e-1,\n5.0000000000000000e-1,\n");
}

#[test]
fn scan_boundary_finds_region() {
    let o = ness(&["scan-boundary", "--config", &config("boundary.json"), "--t1-range", "0.1:1:4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for row in v.as_array().unwrap() {
        let t2 = row["t2_boundary"].as_f64().unwrap();
        assert!(t2 > 0.0 && t2 < 0.6);
    }
}

#[test]
fn scan_kplane_equal_baths() {
    let o = ness(&["scan-kplane", "--j2-over-j1", "1", "--k1-range", "-1:1:11", "--k2-range", "0.1:1:10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("k1_over_j1,k2_over_j2,entangled\n"));
    assert_eq!(text.lines().count(), 111);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",false")));
}

#[test]
fn rates_and_negativity_json() {
    let o = ness(&["rates", "--config", &config("boundary.json")]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["gamma_plus_1"].as_f64().unwrap(), 51.0);
    assert_eq!(v["reduced"]["beta"].as_f64().unwrap(), 50.0);

    let o = ness(&["negativity", "--config", &config("limiting.json")]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["entangled"].as_bool().unwrap());
    let n = v["negativity"].as_f64().unwrap();
    assert!(n > 0.03 && n < 0.04);
}

#[test]
fn raw_units_change_the_interpretation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"delta": 2, "baths": [{"temperature": 1, "j": 1}, {"temperature": 1, "j": 2}]}"#,
    );
    let normalized = ness(&["rates", "--config", &cfg]);
    let raw = ness(&["rates", "--config", &cfg, "--raw-units"]);
    let n: serde_json::Value = serde_json::from_str(&stdout(&normalized)).unwrap();
    let r: serde_json::Value = serde_json::from_str(&stdout(&raw)).unwrap();
    assert_eq!(n["delta1"].as_f64().unwrap(), 1.0);
    assert_eq!(r["delta1"].as_f64().unwrap(), 2.0);
    assert!((r["gamma_plus_1"].as_f64().unwrap() - 2.0 * n["gamma_plus_1"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(&dir, r#"{"delta": 1, "baths": [{"temperature": 1, "j": 1, "k": 2}]}"#);
    let o = ness(&["steady", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid bath"));

    let o = ness(&["steady", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(o.status.code(), Some(2));

    let unknown = write_config(&dir, r#"{"delta": 1, "baths": [], "colour": 1}"#);
    assert_eq!(ness(&["steady", "--config", &unknown]).status.code(), Some(2));
}

#[test]
fn degenerate_environment_exits_3() {
    // K = J in every bath at a common temperature leaves the singlet decoupled
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"delta": 1, "baths": [{"temperature": 0.5, "j": 1, "k": 1}]}"#);
    let o = ness(&["steady", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn invalid_invocations_are_rejected() {
    assert_eq!(ness(&["steady", "--config", &config("equilibrium.json"), "--bogus"]).status.code(), Some(2));
    assert_eq!(ness(&["frobnicate"]).status.code(), Some(2));
    let cfg = config("boundary.json");
    for range in ["0:1:1", "1:0:5", "0:1"] {
        let o = ness(&["scan-boundary", "--config", &cfg, "--t1-range", range]);
        assert_eq!(o.status.code(), Some(2), "range {range}");
    }
}

#[test]
fn verify_reports_every_check() {
    let o = ness(&["verify"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    for (i, line) in lines.iter().enumerate() {
        assert!(line.starts_with(&format!("criterion {}: ", i + 1)), "{line}");
    }
    let all_pass = lines.iter().all(|l| l.contains(": PASS "));
    assert_eq!(o.status.success(), all_pass);
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
}
