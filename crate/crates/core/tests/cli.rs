use std::process::{Command, Output};

fn hsem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn sum_reports_components() {
    let v = json(&hsem(&["sum", "--nu", "2.001", "--lambda", "10", "--ell", "0", "--x", "0,0"]));
    for key in ["hsem_value", "oracle_value", "abs_error", "operator_term", "hadamard_term", "error_bound"] {
        assert!(v[key].is_f64(), "missing {key}");
    }
    assert!(v["timings"]["oracle_ms"].is_f64());
    let sum = v["operator_term"].as_f64().unwrap() + v["hadamard_term"].as_f64().unwrap();
    let hsem = v["hsem_value"].as_f64().unwrap();
    assert!((sum - hsem).abs() < 1e-9 * hsem.abs().max(1.0));
    let oracle = v["oracle_value"].as_f64().unwrap();
    assert!(v["abs_error"].as_f64().unwrap() < 1e-2 * oracle.abs());
}

#[test]
fn high_order_sum_and_negative_site() {
    let v = json(&hsem(&["sum", "--nu", "3", "--lambda", "2", "--ell", "6", "--x", "2,1"]));
    assert!(v["abs_error"].as_f64().unwrap() < 1e-5);
    let v = json(&hsem(&["sum", "--x", "-3,2"]));
    assert_eq!(v["x1"], -3);
}

#[test]
fn sum_at_pole_exits_3() {
    let out = hsem(&["sum", "--nu", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nu = 2"), "{err}");
    assert_eq!(err.trim().lines().count(), 1);
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(hsem(&["sum", "--lambda", "abc"]).status.code(), Some(2));
    assert_eq!(hsem(&["sum", "--x", "1"]).status.code(), Some(2));
    assert_eq!(hsem(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn epstein_values_and_pole() {
    let v = json(&hsem(&["epstein", "--nu", "4"]));
    assert!((v["z0"].as_f64().unwrap() - 6.026_812_039_691_94).abs() < 1e-12);
    let v = json(&hsem(&["epstein", "--nu", "5", "--n", "2"]));
    assert!(v["c1_symmetry_residual"].as_f64().unwrap() < 1e-13);
    assert_eq!(v["moments"].as_array().unwrap().len(), 2);

    let out = hsem(&["epstein", "--nu", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("residue") && err.contains("6.283185307179586"), "{err}");
}

#[test]
fn epstein_csv() {
    let out = hsem(&["epstein", "--nu", "5", "--n", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "n,value,error_bound");
    assert_eq!(lines.len(), 3);
}

#[test]
fn convergence_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &std::path::Path| {
        vec![
            "convergence".to_string(),
            "--nu".into(),
            "3".into(),
            "--lambdas".into(),
            "2,3".into(),
            "--ell-max".into(),
            "1".into(),
            "--grid-extent".into(),
            "3".into(),
            "--grid-scale".into(),
            "0".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let run = |p: &std::path::Path| {
        let out = Command::new(env!("CARGO_BIN_EXE_hsem")).args(args(p)).output().unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let table = run(&a);
    run(&b);
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().next(), Some("nu,lambda,ell,x1,x2,hsem,oracle,abs_error"));
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 49);
    assert!(table.contains("target"));
}

#[test]
fn convergence_single_width_has_no_slope() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("one.csv");
    let out = hsem(&[
        "convergence", "--lambdas", "2", "--ell-max", "1", "--grid-extent", "2", "--grid-scale", "0",
        "--out", p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let table = String::from_utf8(out.stdout).unwrap();
    for line in table.lines().skip(1) {
        let cols: Vec<_> = line.split_whitespace().collect();
        // ell, target, max error: no slope column
        assert_eq!(cols.len(), 3, "{line}");
    }
    assert_eq!(std::fs::read_to_string(&p).unwrap().lines().count(), 1 + 2 * 25);
}

#[test]
fn convergence_io_error_exits_4() {
    let out = hsem(&["convergence", "--lambdas", "2", "--ell-max", "0", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bernoulli_grid_csv() {
    let out = hsem(&["bernoulli", "--ell", "1", "--resolution", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0][2], rows[8][2]);
    let max = rows.iter().map(|r| r[2]).fold(f64::MIN, f64::max);
    assert_eq!(rows[4], vec![0.0, 0.0, max]);
}

#[test]
fn bernoulli_order_zero_exits_2() {
    let out = hsem(&["bernoulli", "--ell", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absolutely convergent"));
}
