use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tricomi(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricomi"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn verify_defaults_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = tricomi(&["verify", "--n", "1", "--m", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut checks = Vec::new();
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        for key in ["check", "params", "discrepancy", "threshold", "pass"] {
            assert!(v.get(key).is_some(), "{key} missing in {line}");
        }
        assert_eq!(v["pass"], true, "{line}");
        checks.push(v["check"].as_str().unwrap().to_string());
    }
    for name in [
        "normalization",
        "pde_residual",
        "radial_ode",
        "hypergeometric",
        "delta_concentration",
        "weak_convergence",
        "fourier_airy",
        "airy_macdonald",
        "hankel_reduction",
    ] {
        assert!(checks.iter().any(|c| c == name), "{name} not run");
    }
}

#[test]
fn verify_failure_exits_3_and_keeps_reports() {
    let dir = tempfile::tempdir().unwrap();
    // A loose tolerance leaves the mass visibly off 1.
    let out = tricomi(&["verify", "--tol", "0.5", "--out", "reports.jsonl"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let text = std::fs::read_to_string(dir.path().join("reports.jsonl")).unwrap();
    assert!(text.lines().any(|l| l.contains("\"pass\":false")));
}

#[test]
fn demo_step_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = tricomi(&["demo-step"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["x1", "y", "u", "closed_form", "abs_error"]);
    assert_eq!(rows.len(), 45);
    let worst = rows.iter().map(|r| r[4]).fold(0.0, f64::max);
    assert!(worst < 1e-6, "max error {worst}");
    for r in &rows {
        assert!(((r[2] - r[3]).abs() - r[4]).abs() <= 1e-15);
    }
    let bad = tricomi(&["demo-step", "--m", "1"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn solve_constant_data() {
    let dir = tempfile::tempdir().unwrap();
    for (n, m) in [("1", "1"), ("2", "-0.5"), ("3", "0")] {
        let out = tricomi(
            &["solve", "--n", n, "--m", m, "--psi", "constant:1", "--grid", "3,3"],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let (header, rows) = parse_csv(&stdout(&out));
        assert_eq!(header.last().unwrap(), "u");
        assert_eq!(header.len(), n.parse::<usize>().unwrap() + 2);
        assert!(rows.iter().all(|r| (r[r.len() - 1] - 1.0).abs() < 1e-8));
    }
}

#[test]
fn kernel_output_is_byte_deterministic_with_17_digits() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["kernel", "--n", "2", "--m", "0.5", "--x-range", "-1,1", "--grid", "4,3"];
    let a = stdout(&tricomi(&args, dir.path()));
    let b = stdout(&tricomi(&args, dir.path()));
    assert_eq!(a, b);
    let (header, rows) = parse_csv(&a);
    assert_eq!(header, ["x1", "x2", "y", "k"]);
    assert_eq!(rows.len(), 48);
    let cell = a.lines().nth(1).unwrap().split(',').last().unwrap();
    let mantissa = cell.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{cell}");
}

#[test]
fn jsonl_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = tricomi(&["kernel", "--grid", "2,1", "--format", "jsonl"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0]["k"].as_f64().unwrap() > 0.0);
    assert!(rows[0].get("x1").is_some() && rows[0].get("y").is_some());
}

#[test]
fn sampled_data_from_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("x1,psi\n");
    for i in 0..=20 {
        let x = -2.0 + 0.2 * i as f64;
        csv.push_str(&format!("{x},{}\n", (-x * x).exp()));
    }
    std::fs::create_dir(dir.path().join("data")).unwrap();
    std::fs::write(dir.path().join("data/psi.csv"), csv).unwrap();
    std::fs::write(
        dir.path().join("data/run.toml"),
        "n = 1\nm = 0.0\npsi_file = \"psi.csv\"\nfar_field = 0.0\npsi_bound = 1.0\ngrid = [5, 2]\ny_range = [0.05, 1.0]\nout = \"ignored.csv\"\n",
    )
    .unwrap();
    // --out on the command line overrides the file.
    let out = tricomi(&["solve", "--config", "data/run.toml", "--out", "u.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!dir.path().join("ignored.csv").exists());
    let (_, rows) = parse_csv(&std::fs::read_to_string(dir.path().join("u.csv")).unwrap());
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r[2] >= -1e-6 && r[2] <= 1.0 + 1e-6));

    // Flag override of m changes the result.
    let other = tricomi(&["solve", "--config", "data/run.toml", "--m", "1", "--out", "v.csv"], dir.path());
    assert_eq!(other.status.code(), Some(0));
    assert_ne!(
        std::fs::read_to_string(dir.path().join("u.csv")).unwrap(),
        std::fs::read_to_string(dir.path().join("v.csv")).unwrap()
    );
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("two.csv"), "x1,x2,psi\n0,0,1\n0,1,1\n1,0,1\n1,1,1\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["kernel", "--m", "-2"],
        vec!["kernel", "--n", "0"],
        vec!["kernel", "--y-range", "0,1"],
        vec!["kernel", "--x-range", "2,1"],
        vec!["kernel", "--grid", "0,3"],
        vec!["kernel", "--bogus"],
        vec!["solve"],
        vec!["solve", "--psi", "wave:1"],
        vec!["solve", "--psi", "step:0,1", "--n", "2"],
        vec!["solve", "--psi", "constant:2", "--psi-bound", "1"],
        vec!["solve", "--n", "1", "--psi-file", "two.csv", "--far-field", "0", "--psi-bound", "1"],
        vec!["solve", "--n", "2", "--psi-file", "two.csv", "--psi-bound", "1"],
        vec!["solve", "--n", "2", "--psi-file", "missing.csv", "--far-field", "0", "--psi-bound", "1"],
        vec!["kernel", "--config", "missing.toml"],
        vec!["verify", "--format", "csv"],
        vec!["kernel", "--tol", "2"],
    ];
    for args in cases {
        let out = tricomi(&args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn computation_failure_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("checker.csv"), "x1,x2,psi\n0,0,1\n0,1,0\n1,0,0\n1,1,1\n").unwrap();
    std::fs::write(
        dir.path().join("strict.toml"),
        "[quadrature]\nmax_subdivisions = 10\nabs_tolerance = 1e-15\nrel_tolerance = 1e-15\n",
    )
    .unwrap();
    let out = tricomi(
        &[
            "solve", "--n", "2", "--psi-file", "checker.csv", "--far-field", "0", "--psi-bound", "1",
            "--config", "strict.toml", "--grid", "2,1", "--out", "u.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("point 0") && err.contains("x = "), "{err}");
    assert!(!dir.path().join("u.csv").exists());
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 2);
}
