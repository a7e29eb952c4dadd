//! End-to-end checks of the `bggl` binary: exit codes, output formats, and
//! the sample -> fit round trip.

use std::process::Command;

fn bggl() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bggl"))
}

fn fixture_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data/synthetic_spx_weekly.csv")
}

#[test]
fn usage_error_exits_2() {
    let out = bggl().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn data_error_exits_1_with_diagnostic() {
    let out = bggl()
        .args(["fit", "--in", "/nonexistent/file.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("bggl:"), "stderr: {err}");
    assert_eq!(err.lines().count(), 1, "one-line diagnostic expected");
}

#[test]
fn invalid_params_exit_1() {
    let out = bggl()
        .args(["sample", "--alpha", "-1", "--beta", "1", "--n", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sample_then_fit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sample.csv");
    let out = bggl()
        .args([
            "sample", "--alpha", "2", "--beta", "1", "--delta", "0", "--mu", "3", "--sigma",
            "1", "--n", "100000", "--seed", "7", "--out",
        ])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,y\n"));
    assert_eq!(text.lines().count(), 100_001);

    let out = bggl().args(["fit", "--in"]).arg(&csv).output().unwrap();
    assert!(out.status.success());
    let fit: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let theta = &fit["theta"];
    // published asymptotic 4-SE bands at n = 1e5, alpha = 2 > 1
    let n = 100_000.0_f64;
    let t1 = 0.6449340668482264; // psi'(2)
    let se_alpha = (2.0 / (2.0 * t1 - 1.0) / n).sqrt();
    assert!((theta["alpha"].as_f64().unwrap() - 2.0).abs() < 4.0 * se_alpha);
    let se_beta = (t1 / (2.0 * t1 - 1.0) / n).sqrt();
    assert!((theta["beta"].as_f64().unwrap() - 1.0).abs() < 4.0 * se_beta);
    let se_delta = (2.0_f64 / n).sqrt(); // sigma^2 alpha (alpha-1) / beta
    assert!((theta["delta"].as_f64().unwrap() - 0.0).abs() < 4.0 * se_delta);
    let se_mu = (1.0_f64 / n).sqrt();
    assert!((theta["mu"].as_f64().unwrap() - 3.0).abs() < 4.0 * se_mu);
    let se_sigma = (0.5 / n).sqrt();
    assert!((theta["sigma"].as_f64().unwrap() - 1.0).abs() < 4.0 * se_sigma);
    assert_eq!(fit["regime"], "Regular");
}

#[test]
fn outputs_are_deterministic_in_seed() {
    let run = || {
        bggl()
            .args(["sample", "--alpha", "1", "--beta", "2", "--n", "50", "--seed", "99"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
    let other = bggl()
        .args(["sample", "--alpha", "1", "--beta", "2", "--n", "50", "--seed", "100"])
        .output()
        .unwrap()
        .stdout;
    assert_ne!(run(), other);
}

#[test]
fn table1_small_run_structure() {
    let out = bggl()
        .args(["table1", "--replications", "20", "--seed", "5", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 8);
    let first = &reports[0];
    assert_eq!(first["rows"].as_array().unwrap().len(), 3);
    assert_eq!(first["rows"][0]["name"], "delta");
    // text format prints 8 aligned blocks
    let out = bggl()
        .args(["table1", "--replications", "20", "--seed", "5"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("Sample size n =").count(), 8);
}

#[test]
fn finance_pipeline_on_fixture() {
    let out = bggl()
        .args(["finance", "--in"])
        .arg(fixture_path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let result: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((result["fit"]["theta"]["alpha"].as_f64().unwrap() - 1.293455194858396).abs() < 1e-9);
    assert_eq!(result["qq_x_gamma"].as_array().unwrap().len(), 260);
    assert_eq!(result["qq_z_normal"].as_array().unwrap().len(), 260);
}

#[test]
fn qq_normal_known_quartiles() {
    let dir = tempfile::tempdir().unwrap();
    let vals = dir.path().join("vals.csv");
    std::fs::write(&vals, "value\n-1.0\n1.0\n").unwrap();
    let out = bggl()
        .args(["qq", "--law", "normal", "--in"])
        .arg(&vals)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "theoretical,empirical");
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((first[0] + 0.6744897501960817).abs() < 1e-10);
    assert_eq!(first[1], -1.0);
}

#[test]
fn levy_path_and_limit_law_run() {
    let out = bggl()
        .args([
            "levy-path", "--alpha", "1.5", "--beta", "2", "--mu", "-1", "--sigma", "0.7",
            "--t-max", "2", "--steps", "16", "--seed", "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 18); // header + 17 grid points
    let g: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(g.windows(2).all(|w| w[1] >= w[0]));

    let out = bggl()
        .args([
            "limit-law", "--alpha", "0.5", "--beta", "1", "--sigma", "1", "--regime", "heavy",
            "--draws", "10", "--seed", "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 11);
    // heavy regime demands alpha < 1
    let out = bggl()
        .args([
            "limit-law", "--alpha", "2", "--beta", "1", "--sigma", "1", "--regime", "heavy",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rate_slope_runs_small() {
    let out = bggl()
        .args([
            "rate-slope", "--alpha", "2", "--beta", "1", "--n-grid", "50,100,200",
            "--replications", "60", "--seed", "11",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let slope = v["slope"].as_f64().unwrap();
    assert!(slope < 0.0, "slope {slope}");
}
