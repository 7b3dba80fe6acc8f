use std::path::Path;
use std::process::Command;

fn robinstar(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_robinstar"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const PAIRED: &str = r#"{"N": 3, "h": [[0, 1], [0, -1], [0.5, 0]],
    "window": {"re_min": 0.1, "re_max": 30, "im_band": 2}, "n_range": [20, 44]}"#;

#[test]
fn malformed_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", "{ \"N\": 3, ");
    let (code, _, err) = robinstar(&[
        "spectrum",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("invalid JSON"), "{err}");

    let cfg = write(
        dir.path(),
        "short.json",
        r#"{"N": 2, "h": [[1, 0]], "window": {"re_min": 0.1, "re_max": 5, "im_band": 1}}"#,
    );
    assert_eq!(robinstar(&["spectrum", "--config", &cfg]).0, 2);
    assert_eq!(robinstar(&["spectrum"]).0, 2);
    assert_eq!(robinstar(&["nonsense"]).0, 2);
}

#[test]
fn empty_window_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "empty.json",
        r#"{"N": 2, "h": [[1, 0], [2, 0]], "window": {"re_min": 3, "re_max": 3, "im_band": 1}}"#,
    );
    let (code, _, _) = robinstar(&[
        "spectrum",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(csv, "z_re,z_im,lambda_re,lambda_im,multiplicity,residual\n");
}

#[test]
fn manifest_reruns_the_same_search() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let cfg = write(dir.path(), "paired.json", PAIRED);
    let (code, _, _) = robinstar(&[
        "spectrum",
        "--config",
        &cfg,
        "--out",
        first.to_str().unwrap(),
        "--tol",
        "1e-11",
    ]);
    assert_eq!(code, 0);
    let manifest = first.join("manifest.json");
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["partial"], false);
    assert_eq!(m["config"]["tolerances"]["root_tol"], 1e-11);

    let (code, _, _) = robinstar(&[
        "spectrum",
        "--config",
        manifest.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        std::fs::read(first.join("spectrum.csv")).unwrap(),
        std::fs::read(second.join("spectrum.csv")).unwrap()
    );
}

#[test]
fn symmetry_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let read = || -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("symmetry.json")).unwrap())
            .unwrap()
    };

    let cfg = write(dir.path(), "paired.json", PAIRED);
    assert_eq!(
        robinstar(&["symmetry", "--config", &cfg, "--out", out]).0,
        0
    );
    let r = read();
    assert_eq!(r["report"]["verdict"], "PT_SYMMETRIC");
    assert_eq!(r["report"]["pairing"]["map"], serde_json::json!([1, 0, 2]));

    let cfg = write(
        dir.path(),
        "unpaired.json",
        r#"{"N": 4, "h": [[1, 0], [0, 1], [0, 1], [0, -1]], "window": {"re_min": 0.1, "re_max": 30, "im_band": 2}}"#,
    );
    assert_eq!(
        robinstar(&["symmetry", "--config", &cfg, "--out", out]).0,
        0
    );
    let r = read();
    assert_eq!(r["report"]["verdict"], "NOT_PT_SYMMETRIC");
    assert!(!r["report"]["unpaired_roots"].as_array().unwrap().is_empty());

    let cfg = write(
        dir.path(),
        "real.json",
        r#"{"N": 2, "h": [[0.5, 0], [-2, 0]], "window": {"re_min": 0.1, "re_max": 30, "im_band": 2}}"#,
    );
    assert_eq!(
        robinstar(&["symmetry", "--config", &cfg, "--out", out]).0,
        0
    );
    let r = read();
    assert_eq!(r["report"]["verdict"], "PT_SYMMETRIC");
    assert_eq!(r["report"]["pairing"]["map"], serde_json::json!([0, 1]));

    // too few roots for a verdict
    let cfg = write(
        dir.path(),
        "small.json",
        r#"{"N": 2, "h": [[0.5, 0], [-2, 0]], "window": {"re_min": 0.1, "re_max": 4, "im_band": 1}}"#,
    );
    assert_eq!(
        robinstar(&["symmetry", "--config", &cfg, "--out", out]).0,
        3
    );
    assert_eq!(read()["report"]["verdict"], "INCONCLUSIVE");
}

#[test]
fn asymptotics_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "paired.json", PAIRED);
    let (code, _, _) = robinstar(&[
        "asymptotics",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("asymptotics.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,z_re,z_im,predict_re,predict_im,abs_err,abs_err_n7"
    );
    assert_eq!(lines.count(), 25);
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("asymptotics.json")).unwrap(),
    )
    .unwrap();
    let a1 = summary["coefficients"]["a1"][0].as_f64().unwrap();
    let fitted = summary["fit"]["a1_hat"][0].as_f64().unwrap();
    assert!((a1 - 0.5 / (3.0 * std::f64::consts::PI)).abs() < 1e-15);
    assert!((fitted - a1).abs() < 1e-6);

    let no_range = write(
        dir.path(),
        "norange.json",
        r#"{"N": 1, "h": [[1, 0]], "window": {"re_min": 0.1, "re_max": 4, "im_band": 1}}"#,
    );
    assert_eq!(robinstar(&["asymptotics", "--config", &no_range]).0, 2);
}

#[test]
fn verify_reports_every_suite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "v.json",
        r#"{"N": 1, "h": [[0, 0]], "window": {"re_min": 0.1, "re_max": 4, "im_band": 1}, "verify_samples": 50}"#,
    );
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        robinstar(&["verify", "--config", &cfg, "--out", out, "--seed", "9"]).0,
        0
    );
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(r["all_passed"], true);
    assert_eq!(r["seed"], 9);
    assert_eq!(r["suites"].as_array().unwrap().len(), 11);
    assert!(r["suites"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["passed"] == 50));
}
