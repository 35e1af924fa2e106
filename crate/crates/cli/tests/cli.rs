use std::process::{Command, Output};

use serde_json::Value;

fn rtf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtf"))
        .args(args)
        .env_remove("RTF_PRECISION")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

const CENTRAL: [&str; 9] = ["verify", "--weight", "12", "--index", "1", "--s1", "0.07+0.11i", "--s2", "-0.13+0.05i"];

#[test]
fn verify_central_point() {
    let mut args = CENTRAL.to_vec();
    args.extend(["--tol", "1e-8"]);
    let out = rtf(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["residuals"]["rel_residual"].as_f64().unwrap() < 1e-8);
    for key in ["params", "spectral", "geometric", "residuals", "timings", "provenance"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["geometric"]["m2"].as_array().unwrap().len(), 4);
    assert_eq!(v["geometric"]["e"].as_array().unwrap().len(), 3);
    let back: rtf_core::verify::VerificationReport = serde_json::from_value(v).unwrap();
    assert!(back.pass);
}

#[test]
fn unsupported_weight_is_a_usage_error() {
    let out = rtf(&["verify", "--weight", "13", "--index", "1", "--s1", "0.1", "--s2", "0.2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported weight"));
}

#[test]
fn usage_errors() {
    assert_eq!(rtf(&["verify", "--weight", "12"]).status.code(), Some(2));
    assert_eq!(rtf(&["frobnicate"]).status.code(), Some(2));
    let mut bad_flag = CENTRAL.to_vec();
    bad_flag.push("--no-such-flag");
    assert_eq!(rtf(&bad_flag).status.code(), Some(2));
    let out = rtf(&["verify", "--weight", "12", "--index", "1", "--s1", "1+2", "--s2", "0"]);
    assert_eq!(out.status.code(), Some(2));
    // s1 − s2 integral away from the origin
    let out = rtf(&["verify", "--weight", "12", "--index", "1", "--s1", "0.3", "--s2", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rtf(&["corollary", "--weight", "12", "--index-range", "4..2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(rtf(&["--help"]).status.code(), Some(0));
}

#[test]
fn failure_exit_code_when_tolerance_unreachable() {
    let mut args = CENTRAL.to_vec();
    args.extend(["--tol", "1e-18", "--series-tol", "1e-19"]);
    let out = rtf(&args);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn computation_error_exit_code() {
    // a series cap this small cannot certify the tail
    let mut args = CENTRAL.to_vec();
    args.extend(["--series-cap", "10"]);
    let out = rtf(&args);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "convergence");
    assert_eq!(v["pass"], false);
}

#[test]
fn corollary_forced_zero_range() {
    let out = rtf(&["corollary", "--weight", "18", "--index-range", "1..5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 5);
    for r in reports {
        assert_eq!(r["pass"], true);
        assert_eq!(r["residuals"]["criterion"], "absolute");
        assert_eq!(r["check"], "corollary");
    }
}

#[test]
fn precision_from_environment_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_rtf"))
        .args(CENTRAL)
        .env("RTF_PRECISION", "double-double")
        .output()
        .unwrap();
    assert_eq!(json(&out)["provenance"]["precision"], "double-double");
    let mut args = CENTRAL.to_vec();
    args.extend(["--precision", "double"]);
    let out = Command::new(env!("CARGO_BIN_EXE_rtf"))
        .args(&args)
        .env("RTF_PRECISION", "double-double")
        .output()
        .unwrap();
    assert_eq!(json(&out)["provenance"]["precision"], "double");
    let out = Command::new(env!("CARGO_BIN_EXE_rtf")).args(CENTRAL).env("RTF_PRECISION", "quad").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qexp_build_inspect_and_use() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k12.qexp");
    let p = path.to_str().unwrap();
    let out = rtf(&["qexp", "build", "--weight", "12", "--terms", "2000", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let built = json(&out);
    let out = rtf(&["qexp", "inspect", p, "--head", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["weight"], 12);
    assert_eq!(v["terms"], 2000);
    assert_eq!(v["head"], serde_json::json!(["1", "-24", "252"]));
    assert_eq!(v["cache_id"], built["cache_id"]);

    let mut args = CENTRAL.to_vec();
    args.extend(["--cache", p]);
    let out = rtf(&args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["provenance"]["coefficient_cache_id"], built["cache_id"]);

    std::fs::write(dir.path().join("broken.qexp"), "garbage").unwrap();
    let out = rtf(&["qexp", "inspect", dir.path().join("broken.qexp").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scan_writes_csv_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = rtf(&[
        "scan",
        "--weights",
        "12,18",
        "--index-range",
        "1..2",
        "--include-origin",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 2 * 3);
    assert!(lines[0].contains("spectral_re") && lines[0].contains("spectral_im"));
}

#[test]
fn scan_is_reproducible() {
    let args = ["scan", "--weights", "16", "--index-range", "1..3", "--shift", "0.21+0.1i;-0.05-0.3i"];
    let strip = |mut v: Value| {
        for r in v.as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("timings");
        }
        v
    };
    let a = strip(json(&rtf(&args)));
    let b = strip(json(&rtf(&args)));
    assert_eq!(a, b);
    assert_eq!(a.as_array().unwrap().len(), 3);
}

#[test]
fn oracle_suites() {
    let out = rtf(&["oracle", "special"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["checks"].as_array().unwrap().len(), 6);
    let out = rtf(&["oracle", "orbital"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["checks"].as_array().unwrap().len() >= 6);
}
