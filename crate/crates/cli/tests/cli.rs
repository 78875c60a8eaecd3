use std::fs;
use std::path::Path;
use std::process::Command;

use poncelet_cli::report::Report;

fn poncelet(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_poncelet"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn focal_x1_verifies_with_sin_half_sum_row() {
    let (code, stdout, _) = poncelet(&[
        "verify",
        "--family",
        "focal-x1",
        "--a",
        "2",
        "--b",
        "1",
        "--samples",
        "64",
    ]);
    assert_eq!(code, 0);
    let report = Report::from_json(&stdout).unwrap();
    assert!(report.passed());
    assert!(report
        .reports
        .iter()
        .any(|r| r.id.to_string() == "SinHalfSum"));
}

#[test]
fn wrong_axis_order_is_a_config_error() {
    let (code, _, stderr) = poncelet(&["verify", "--family", "iso-x7", "--a", "1", "--b", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("a > b"));
}

#[test]
fn perturbed_caustic_fails_the_gate() {
    let (code, stdout, _) = poncelet(&[
        "verify",
        "--family",
        "dual",
        "--a",
        "2",
        "--b",
        "1",
        "--perturb",
        "1e-3",
    ]);
    assert_eq!(code, 1);
    let report = Report::from_json(&stdout).unwrap();
    assert!(!report.porism_certification.passed);
    assert!(report.reports.is_empty());
}

#[test]
fn too_few_samples_is_a_config_error() {
    let (code, _, _) = poncelet(&["verify", "--family", "dual", "--samples", "4"]);
    assert_eq!(code, 2);
}

#[test]
fn json_report_round_trips_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, _, _) = poncelet(&[
        "verify",
        "--family",
        "focal-x4",
        "--out-dir",
        d,
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(dir.path().join("report.json")).unwrap();
    let report = Report::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text);
    let again = Report::from_json(&report.to_json()).unwrap();
    assert_eq!(again, report);
    for (a, b) in report.reports.iter().zip(&again.reports) {
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.max_abs_deviation.to_bits(), b.max_abs_deviation.to_bits());
    }
}

#[test]
fn config_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"family":{"kind":"chapple","big_r":2.0,"r":0.9},"samples":32}"#,
    )
    .unwrap();
    let (code, stdout, _) = poncelet(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let report = Report::from_json(&stdout).unwrap();
    assert_eq!(report.config.samples, 32);

    fs::write(&cfg, r#"{"family":{"kind":"iso-x7","a":1.0,"b":2.0}}"#).unwrap();
    let (code, _, _) = poncelet(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
}

fn svg_of(args: &[&str], dir: &Path, name: &str) -> String {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out-dir", dir.to_str().unwrap(), "--format", "svg"]);
    let (code, _, _) = poncelet(&full);
    assert_eq!(code, 0);
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn svg_output_is_deterministic() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["locus", "--family", "focal-x4", "--center", "X3"];
    let a = svg_of(&args, d1.path(), "locus.svg");
    let b = svg_of(&args, d2.path(), "locus.svg");
    assert_eq!(a, b);
    assert!(a.contains(r#"viewBox="-2.400000 -1.200000 4.800000 2.400000""#));
    assert!(a.contains(r#"class="marker" cx="0.000000" cy="0.000000""#));
    assert!(a.contains(r#"class="locus-fit""#));
}

#[test]
fn x20_locus_is_twice_the_x3_locus() {
    let (code, stdout, _) = poncelet(&["locus", "--family", "focal-x4", "--center", "X20"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let ratio = &v["axisRatios"][0];
    assert_eq!(ratio["reference"], "X3");
    assert!((ratio["major"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert!((ratio["minor"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn stationary_center_has_point_locus() {
    let (code, stdout, _) = poncelet(&["locus", "--family", "iso-x2", "--center", "X2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["locus"]["shape"], "degenerate-point");
}

#[test]
fn tangent_sum_probe_on_brocard_pair() {
    let (code, stdout, _) = poncelet(&[
        "probe",
        "--kind",
        "polar-tan-half-sum",
        "--family",
        "brocard",
        "--seed-triangle",
        "0,0,3,0,0.8,1.7",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["maxAbsDeviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["conserved"], true);
}

#[test]
fn tangent_sum_probe_rejects_non_porisms() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pair.json");
    fs::write(
        &file,
        r#"{"outer":{"axis-ellipse":{"center":{"x":0.0,"y":0.0},"a":2.0,"b":1.0}},
            "caustic":{"coefficients":[1.0,0.0,1.0,0.0,0.0,-0.09]},"n":3}"#,
    )
    .unwrap();
    let (code, _, stderr) = poncelet(&[
        "probe",
        "--kind",
        "polar-tan-half-sum",
        "--pair-file",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("porism"), "{stderr}");
}

#[test]
fn x4_scan_reports_without_failing() {
    let (code, stdout, _) = poncelet(&[
        "probe",
        "--kind",
        "x4-stationary-scan",
        "--trials",
        "50",
        "--seed",
        "3",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["trials"], 50);
    assert_eq!(v["controls"].as_array().unwrap().len(), 3);
}
