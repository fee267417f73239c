use std::path::Path;
use std::process::Command;

use hqd_lab::cli::run;

fn hqd(args: &[&str]) -> i32 {
    std::env::set_var("HQD_CACHE_DIR", concat!(env!("CARGO_TARGET_TMPDIR"), "/hqd-cache"));
    run(std::iter::once("hqd").chain(args.iter().copied()))
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn body_points_and_d2_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    assert_eq!(hqd(&["body", "build", "--spec", r#"{"kind":"disk","radius":0.25}"#, "--out", &p("disk.json")]), 0);
    assert_eq!(hqd(&["points", "generate", "--family", r#"{"family":"random"}"#, "--n", "16", "--seed", "3", "--out", &p("P.csv")]), 0);
    let code = hqd(&[
        "d2", "compute", "--body", &p("disk.json"), "--points", &p("P.csv"), "--method", "spectral", "--radius", "256", "--out", &p("est.json"),
    ]);
    assert_eq!(code, 0);
    let est = json(&dir.path().join("est.json"));
    assert_eq!(est["method"], "spectral");
    assert_eq!(est["n"], 16);
    assert!(est["value"].as_f64().unwrap() > 0.0);
    // Same inputs, same bits.
    hqd(&["--threads", "3", "d2", "compute", "--body", &p("disk.json"), "--points", &p("P.csv"), "--radius", "256", "--out", &p("est2.json")]);
    assert_eq!(est["value"], json(&dir.path().join("est2.json"))["value"]);
}

#[test]
fn body_commands_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    assert_eq!(hqd(&["body", "build", "--spec", r#"{"kind":"monomial","beta":1.5}"#, "--out", &p("m.json"), "--windows"]), 0);
    assert!(json(&dir.path().join("m.json"))["windows"].is_object());
    assert_eq!(hqd(&["body", "export", "--body", &p("m.json"), "--out", &p("summary.json")]), 0);
    let s = json(&dir.path().join("summary.json"));
    assert!((s["total_turning"].as_f64().unwrap() - std::f64::consts::TAU).abs() < 1e-9);
    assert_eq!(hqd(&["body", "sample", "--body", &p("m.json"), "--count", "64", "--out", &p("b.csv")]), 0);
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    // Closed loop: the first sample repeats at the end, plus piece breaks.
    assert!(csv.lines().count() >= 66, "{}", csv.lines().count());
    assert!(csv.starts_with("s,x,y,tangent_angle,curvature"));
    assert_eq!(hqd(&["chord", "sweep", "--body", &p("m.json"), "--theta", "1.5707963267948966,0.3", "--count", "4", "--out", &p("k.csv")]), 0);
    assert_eq!(std::fs::read_to_string(dir.path().join("k.csv")).unwrap().lines().count(), 9);
    assert_eq!(hqd(&["ft", "eval", "--body", &p("m.json"), "--xi", "3,-4", "--out", &p("ft.json")]), 0);
    assert!(json(&dir.path().join("ft.json"))["w"].as_f64().unwrap() > 0.0);
    assert_eq!(hqd(&["ft", "table", "--body", &p("m.json"), "--radius", "8", "--out", &p("w.csv")]), 0);
    assert!(std::fs::read_to_string(dir.path().join("w.csv")).unwrap().lines().count() > 100);
}

#[test]
fn scaling_and_demo_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"name":"disk","body":{"kind":"disk","radius":0.25},"points":{"family":"square_lattice"},
            "schedule":{"geometric":{"lo":64,"hi":4096,"count":4}},"method":{"spectral":{"radius_factor":16}},
            "target":{"exponent":0.5,"tolerance":0.1},"output":"out"}"#,
    )
    .unwrap();
    assert_eq!(hqd(&["scaling", "run", "--config", &cfg.to_string_lossy()]), 0);
    let out = dir.path().join("out");
    let r = json(&out.join("report.json"));
    assert_eq!(r["passed"], true);
    assert_eq!(r["config"]["name"], "disk");
    assert!(std::fs::read_to_string(out.join("plot.svg")).unwrap().starts_with("<svg"));
    assert!(std::fs::read_to_string(out.join("records.csv")).unwrap().starts_with("n,d2,error"));
    let nested = dir.path().join("nested");
    assert_eq!(hqd(&["demo", "nested", "--out", &nested.to_string_lossy()]), 0);
    assert_eq!(json(&nested.join("report.json"))["passed"], true);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json").to_string_lossy().into_owned();
    assert_eq!(hqd(&["d2", "compute", "--body", &missing, "--points", &missing]), 2);
    assert_eq!(hqd(&["verify", "nonsense"]), 2);
    assert_eq!(hqd(&["scaling", "run", "--config", &missing]), 2);
    let body = dir.path().join("d.json").to_string_lossy().into_owned();
    hqd(&["body", "build", "--spec", r#"{"kind":"disk","radius":0.25}"#, "--out", &body]);
    let pts = dir.path().join("P.csv").to_string_lossy().into_owned();
    hqd(&["points", "generate", "--family", r#"{"family":"random"}"#, "--n", "4", "--out", &pts]);
    // Spectral without a radius names the flag.
    assert_eq!(hqd(&["d2", "compute", "--body", &body, "--points", &pts]), 2);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_hqd");
    let ok = Command::new(exe).args(["verify", "l1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("\"passed\": true"));
    let bad = Command::new(exe).args(["body", "build"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--spec"));
}
