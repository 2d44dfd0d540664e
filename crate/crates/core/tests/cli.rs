use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use toric::cli::{exit_code, run, EXIT_CHECK_FAILED, EXIT_INVARIANT, EXIT_MALFORMED, EXIT_OK};
use toric::gallery::get_fan;
use toric::{Error, Fan};

fn toric(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("toric").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn write_gallery(dir: &Path, name: &str, params: &[&str]) -> String {
    let path = dir.join(format!("{name}.json"));
    let path_s = path.to_str().unwrap().to_string();
    let mut args = vec!["gallery", name];
    args.extend(params);
    args.extend(["--out", &path_s]);
    let (code, _, _) = toric(&args);
    assert_eq!(code, EXIT_OK);
    path_s
}

#[test]
fn check_p2() {
    let dir = tempfile::tempdir().unwrap();
    let p2 = write_gallery(dir.path(), "pn", &["2"]);
    let (code, out, err) = toric(&["check", &p2]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    for (k, expected) in [("smooth", true), ("complete", true), ("projective", true)] {
        assert_eq!(v[k], expected);
    }
    assert_eq!(v["rho"], 1);
    assert!(err.contains("projective"));
}

#[test]
fn check_oda_reports_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let oda = write_gallery(dir.path(), "oda3", &[]);
    let (code, out, _) = toric(&["check", &oda]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["projective"], false);
    assert!(!v["verdict"]["certificate"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_oda_curve() {
    let dir = tempfile::tempdir().unwrap();
    let oda = write_gallery(dir.path(), "oda3", &[]);
    let (code, out, _) = toric(&["analyze", &oda, "--curve", "4,1"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["findings"][0]["kind"], "ForbiddenFlip");
}

#[test]
fn mori_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_gallery(dir.path(), "hirzebruch", &["1"]);
    let (code, out, _) = toric(&["mori", &f]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["walls"].as_array().unwrap().len(), 4);
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["walls"][1]["contraction"]["kind"]["type"], "birational");
}

#[test]
fn blowup_then_blowdown() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write_gallery(dir.path(), "pn", &["3"]);
    let (code, out, _) = toric(&["blowup", &p3, "--center", "0,1"]);
    assert_eq!(code, EXIT_OK);
    let blown = dir.path().join("b.json");
    fs::write(&blown, &out).unwrap();
    let (code, out, _) = toric(&[
        "blowdown",
        blown.to_str().unwrap(),
        "--ray",
        "4",
        "--sum",
        "0,1",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        Fan::from_json_str(&out).unwrap(),
        get_fan("pn", &[3]).unwrap().fan
    );
    let (code, _, err) = toric(&[
        "blowdown",
        blown.to_str().unwrap(),
        "--ray",
        "4",
        "--sum",
        "0,2",
    ]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(err.contains("error"));
}

#[test]
fn ewald_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = write_gallery(dir.path(), "pn", &["1"]);
    let (code, out, _) = toric(&["ewald", "suspend", &p1, "--v", "-1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(Fan::from_json_str(&out).unwrap().num_rays(), 4);
    let (code, out, _) = toric(&["ewald", "blowdown", &p1, "--ray", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(Fan::from_json_str(&out)
        .unwrap()
        .is_lattice_isomorphic(&get_fan("pn", &[2]).unwrap().fan));
    let oda = write_gallery(dir.path(), "oda3", &[]);
    let (code, out, _) = toric(&["ewald", "tower", &oda, "--curve", "1,4", "--steps", "1"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["fan"]["dim"], 4);
}

#[test]
fn gallery_accepts_negative_parameters() {
    let (code, out, _) = toric(&["gallery", "xab", "1", "-1"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["params"], serde_json::json!([1, -1]));
    assert_eq!(v["notes"]["projective"], true);
}

#[test]
fn malformed_and_invalid_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"dim\": 2, \"rays\": [[1,0]]").unwrap();
    assert_eq!(toric(&["check", bad.to_str().unwrap()]).0, EXIT_MALFORMED);
    assert_eq!(toric(&["check", "/nonexistent/fan.json"]).0, EXIT_MALFORMED);
    assert_eq!(toric(&["frobnicate"]).0, EXIT_MALFORMED);
    assert_eq!(toric(&["gallery", "nope"]).0, EXIT_MALFORMED);
    let half = dir.path().join("half.json");
    fs::write(
        &half,
        r#"{"dim":2,"rays":[[1,0],[0,1],[-1,0]],"max_cones":[[0,1],[1,2]]}"#,
    )
    .unwrap();
    let (code, out, _) = toric(&["check", half.to_str().unwrap()]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert_eq!(json(&out)["complete"], false);
    assert_eq!(
        toric(&["mori", half.to_str().unwrap()]).0,
        EXIT_CHECK_FAILED
    );
}

#[test]
fn exit_code_mapping() {
    assert_eq!(
        exit_code(&Error::InvariantViolation("x".into())),
        EXIT_INVARIANT
    );
    assert_eq!(
        exit_code(&Error::MalformedInput("x".into())),
        EXIT_MALFORMED
    );
    assert_eq!(exit_code(&Error::NotAWall("x".into())), EXIT_CHECK_FAILED);
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let oda = write_gallery(dir.path(), "oda3", &[]);
    let first = toric(&["mori", &oda]).1;
    let second = toric(&["mori", &oda]).1;
    assert_eq!(first, second);
    let a = toric(&["analyze", &oda, "--curve", "0,6"]).1;
    let b = toric(&["analyze", &oda, "--curve", "6,0"]).1;
    assert_eq!(a, b);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_toric");
    let out = Command::new(exe)
        .args(["gallery", "pn", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&String::from_utf8(out.stdout).unwrap())["fan"]["rays"].is_array());
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "not json").unwrap();
    let out = Command::new(exe)
        .args(["check", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
