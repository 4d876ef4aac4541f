use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monobound")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn enumerate_d4_prints_header_and_seven_orders() {
    let o = run(&["enumerate", "--d", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[0], "7 classes (98 orders up to reversal, symmetry group of order 14)");
}

#[test]
fn enumerate_writes_classes_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["enumerate", "--d", "4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("classes_d4.txt")).unwrap();
    assert_eq!(text, std::fs::read_to_string(fixtures().join("classes_d4.txt")).unwrap());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("classes_d4.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["parameters"]["d"], "4");
}

#[test]
fn check_cert_accepts_fixtures_and_rejects_corruption() {
    let good = fixtures().join("nr1_4.proof");
    assert_eq!(run(&["check-cert", good.to_str().unwrap()]).status.code(), Some(0));

    let text = std::fs::read_to_string(&good).unwrap();
    let bad = text.replacen("\"signs\": \"+000\"", "\"signs\": \"-000\"", 1);
    assert_ne!(bad, text);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.proof");
    std::fs::write(&path, bad).unwrap();
    let o = run(&["check-cert", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).starts_with("INVALID"));

    let missing = dir.path().join("missing.proof");
    assert_ne!(run(&["check-cert", missing.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn verify_checks_class_membership() {
    let r = fixtures().join("r1_4.realization.json");
    let r = r.to_str().unwrap();
    assert_eq!(run(&["verify", r]).status.code(), Some(0));
    assert_eq!(run(&["verify", r, "--class", "R1_4"]).status.code(), Some(0));
    assert_eq!(run(&["verify", r, "--class", "R2_4"]).status.code(), Some(4));
}

#[test]
fn certify_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["certify", "--class", "NR2_4", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let proof = dir.path().join("nr2_4.proof");
    assert_eq!(run(&["check-cert", proof.to_str().unwrap()]).status.code(), Some(0));
    assert!(dir.path().join("nr2_4.manifest.json").exists());
    let o = run(&["certify", "--class", "R1_4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn search_monotone_replays_the_fixture() {
    let f = fixtures().join("monotone_d6.realization.json");
    let o = run(&["search-monotone", "--d", "6", "--target", "26", "--fixture", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("longest monotone path"));
}

#[test]
fn report_summarizes_the_fixtures() {
    let o = run(&["report", "--fixtures", fixtures().to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("d=4: classes=7 (98 orders up to reversal), realizable=4, certified non-realizable=3"));
    assert!(out.contains("bound: 14 ≤ M(4,7) ≤ 14"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["enumerate"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
