use std::path::Path;
use std::process::{Command, Output};

fn batsp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_batsp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn batsp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_is_byte_identical_without_timings() {
    let dir = tempfile::tempdir().unwrap();
    let gen = batsp(&["gen", "--n", "8", "--seed", "11", "--out", "inst.json"], dir.path());
    assert!(gen.status.success());
    let a = batsp(&["solve", "inst.json", "--seed", "3", "--no-timings"], dir.path());
    let b = batsp(&["solve", "inst.json", "--seed", "3", "--no-timings"], dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"schema\": \"batsp-report/1\""));
}

#[test]
fn verify_round_trip_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    batsp(&["gen", "--n", "7", "--seed", "5", "--out", "inst.json"], dir.path());
    let solve = batsp(
        &["solve", "inst.json", "--no-timings", "--out", "report.json"],
        dir.path(),
    );
    assert!(solve.status.success());
    let ok = batsp(&["verify", "inst.json", "report.json"], dir.path());
    assert!(ok.status.success());
    assert_eq!(stdout(&ok).trim(), "pass");

    // Lowering the bottleneck field must trip the recomputation check.
    let path = dir.path().join("report.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["tour"]["bottleneck"] = serde_json::json!(0.5);
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let bad = batsp(&["verify", "inst.json", "report.json"], dir.path());
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"name\": \"x\"").unwrap();
    let r = batsp(&["solve", "bad.json"], dir.path());
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn triangle_violation_rejected_without_closure() {
    let dir = tempfile::tempdir().unwrap();
    let doc = serde_json::json!({
        "name": "viol",
        "n": 3,
        "costs": [[0.0, 1.0, 10.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]
    });
    std::fs::write(dir.path().join("v.json"), doc.to_string()).unwrap();
    let rejected = batsp(&["solve", "v.json"], dir.path());
    assert_eq!(rejected.status.code(), Some(2));
    let repaired = batsp(&["solve", "v.json", "--closure", "--summary", "--no-timings"], dir.path());
    assert!(repaired.status.success());
}

#[test]
fn size_limit_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    batsp(&["gen", "--n", "9", "--seed", "1", "--out", "inst.json"], dir.path());
    let r = Command::new(env!("CARGO_BIN_EXE_batsp"))
        .args(["solve", "inst.json"])
        .env("BATSP_MAX_N", "8")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(4));
    let cap = batsp(&["oracle", "inst.json", "--oracle-cap", "5"], dir.path());
    assert_eq!(cap.status.code(), Some(4));
}

#[test]
fn tsplib_input_solves() {
    let dir = tempfile::tempdir().unwrap();
    let text = "NAME: t4\nTYPE: ATSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 2 3 3\n2 0 2 3\n3 2 0 2\n2 3 2 0\nEOF\n";
    std::fs::write(dir.path().join("t4.atsp"), text).unwrap();
    let r = batsp(&["solve", "t4.atsp", "--summary", "--no-timings"], dir.path());
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let line = stdout(&r);
    assert!(line.starts_with("4\t"), "summary line: {line}");
}

#[test]
fn construction_verifiers_pass() {
    let dir = tempfile::tempdir().unwrap();
    let e = batsp(&["verify-construction", "extreme-point", "--k", "2"], dir.path());
    assert!(e.status.success());
    let c = batsp(
        &["verify-construction", "counterexample", "--k", "1", "--p", "1"],
        dir.path(),
    );
    assert!(c.status.success());
    let bad = batsp(&["verify-construction", "extreme-point", "--k", "1"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn bench_emits_rows() {
    let dir = tempfile::tempdir().unwrap();
    let r = batsp(&["bench", "--n", "6,7", "--seeds", "2"], dir.path());
    assert!(r.status.success());
    let out = stdout(&r);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5); // header + 4 runs
    assert!(lines[0].starts_with("n\tseed"));
}
