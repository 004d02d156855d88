use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/care-robot/care-robot.scn")
}

fn praxis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_praxis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("praxis-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn one_step_writes_only_step_one() {
    let dir = scratch("one");
    let trace = dir.join("t.jsonl");
    let out = praxis(&[
        "--scenario",
        scenario().to_str().unwrap(),
        "--steps",
        "1",
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(!text.is_empty());
    assert!(text.lines().all(|l| l.ends_with("\"step\":1}")), "{text}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn parse_error_exits_with_one() {
    let dir = scratch("parse");
    std::fs::write(dir.join("bad.asp"), "+!g <- .").unwrap();
    std::fs::write(dir.join("bad.scn"), "agent(a, [\"bad.asp\"]).").unwrap();
    let out = praxis(&["--scenario", dir.join("bad.scn").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.asp"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn invariant_violation_exits_with_two() {
    let dir = scratch("inv");
    std::fs::write(
        dir.join("r.asp"),
        "!go.\n@go +!go <- read_newspaper[durative]; .sleep(3); read_newspaper[durative].",
    )
    .unwrap();
    std::fs::write(dir.join("r.scn"), "agent(r, [\"r.asp\"]).\nsteps(20).").unwrap();
    let out = praxis(&["--scenario", dir.join("r.scn").to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn compare_shows_talk_only_without_practice() {
    let dir = scratch("cmp");
    let trace = dir.join("t.jsonl");
    let out = praxis(&[
        "--scenario",
        scenario().to_str().unwrap(),
        "--compare",
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let (with, without) = stdout.split_once("== without practice ==").unwrap();
    assert!(!with.contains("talk"), "{with}");
    assert!(without.contains("talk"), "{without}");
    let with_trace = std::fs::read_to_string(&trace).unwrap();
    let without_trace = std::fs::read_to_string(dir.join("t.no-practice.jsonl")).unwrap();
    assert!(!with_trace.contains("\"action\":\"talk\""));
    assert!(without_trace.contains("\"action\":\"talk\""));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn compare_conflicts_with_no_practice() {
    let out = praxis(&[
        "--scenario",
        scenario().to_str().unwrap(),
        "--compare",
        "--no-practice",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
