use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mcover"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// Exit code and the last stdout line as JSON.
fn run(args: &[&str]) -> (i32, Value, Vec<Value>) {
    let out = bin().args(args).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let last = lines.last().cloned().unwrap_or(Value::Null);
    (out.status.code().unwrap(), last, lines)
}

const SIX: &str = r#"{"version": 1, "space": {"kind": "explicit", "points": 6,
  "covers": [{"label": "singletons", "members": [[0], [1], [2], [3], [4], [5]]}]},
  "game": {"horizon": 5, "budgets": [1, 1, 1, 1, 1], "win": {"kind": "cover"}}}"#;

const FOUR: &str = r#"{"space": {"kind": "explicit", "points": 4,
  "covers": [{"members": [[0, 1], [2, 3]]}, {"members": [[0, 2], [1, 3]]}]}}"#;

#[test]
fn six_singletons_in_five_rounds_is_lost() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "six.json", SIX);
    let (code, report, _) = run(&["solve", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], "I-wins");
    // The refutation replays through `play`.
    let covers: Vec<String> = report["refutation"]["covers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.to_string())
        .collect();
    let (code, replay, rounds) = run(&["play", f.to_str().unwrap(), "--covers", &covers.join(",")]);
    assert_eq!(code, 1, "{replay}");
    assert_eq!(rounds.len(), 6);
    assert_eq!(replay["verdict"], "I-wins");
}

#[test]
fn six_rounds_suffice_and_the_policy_replays() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "six.json", SIX);
    let pol = dir.path().join("pol.json");
    let (code, report, _) = run(&["solve", f.to_str().unwrap(), "--horizon", "6", "--policy-out", pol.to_str().unwrap()]);
    assert_eq!(code, 0, "{report}");
    let a = run(&["play", f.to_str().unwrap(), "--horizon", "6", "--policy", pol.to_str().unwrap(), "--random", "--seed", "9"]);
    let b = run(&["play", f.to_str().unwrap(), "--horizon", "6", "--policy", pol.to_str().unwrap(), "--random", "--seed", "9"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1["transcript"], b.1["transcript"]);
}

#[test]
fn fingerprint_ignores_member_order() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", FOUR);
    let b = write(
        dir.path(),
        "b.json",
        r#"{"version":1,"space":{"kind":"explicit","points":4,"covers":[{"members":[[1,0],[3,2]]},{"members":[[2,0],[3,1]]}]}}"#,
    );
    let (_, ra, _) = run(&["make-space", a.to_str().unwrap()]);
    let (_, rb, _) = run(&["make-space", b.to_str().unwrap()]);
    assert_eq!(ra["fingerprint"], rb["fingerprint"]);
}

#[test]
fn union_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "four.json", FOUR);
    let (code, report, _) = run(&[
        "verify-combinator",
        "union",
        "--instance",
        f.to_str().unwrap(),
        "--horizon",
        "3",
        "--budget",
        "1",
        "--pieces",
        "0,1|2,3",
        "--oracle",
    ]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["verdict"], "Verified");
    assert_eq!(report["report"]["oracle_agrees"], true);
}

#[test]
fn one_cover_space_is_totally_bounded() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "six.json", SIX);
    let (code, report, _) = run(&["check-principle", f.to_str().unwrap(), "--principle", "totally-bounded"]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "Yes");
    assert_eq!(report["principle"], "totally-bounded");
    let (code, report, _) = run(&[
        "check-principle",
        f.to_str().unwrap(),
        "--principle",
        "totally-bounded",
        "--budget",
        "5",
    ]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], "No");
}

#[test]
fn lattice_checks_run_on_the_probe() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "z2.json",
        r#"{"space": {"kind": "lattice", "dim": 2, "norm": "max", "radii": [1, 3]}, "probe": {"kind": "box", "m": 4}}"#,
    );
    let (code, report, _) = run(&["compare-covers", f.to_str().unwrap(), "--u", "1", "--v", "0"]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["verdict"], "Verified-on-probe");
    let (code, report, _) = run(&["check-principle", f.to_str().unwrap(), "--principle", "centered"]);
    assert_eq!(code, 0, "{report}");
}

#[test]
fn errors_exit_three_with_a_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", r#"{"space": {"kind": "explicit", "points": "x", "covers": []}}"#);
    let (code, report, _) = run(&["solve", f.to_str().unwrap(), "--horizon", "1"]);
    assert_eq!(code, 3);
    assert_eq!(report["pointer"], "/space/points");
    let (code, _, _) = run(&["solve", "/nonexistent.json"]);
    assert_eq!(code, 3);
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn state_limit_is_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "six.json", SIX);
    let (code, report, _) = run(&["solve", f.to_str().unwrap(), "--limit-states", "3"]);
    assert_eq!(code, 2);
    assert_eq!(report["verdict"], "Unknown");
}

#[test]
fn corpus_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let (code, a, _) = run(&["corpus", "--max-points", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (_, b, _) = run(&["corpus", "--max-points", "3"]);
    assert_eq!(a["digest"], b["digest"]);
    assert_eq!(std::fs::read_dir(&out).unwrap().count() as u64, a["count"].as_u64().unwrap());
}

fn shipped(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances").join(name).to_str().unwrap().to_string()
}

/// Stdout with every `timings` object removed.
fn stable_stdout(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            if let Some(o) = v.as_object_mut() {
                o.remove("timings");
            }
            serde_json::to_string(&v).unwrap()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn reports_repeat_byte_for_byte() {
    let runs: Vec<Vec<String>> = vec![
        vec!["solve".into(), shipped("six_singletons.json")],
        vec!["play".into(), shipped("four_pairs.json"), "--random".into(), "--seed".into(), "9".into()],
        vec!["check-principle".into(), shipped("lattice_z2.json"), "--principle".into(), "centered".into()],
        vec!["verify-combinator".into(), "gamma-upgrade".into(), "--instance".into(), shipped("four_pairs.json"), "--horizon".into(), "5".into()],
        vec!["compare-covers".into(), shipped("path4_metric.json"), "--u".into(), "2".into(), "--v".into(), "0".into()],
    ];
    for args in runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = stable_stdout(&args);
        assert!(!a.is_empty(), "{args:?}");
        assert_eq!(a, stable_stdout(&args), "{args:?}");
    }
}
