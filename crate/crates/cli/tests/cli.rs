use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use widthplan_cli::bench::{run_suite, Manifest};
use widthplan_cli::report::{read_csv, RunRecord, SuiteReport};
use widthplan_cli::load_task;

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_widthplan")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn record(out: &Output) -> RunRecord {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn solve_writes_a_plan_that_replays() {
    let dir = tempfile::tempdir().unwrap();
    let plan_path = dir.path().join("plan.txt");
    let (d, p) = (corpus("blocksworld/domain.pddl"), corpus("blocksworld/p03.pddl"));
    let out = run(&["solve", path(&d), path(&p), "--algo", "siw", "--plan", path(&plan_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rec = record(&out);
    assert_eq!(rec.outcome.as_str(), "solved");

    let task = load_task(&d, &p).unwrap();
    let text = std::fs::read_to_string(&plan_path).unwrap();
    let ids: Vec<usize> = text
        .lines()
        .map(|name| task.actions().iter().position(|a| a.name == name).unwrap_or_else(|| panic!("{name}")))
        .collect();
    assert_eq!(ids.len(), rec.plan_length.unwrap());
    let (end, cost) = task.validate_plan(&ids).unwrap();
    assert!(task.is_goal(&end));
    assert_eq!(Some(cost), rec.cost);
}

#[test]
fn exit_codes() {
    let d = corpus("toys/unsolvable/domain.pddl");
    let p = corpus("toys/unsolvable/p01.pddl");
    let out = run(&["solve", path(&d), path(&p), "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(record(&out).outcome.as_str(), "exhausted");

    let out = run(&["solve", path(&d), "/no/such/problem.pddl"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["control", "nosuchenv"]).status.code(), Some(2));
    assert_eq!(run(&["solve", path(&d), path(&p), "--algo", "dfs"]).status.code(), Some(2));
    // a width bound of zero is meaningless
    assert_eq!(run(&["solve", path(&d), path(&p), "--k", "0"]).status.code(), Some(2));
}

#[test]
fn parse_errors_name_file_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.pddl");
    std::fs::write(&bad, "(define (problem x)\n  (:domain blocksworld)\n  (:objects a)\n  (:init (clear a)\n").unwrap();
    let out = run(&["solve", path(&corpus("blocksworld/domain.pddl")), path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    let prefix = format!("{}:", bad.display());
    let at = err.find(&prefix).unwrap_or_else(|| panic!("{err}"));
    let rest: Vec<&str> = err[at + prefix.len()..].splitn(3, ':').collect();
    assert!(rest[0].parse::<usize>().is_ok() && rest[1].parse::<usize>().is_ok(), "{err}");
}

#[test]
fn dual_reports_its_phase() {
    let out = run(&[
        "solve",
        path(&corpus("toys/latch/domain.pddl")),
        path(&corpus("toys/latch/p01.pddl")),
        "--algo",
        "bfws",
        "--variant",
        "dual",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(record(&out).phase.as_deref(), Some("bfws"));
}

#[test]
fn record_json_round_trips_and_rejects_unknown_fields() {
    let out = run(&["solve", path(&corpus("gripper/domain.pddl")), path(&corpus("gripper/p01.pddl")), "--algo", "siw"]);
    let rec = record(&out);
    let again: RunRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
    assert_eq!(rec, again);
    let mut v = serde_json::to_value(&rec).unwrap();
    v["surprise"] = serde_json::json!(1);
    assert!(serde_json::from_value::<RunRecord>(v).is_err());
}

#[test]
fn empty_suite_has_no_rate() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("empty.toml");
    std::fs::write(&m, "[[algos]]\nalgo = \"iw\"\nk = 1\n").unwrap();
    let out = run(&["bench", path(&m)]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["total"], 0);
    assert_eq!(report["solve_rate"], serde_json::Value::Null);
    assert_eq!(report["solve_rate_exact"], "n/a");
}

fn small_manifest(dir: &Path) -> PathBuf {
    let m = dir.join("suite.toml");
    let text = format!(
        "split_goals = true\noracle = true\n\n[[instances]]\ndomain = {:?}\nproblems = [{:?}, {:?}]\n\n\
         [[algos]]\nalgo = \"iw\"\nk = 1\n\n[[algos]]\nalgo = \"iw\"\nk = 2\n",
        path(&corpus("blocksworld/domain.pddl")),
        path(&corpus("blocksworld/p01.pddl")),
        path(&corpus("blocksworld/p04.pddl")),
    );
    std::fs::write(&m, text).unwrap();
    m
}

#[test]
fn bench_csv_agrees_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let m = small_manifest(dir.path());
    let (json, csv) = (dir.path().join("r.json"), dir.path().join("r.csv"));
    let out = run(&["bench", path(&m), "--out", path(&json), "--csv", path(&csv)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: SuiteReport = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let rows = read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), report.records.len());
    for (row, rec) in rows.iter().zip(&report.records) {
        assert_eq!(*row, rec.csv_row());
    }
}

#[test]
fn split_goals_and_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let m = Manifest::load(&small_manifest(dir.path())).unwrap();
    let a = run_suite(&m);
    // p01 has two goal fluents and p04 three, each run by two algorithms
    assert_eq!(a.records.len(), (2 + 3) * 2);
    let p01 = a.records.iter().filter(|r| r.instance.starts_with("blocksworld/p01.pddl#")).count();
    assert_eq!(p01, 2 * 2);

    let b = run_suite(&m);
    let strip = |r: &SuiteReport| r.records.iter().map(RunRecord::without_timing).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&b));

    let one = a.solved_set("iw(k=1)");
    let two = a.solved_set("iw(k=2)");
    assert!(one.is_subset(&two));
    assert!(a.per_algorithm["iw(k=1)"].solved <= a.per_algorithm["iw(k=2)"].solved);
}
