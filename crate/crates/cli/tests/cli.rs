use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn padicf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padicf"))
        .args(args)
        .output()
        .expect("run padicf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_rows(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

#[test]
fn expand_period_twelve() {
    let o = padicf(&["expand", "--p", "5", "--quad", "19,-13,6,1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with(
        "[(4/5, -11/5, -3/5, -4/25, 274/125, -4/25, -3/5, -11/5, 4/5, 1/5, 24/25, 1/5)*]"
    ));
}

#[test]
fn expand_rational_and_open() {
    let o = padicf(&[
        "expand",
        "--p",
        "3",
        "--rational",
        "10/3",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_rows(&o)[0]["text"], "[1/3, 1/3]");

    let o = padicf(&[
        "expand",
        "--p",
        "5",
        "--quad",
        "89,8,1,1,3",
        "--max-steps",
        "14",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let row = &json_rows(&o)[0];
    assert_eq!(row["expansion"]["preperiod"].as_array().unwrap().len(), 14);
    assert_eq!(row["expansion"]["status"]["kind"], "open");
}

#[test]
fn parse_errors_exit_one() {
    for args in [
        &["expand", "--p", "5", "--quad", "89,8,1"][..],
        &["expand", "--p", "4", "--quad", "89,8,1,1,3"],
        &["expand", "--quad", "89,8,1,1,3"],
        &["expand", "--p", "5", "--bogus"],
    ] {
        let o = padicf(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn construct_range_and_failure() {
    let o = padicf(&[
        "construct",
        "--p",
        "5",
        "--cf",
        "6/5",
        "--h",
        "0..2",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json_rows(&o);
    let ms: Vec<i128> = rows
        .iter()
        .map(|r| r["m"].as_str().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ms[0], -434);
    assert!(ms[0].abs() < ms[1].abs() && ms[1].abs() < ms[2].abs());
    assert!(rows.iter().all(|r| r["verified"] == true));

    let o = padicf(&[
        "construct",
        "--p",
        "3",
        "--cf",
        "1/3,1/3",
        "--h",
        "0",
        "--output",
        "json",
    ]);
    assert_eq!(json_rows(&o)[0]["m"], "-34867844");

    let o = padicf(&["construct", "--p", "3", "--cf", "1/3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("condition (b)"));
}

#[test]
fn search_examples() {
    let o = padicf(&[
        "search",
        "--p",
        "5",
        "--t",
        "1",
        "--num-bound",
        "10",
        "--output",
        "json",
    ]);
    let rows = json_rows(&o);
    let cfs: Vec<&str> = rows
        .iter()
        .filter_map(|r| r.get("certificate"))
        .map(|c| c["cf"][0].as_str().unwrap())
        .collect();
    assert_eq!(cfs, ["6/5", "-6/5"]);

    let o = padicf(&["search", "--p", "3", "--t", "1", "--output", "json"]);
    assert_eq!(json_rows(&o).len(), 1, "only the cursor row");

    let o = padicf(&[
        "search", "--p", "5", "--t", "2", "--pool", "pos", "--output", "json",
    ]);
    assert!(json_rows(&o).len() > 1);
}

#[test]
fn verify_filter() {
    let o = padicf(&["verify-paper", "--only", "section6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 8);
    assert!(out.contains("variant 3, p=5, t=3") && out.contains("Indeterminate"));

    let o = padicf(&["verify", "--only", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}

fn lines(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn records_cursor_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("runs.jsonl");
    let cur = dir.path().join("cursor.json");
    let rec_s = rec.to_str().unwrap();
    let cur_s = cur.to_str().unwrap();

    padicf(&[
        "expand",
        "--p",
        "3",
        "--quad",
        "37,1,6,0,1",
        "--out-file",
        rec_s,
    ]);
    let base = [
        "search",
        "--p",
        "5",
        "--t",
        "2",
        "--pool",
        "pos",
        "--limit",
        "25",
        "--cursor",
        cur_s,
        "--out-file",
        rec_s,
    ];
    let mut hits = Vec::new();
    for jobs in ["1", "2", "3"] {
        let mut args = base.to_vec();
        args.extend(["--jobs", jobs, "--output", "json"]);
        let rows = json_rows(&padicf(&args));
        hits.extend(
            rows.iter()
                .filter_map(|r| r.get("index").and_then(Value::as_u64)),
        );
    }
    // resumed chunks cover the space once, in order, and match a single run
    let full = json_rows(&padicf(&[
        "search", "--p", "5", "--t", "2", "--pool", "pos", "--output", "json",
    ]));
    let all: Vec<u64> = full
        .iter()
        .filter_map(|r| r.get("index").and_then(Value::as_u64))
        .collect();
    assert_eq!(hits, all);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&cur).unwrap()).unwrap();
    assert_eq!(saved["cursor"]["exhausted"], true);

    padicf(&["construct", "--p", "3", "--cf", "1/3", "--out-file", rec_s]);
    assert_eq!(lines(&rec), 5);
    let first: Value = serde_json::from_str(
        std::fs::read_to_string(&rec)
            .unwrap()
            .lines()
            .next()
            .unwrap(),
    )
    .unwrap();
    for key in ["command", "inputs", "outputs", "timings", "version"] {
        assert!(first.get(key).is_some(), "{key}");
    }

    let o = padicf(&["replay", rec_s]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("5 records replayed, 0 differ"));

    // a tampered record is reported
    let text = std::fs::read_to_string(&rec)
        .unwrap()
        .replace("[(1/3)*]", "[(2/3)*]");
    std::fs::write(&rec, text).unwrap();
    assert_eq!(padicf(&["replay", rec_s]).status.code(), Some(1));
}
