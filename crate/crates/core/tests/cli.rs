use std::process::{Command, Output};

use partition_kit::enumerate::BUDGET_ENV;
use partition_kit::identity::VerificationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_partition-kit"))
        .args(args)
        .env_remove(BUDGET_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_prints_decimal() {
    for (args, expected) in [
        (&["count", "22", "--k", "4", "--gap", "1"][..], "34\n"),
        (&["count", "0"][..], "1\n"),
        (
            &[
                "count",
                "18",
                "--k",
                "3",
                "--gap",
                "2",
                "--method",
                "reduction",
            ][..],
            "12\n",
        ),
        (&["count", "1000"][..], "24061467864032622473692149727991\n"),
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), expected, "{args:?}");
        assert!(o.stderr.is_empty());
    }
}

#[test]
fn count_json_uses_decimal_strings() {
    let o = run(&["count", "500", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], "2300165032574323995027");
}

#[test]
fn invalid_flags_exit_2_with_stderr() {
    for args in [
        &["count", "5", "--k", "2", "--at-most", "2"][..],
        &["count", "5", "--min-part", "0"][..],
        &["count", "five"][..],
        &["enumerate", "5", "--format", "xml"][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn enumerate_examples() {
    let o = run(&["enumerate", "6", "--k", "3", "--gap", "1"]);
    assert_eq!(stdout(&o), "3,2,1\ntotal: 1\n");
    let o = run(&["enumerate", "0"]);
    assert_eq!(stdout(&o), "\ntotal: 1\n");
    let o = run(&[
        "enumerate",
        "18",
        "--k",
        "3",
        "--gap",
        "2",
        "--format",
        "json",
    ]);
    let triples: Vec<Vec<u64>> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(triples.len(), 12);
    assert!(triples
        .iter()
        .all(|t| t.len() == 3 && t[0] >= t[1] + 2 && t[1] >= t[2] + 2));
}

#[test]
fn enumerate_respects_budget_env() {
    let o = run(&["enumerate", "70", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_partition-kit"))
        .args(["enumerate", "70", "--k", "2"])
        .env(BUDGET_ENV, "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("total: 35\n"));
}

#[test]
fn verify_examples() {
    let o = run(&[
        "verify",
        "--family",
        "THEOREM_MAIN",
        "--n-max",
        "12",
        "--d-max",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.passed());

    let o = run(&[
        "verify",
        "--family",
        "GENERALIZED_M",
        "--formula",
        "paper",
        "--n-max",
        "6",
        "--m-max",
        "3",
        "--d-max",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.has_failure(&[("n", 2), ("m", 2), ("d", 1)]));

    let o = run(&[
        "verify",
        "--family",
        "GENERALIZED_M",
        "--formula",
        "corrected",
        "--n-max",
        "6",
        "--m-max",
        "3",
        "--d-max",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&[
        "verify",
        "--family",
        "DELTA_TABLE",
        "--k-max",
        "5",
        "--d-max",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["verify", "--family", "NOPE"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn verify_json_schema() {
    let o = run(&[
        "verify",
        "--family",
        "PROP2_SPLIT",
        "--n-max",
        "10",
        "--k-max",
        "3",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["family", "ranges", "cells", "failures", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["family"], "PROP2_SPLIT");
    assert_eq!(v["cells"], 11 * 4);
}

#[test]
fn bijection_examples() {
    let o = run(&["bijection", "3", "--d", "2"]);
    assert!(stdout(&o).lines().any(|l| l == "2,1 -> 7,4,1"));
    let o = run(&["bijection", "0", "--d", "1"]);
    assert_eq!(stdout(&o), " -> \n");
    let o = run(&["bijection", "4", "--L", "8", "--d", "1", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("PASS"));
}

#[test]
fn bench_csv_counts_agree() {
    let o = run(&[
        "bench",
        "--suite",
        "paper",
        "--out",
        "csv",
        "--repetitions",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("method,n,k,d,r,nanos,count"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let row_34: Vec<_> = rows
        .iter()
        .filter(|r| r[1..5] == ["22", "4", "1", "1"])
        .collect();
    assert_eq!(row_34.len(), 3);
    assert!(row_34.iter().all(|r| r[6] == "34"));
}

#[test]
fn bench_scaling_reaches_1000() {
    let o = run(&["bench", "--suite", "scaling", "--repetitions", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for method in ["pentagonal", "column-sum", "recurrence", "reduction"] {
        assert!(
            text.lines()
                .any(|l| l.starts_with(&format!("{method},1000,"))
                    && l.ends_with(",24061467864032622473692149727991")),
            "{method}"
        );
    }
    assert!(text
        .lines()
        .any(|l| l.starts_with("enumeration,1000,") && l.ends_with(",,skipped")));
}

#[test]
fn bench_rejects_bad_suite() {
    for suite in ["", "huge"] {
        let o = run(&["bench", "--suite", suite]);
        assert_eq!(o.status.code(), Some(2));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("bijection"));
}

#[test]
fn verify_all_follows_the_formula() {
    let o = run(&[
        "verify",
        "--family",
        "all",
        "--formula",
        "corrected",
        "--format",
        "plain",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 14);
    assert!(text.lines().all(|l| l.contains(": PASS")));

    let o = run(&["verify", "--family", "all", "--format", "plain"]);
    assert_eq!(o.status.code(), Some(1));
    let failing: Vec<&str> = std::str::from_utf8(&o.stdout)
        .unwrap()
        .lines()
        .filter(|l| l.contains(": FAIL"))
        .collect();
    assert_eq!(failing.len(), 1);
    assert!(failing[0].starts_with("GENERALIZED_M"));
}
