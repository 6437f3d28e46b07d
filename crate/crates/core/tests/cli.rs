use std::process::{Command, Output};

use serde_json::Value;

fn kkf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kkf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn kappa_prints_value() {
    let o = kkf(&["kappa", "--r", "2", "--m", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-1\n");
}

#[test]
fn verify_passes_with_exit_zero() {
    let o = kkf(&["verify", "prop24", "--n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS prop24"));
    // progress goes to stderr, so stdout holds only the result
    assert!(String::from_utf8(o.stderr).unwrap().contains("PASS prop24"));
}

#[test]
fn counterexamples_exit_one() {
    let o = kkf(&["verify", "conjecture51", "--n", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("4 counterexamples in [0,6]²"));
}

#[test]
fn exact_reading_has_no_counterexample() {
    let o = kkf(&["verify", "conjecture51", "--n", "8", "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "no counterexample in [0,70]²\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kkf(&[]).status.code(), Some(2));
    assert_eq!(kkf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kkf(&["verify", "nothing"]).status.code(), Some(2));
    assert_eq!(kkf(&["unrank", "--n", "5", "--k", "3", "--m", "10"]).status.code(), Some(2));
    assert_eq!(kkf(&["extremal", "--n", "7", "--k", "0"]).status.code(), Some(2));
    assert_eq!(kkf(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_reports_are_reproducible() {
    let run = || {
        let o = kkf(&["verify", "kkt", "--n", "7", "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        for r in v.as_array_mut().unwrap() {
            r["elapsed_ms"] = Value::Null;
        }
        v
    };
    let first = run();
    assert_eq!(first, run());
    let keys: Vec<&str> = first[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["check", "elapsed_ms", "params", "passed", "violations", "witnesses"]);
}

#[test]
fn brute_force_witness_schema() {
    let o = kkf(&["verify", "thm26", "--k", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let w = &v["witnesses"][0];
    assert_eq!(w["total"], 12);
    assert_eq!(w["pair_count"], 6);
    assert_eq!(w["family_a"].as_array().unwrap().len(), 6);
    assert_eq!(w["family_b"].as_array().unwrap().len(), 6);
}

#[test]
fn table_export_and_out_file() {
    let dir = std::env::temp_dir().join(format!("kkf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("kappa2.tsv");
    let o = kkf(&["kappa-star", "--r", "2", "--m", "12", "--format", "tsv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let kappa: Vec<i64> = text
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(kappa, [0, 1, 1, 0, 0, -1, -2, -2, -3, -4, -5, -5, -6]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn extremal_json() {
    let o = kkf(&["extremal", "--n", "4", "--k", "5", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["case"], "case_ii");
    assert_eq!(v["chosen_m"], 5);
    assert_eq!(v["total"], 11);
    assert_eq!(v["pair_count"], 5);
}

#[test]
fn full_suite_with_jobs() {
    let o = kkf(&["verify", "all", "--n", "6", "--r", "3", "--jobs", "2", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("check\tpassed\tinstances\tviolations\nall\ttrue\t"));
}

#[test]
fn rank_and_unrank_round_trip() {
    assert_eq!(stdout(&kkf(&["rank", "{2,4,10}"])), "88\n");
    assert_eq!(stdout(&kkf(&["unrank", "--n", "10", "--k", "3", "--m", "88"])), "{2,4,10}\n");
    assert_eq!(stdout(&kkf(&["cascade", "--m", "0", "--r", "3"])), "0 = 0\n");
}
