use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gracepath"));
    cmd.env_remove("GRACEPATH_BUDGET");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn construct_json() {
    let out = run(&["construct", "7", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "construct");
    assert_eq!(v["result"]["sequence"], serde_json::json!([2, 6, 1, 7, 4, 5, 3]));
    assert_eq!(v["result"]["good"], true);
    assert!(v.get("trace").is_none());
}

#[test]
fn construct_exceptional_start() {
    let v = json(&run(&["construct", "5", "2"]));
    assert_eq!(v["result"]["sequence"], serde_json::json!([2, 5, 1, 3, 4]));
    assert_eq!(v["result"]["exceptional_start"], true);
    assert_eq!(v["result"]["good"], false);
    assert_eq!(v["result"]["graceful"], true);
}

#[test]
fn construct_plain_and_ap() {
    let plain = stdout(&run(&["construct", "6", "1", "--format", "plain"]));
    assert_eq!(plain.lines().next().unwrap(), "1,6,2,5,3,4");
    let out = run(&["construct", "6", "1", "--ap", "0,-2", "--format", "plain"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().next().unwrap(), "0,-10,-2,-8,-4,-6");
}

#[test]
fn construct_trace_is_included() {
    let v = json(&run(&["construct", "12", "3", "--trace"]));
    let steps = v["trace"]["steps"].as_array().expect("trace steps");
    assert!(!steps.is_empty());
    assert!(steps.iter().all(|s| s.get("rule").is_some()));
}

#[test]
fn construct_usage_errors() {
    assert_eq!(code(&run(&["construct", "5", "6"])), 2);
    assert_eq!(code(&run(&["construct", "0", "1"])), 2);
    assert_eq!(code(&run(&["construct", "5"])), 2);
    assert_eq!(code(&run(&["construct", "5", "1", "--ap", "1,0"])), 2);
}

#[test]
fn verify_verdicts() {
    let ok = run(&["verify", "--set", "1..4", "--seq", "2,3,1,4"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["result"]["verdict"], "valid");

    let bad = run(&["verify", "--set", "1..4", "--seq", "1,2,3,4"]);
    assert_eq!(code(&bad), 1);
    assert_eq!(json(&bad)["result"]["verdict"], "repeated-difference");

    let wrong_start = run(&["verify", "--set", "1..4", "--seq", "2,3,1,4", "--start", "1"]);
    assert_eq!(code(&wrong_start), 1);
    assert_eq!(json(&wrong_start)["result"]["verdict"], "wrong-start");

    let missing = run(&["verify", "--set", "1..4", "--seq", "1,2,4"]);
    assert_eq!(code(&missing), 1);
    assert_eq!(json(&missing)["result"]["verdict"], "not-a-permutation");

    let cycle = run(&["verify", "--set", "0,1,3,7", "--seq", "0,1,3,7", "--cycle"]);
    assert_eq!(code(&cycle), 0);
}

#[test]
fn verify_rationals() {
    let out = run(&["verify", "--set", "1/2,1,3/2,2", "--seq", "1,3/2,1/2,2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn verify_requires_one_set_source() {
    assert_eq!(code(&run(&["verify", "--seq", "1,2"])), 2);
    assert_eq!(code(&run(&["verify", "--set", "1,2", "--set-file", "x", "--seq", "1,2"])), 2);
    assert_eq!(code(&run(&["verify", "--set", "1,1", "--seq", "1,1"])), 2);
}

#[test]
fn construct_verify_round_trip() {
    for n in 1..=64usize {
        for s in [1, n.div_ceil(2), n] {
            let built = run(&["construct", &n.to_string(), &s.to_string(), "--format", "plain"]);
            assert_eq!(code(&built), 0);
            let set = format!("1..{n}");
            let out = run_stdin(&["verify", "--set", &set, "--seq", "-", "--start", &s.to_string()], &stdout(&built));
            assert_eq!(code(&out), 0, "n={n} s={s}");
        }
    }
}

#[test]
fn sweep_csv_is_deterministic() {
    let a = run(&["sweep", "8", "--mode", "both"]);
    let b = run(&["sweep", "8", "--mode", "both"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,s,exceptional_start,sequence,graceful,good_class,oracle_path_exists,oracle_good_exists,mismatch"
    );
    assert_eq!(lines.count(), 36);
    assert!(String::from_utf8_lossy(&a.stderr).contains("mismatches=0"));
}

#[test]
fn sweep_oracle_limits() {
    assert_eq!(code(&run(&["sweep", "14", "--mode", "oracle"])), 2);
    assert_eq!(code(&run(&["sweep", "20"])), 0);
}

#[test]
fn budget_environment() {
    let out = bin()
        .args(["sweep", "6", "--mode", "oracle"])
        .env("GRACEPATH_BUDGET", "nope")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let capped = run(&["cycle", "--set", "1..9", "--budget", "5"]);
    assert_eq!(code(&capped), 1);
    assert_eq!(json(&capped)["result"]["outcome"], "budget-exhausted");
}

#[test]
fn stats_bound_for_interval() {
    let out = run(&["stats", "--set", "1..10"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["result"];
    assert_eq!(r["bound"]["bound_energy_form"]["exact"], "617/252");
    assert_eq!(r["c"]["exact"], "67/10");
    assert_eq!(r["energy"], "670");
}

#[test]
fn stats_exact_for_sidon_set() {
    let out = run(&["stats", "--set", "0,1,3,7", "--exact", "--trials", "1000", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["bound"]["bound_exact"]["exact"], "4");
    let again = run(&["stats", "--set", "0,1,3,7", "--exact", "--trials", "1000", "--seed", "3"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn stats_rejects_small_sets() {
    assert_eq!(code(&run(&["stats", "--set", "1,2,3"])), 2);
    assert_eq!(code(&run(&["stats", "--set", "1..9", "--exact"])), 2);
}

#[test]
fn cycle_outcomes() {
    let found = run(&["cycle", "--set", "0,1,3,7"]);
    assert_eq!(code(&found), 0);
    assert_eq!(json(&found)["result"]["outcome"], "found");

    let none = run(&["cycle", "--set", "1..5"]);
    assert_eq!(code(&none), 1);
    assert_eq!(json(&none)["result"]["outcome"], "proven-none");

    let obstructed = json(&run(&["cycle", "--set", "1,2,3,4,6"]));
    assert_eq!(obstructed["result"]["outcome"], "proven-none");
    assert_eq!(obstructed["result"]["parity_obstructed"], true);
}

#[test]
fn set_file_input() {
    let path = std::env::temp_dir().join(format!("gracepath-cli-{}.txt", std::process::id()));
    std::fs::write(&path, "# a Sidon set\n0\n1\n3\n7\n").unwrap();
    let out = run(&["cycle", "--set-file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&out), 0);
}
