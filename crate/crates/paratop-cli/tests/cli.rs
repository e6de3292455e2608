//! End-to-end tests against the compiled binary: exit codes, JSON
//! schemas, and the documented examples.

use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paratop"))
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path
}

fn sierpinski() -> PathBuf {
    fixture(
        "sierpinski.json",
        r#"{"points": ["a","b"], "min_nbhd": {"a": ["a","b"], "b": ["b"]}}"#,
    )
}

fn discrete2() -> PathBuf {
    fixture(
        "discrete2.json",
        r#"{"points": ["a","b"], "opens": [[], ["a"], ["b"], ["a","b"]]}"#,
    )
}

fn indiscrete2() -> PathBuf {
    fixture(
        "indiscrete2.json",
        r#"{"points": ["x","y"], "opens": [[], ["x","y"]]}"#,
    )
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("spawn binary")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn props_reports_predicates() {
    let space = sierpinski();
    let out = run(&["props", space.to_str().unwrap(), "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let props: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(props["t0"], true);
    assert_eq!(props["partition"], false);
    assert_eq!(props["gens"], 1);

    let out = run(&["props", discrete2().to_str().unwrap(), "--format", "json"]);
    let props: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(props["t0"], true);
    assert_eq!(props["partition"], true);
    assert_eq!(props["gens"], 0);

    let out = run(&["props", indiscrete2().to_str().unwrap(), "--format", "json"]);
    let props: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(props["t0"], false);
    assert_eq!(props["partition"], true);
    assert_eq!(props["gens"], 2);
}

#[test]
fn props_accepts_inline_json() {
    let out = run(&[
        "props",
        r#"{"points": ["a"], "min_nbhd": {"a": ["a"]}}"#,
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let props: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(props["points"], 1);
}

#[test]
fn member_exit_codes_follow_verdicts() {
    let space = sierpinski();
    let path = space.to_str().unwrap();
    // Member → 0.
    let out = run(&["member", path, "b - a", "--group", "ap"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("Member"));
    // NonMember → 1.
    let out = run(&["member", path, "b^-1 a", "--group", "fp"]);
    assert_eq!(exit_code(&out), 1);
    // Identity → Member regardless of group.
    let out = run(&["member", path, "", "--group", "fp"]);
    assert_eq!(exit_code(&out), 0);
    // Unknown point → parse-level failure 2.
    let out = run(&["member", path, "q - a", "--group", "ap"]);
    assert_eq!(exit_code(&out), 2);
    // Syntax error → 2.
    let out = run(&["member", path, "a ^", "--group", "fp"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn member_unknown_when_search_exhausts() {
    // Neither T0 nor a partition; with no conjugators allowed the
    // commutator cannot be peeled.
    let space = fixture(
        "mixed3.json",
        r#"{"points": ["a","b","c"],
            "min_nbhd": {"a": ["a","b"], "b": ["a","b"], "c": ["a","b","c"]}}"#,
    );
    let out = run(&[
        "member",
        space.to_str().unwrap(),
        "a^-1 b a b^-1",
        "--group",
        "fp",
        "--depth",
        "0",
    ]);
    assert_eq!(exit_code(&out), 4);
    // With conjugators available the same word is certified.
    let out = run(&[
        "member",
        space.to_str().unwrap(),
        "a^-1 b a b^-1",
        "--group",
        "fp",
        "--depth",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let verdict: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(verdict["kind"], "Member");
}

#[test]
fn member_json_is_schema_shaped() {
    let space = sierpinski();
    let out = run(&[
        "member",
        space.to_str().unwrap(),
        "b - a",
        "--group",
        "ap",
        "--format",
        "json",
    ]);
    let verdict: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(verdict["kind"], "Member");
    assert_eq!(verdict["certificate"][0]["from"], "a");
    assert_eq!(verdict["certificate"][0]["to"], "b");
    assert_eq!(verdict["certificate"][0]["count"], 1);
}

#[test]
fn separate_exit_codes() {
    let space = sierpinski();
    let out = run(&["separate", space.to_str().unwrap(), "0", "a - b"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("Separated"));
    let out = run(&["separate", indiscrete2().to_str().unwrap(), "0", "x - y"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("NotSeparable"));
    // Equal elements are a usage error.
    let out = run(&["separate", space.to_str().unwrap(), "0", "0"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn mu_prints_rank_table() {
    let space = sierpinski();
    let out = run(&["mu", space.to_str().unwrap(), "a", "b"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("b↦1, a↦2"), "got: {text}");
    assert!(text.contains("target: R_2"));
    // Non-T0 spaces violate the precondition.
    let out = run(&["mu", indiscrete2().to_str().unwrap(), "x"]);
    assert_eq!(exit_code(&out), 5);
}

#[test]
fn suite_runs_clean_and_counts_spaces() {
    let out = run(&["suite", "3", "--seed", "1", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["spaces_checked"], 29);
    // Carrier guard maps to the invalid-topology exit.
    let out = run(&["suite", "6", "--seed", "1"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn battery_and_basep_run_clean() {
    let out = run(&["battery", "2", "--seed", "7"]);
    assert_eq!(exit_code(&out), 0);
    let out = run(&["basep", "2", "--samples", "50", "--seed", "7"]);
    assert_eq!(exit_code(&out), 0);
    // Word-length guard is a usage error.
    let out = run(&["battery", "2", "--length", "7", "--seed", "7"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn saturate_lists_ball() {
    let space = sierpinski();
    let out = run(&["saturate", space.to_str().unwrap(), "--radius", "4"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("0"));
    assert!(text.contains("b - a"));
    assert!(text.contains("2*b - 2*a"));
    // Radius guard.
    let out = run(&["saturate", space.to_str().unwrap(), "--radius", "13"]);
    assert_eq!(exit_code(&out), 5);
}

#[test]
fn export_dot_writes_digraph() {
    let space = sierpinski();
    let out = run(&["export-dot", space.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("digraph specialization {"));
    assert!(text.contains("\"a\" -> \"b\";"));
    // No arcs on a discrete space.
    let out = run(&["export-dot", discrete2().to_str().unwrap()]);
    assert!(!stdout(&out).contains("->"));
}

#[test]
fn malformed_inputs_use_parse_and_topology_exits() {
    // Unreadable JSON → 2.
    let bad = fixture("bad.json", "{not json");
    let out = run(&["props", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    // Well-formed document, invalid topology → 3.
    let broken = fixture(
        "broken.json",
        r#"{"points": ["a","b","c"], "opens": [[], ["a"], ["b"], ["a","b","c"]]}"#,
    );
    let out = run(&["props", broken.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn format_does_not_change_exit_codes() {
    let space = sierpinski();
    let path = space.to_str().unwrap();
    for format in ["text", "json"] {
        let out = run(&["member", path, "a - b", "--group", "ap", "--format", format]);
        assert_eq!(exit_code(&out), 1);
    }
}

#[test]
fn suite_reports_identical_for_fixed_seed() {
    let a = run(&["suite", "2", "--seed", "5", "--format", "json"]);
    let b = run(&["suite", "2", "--seed", "5", "--format", "json"]);
    let va: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let vb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    // Wall time varies; everything else must match byte for byte.
    let strip = |mut v: serde_json::Value| {
        v["wall_time_secs"] = serde_json::json!(0.0);
        v
    };
    assert_eq!(strip(va), strip(vb));
}
