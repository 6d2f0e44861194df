use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambdamu")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lambdamu-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn parse_prints_the_term_and_its_free_variables() {
    let o = run(&["parse", r"\x. x y (mu a. [b] z)"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("cxty: 8"), "{out}");
    assert!(out.contains("free lambda-variables: y z"), "{out}");
    assert!(out.contains("free mu-variables: b"), "{out}");
}

#[test]
fn syntax_errors_are_usage_errors() {
    assert_eq!(run(&["parse", r"(\x."]).status.code(), Some(1));
}

#[test]
fn step_lists_both_reducts_of_the_critical_pair() {
    let o = run(&["step", "(mu a.x) (mu b.y)"]);
    let out = stdout(&o);
    assert!(o.status.success());
    assert_eq!(out.lines().count(), 2, "{out}");
    assert!(out.contains("-> ") && out.contains("mu a. x") && out.contains("mu b. y"), "{out}");
    assert_eq!(run(&["step", "x", "--index", "0"]).status.code(), Some(1));
}

#[test]
fn sn_verdicts_and_exit_codes() {
    let o = run(&["sn", r"(\x.x x) (\x.x x)"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("NonSN"));
    let o = run(&["sn", r"(\x.x) ((\y.y) z)"]);
    assert!(stdout(&o).starts_with("SN (eta = 2"), "{}", stdout(&o));
    let o = run(&["sn", r"(\x.x x x) (\x.x x x)", "--max-nodes", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn catalog_names_expand() {
    let o = run(&["--catalog", "sn", "M1 M0"]);
    assert!(stdout(&o).starts_with("NonSN"), "{}", stdout(&o));
}

#[test]
fn typing_peirce() {
    let o = run(&["type", r"\f. mu a. [a] (f (\x. mu b. [a] x))"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("->"));
}

const ARGUMENT_FIRST: &str = r#"{
  "terms": ["(\\x. x) ((\\y. y) z)", "(\\x. x) z", "z"],
  "steps": [{"path": ["AppArg"], "rule": "beta"}, {"path": [], "rule": "beta"}]
}"#;

#[test]
fn argument_first_trace_is_rejected_then_standardized() {
    let input = scratch("arg-first.json");
    std::fs::write(&input, ARGUMENT_FIRST).unwrap();
    let input = input.to_str().unwrap();
    assert_eq!(run(&["check-standard", "--trace", input]).status.code(), Some(3));

    let output = scratch("standard.json");
    let o = run(&["standardize", "--trace", input, "-o", output.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["check-standard", "--trace", output.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let cert: serde_json::Value = serde_json::from_str(stdout(&o).trim_start_matches("standard\n")).unwrap();
    assert!(cert.get("clause").is_some(), "{cert}");
}

#[test]
fn normalize_writes_a_checkable_trace() {
    let path = scratch("lo.json");
    let o = run(&["normalize", r"(\x.x) ((\y.y) z)", "--trace", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("z"));
    assert!(run(&["check-standard", "--trace", path.to_str().unwrap()]).status.success());
    let o = run(&["normalize", r"(\x.x x) (\x.x x)", "--max-steps", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn graph_writes_dot() {
    let o = run(&["graph", "(mu a.x) (mu b.y)"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("digraph"));
}
