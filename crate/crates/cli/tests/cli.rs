use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use maxmatch::expr::{expr_to_tree, parse_expr};
use maxmatch::extremal::build_optimal;
use maxmatch::canonical_code;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maxmatch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn count_prints_root_statistics() {
    let o = run(&["count", "B(L,L,A(B(L,F)))"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("m=21 "));
    let o = run(&["count", "L"]);
    assert_eq!(stdout(&o).trim(), "mu=0 m=1 m0=1 m1=0 type=A rho=1");
}

#[test]
fn json_output_is_one_object_per_line() {
    let o = run(&["--json", "count", "L"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["m"], "1");
    assert_eq!(v["type"], "A");
    let o = run(&["--json", "types", "A(B(L))"]);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
}

#[test]
fn edge_list_file_and_stdin() {
    let o = run(&["count", "--file", &fixture("t10.edges")]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("m=21 "));

    let mut child = bin()
        .args(["count"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"B(F,F,F,F)\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(stdout(&o).contains("m=216 "));
}

#[test]
fn enumerate_six_finds_two_maximisers() {
    let o = run(&["enumerate", "6", "--verify-optimal"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["argmax_size"], 2);
    assert_eq!(v["max_m"], "5");
    assert_eq!(v["matches_construction"], true);
    let o = run(&["enumerate", "8", "--count"]);
    assert_eq!(stdout(&o).trim(), "23");
}

#[test]
fn optimal_dsl_round_trips() {
    for n in 1..=100 {
        let o = run(&["optimal", &n.to_string()]);
        assert!(o.status.success(), "n = {n}");
        let printed: Vec<_> = stdout(&o)
            .lines()
            .map(|l| canonical_code(&expr_to_tree(&parse_expr(l).unwrap()).unwrap().tree))
            .collect();
        let built: Vec<_> = build_optimal(n).unwrap().trees().map(canonical_code).collect();
        assert_eq!(printed, built, "n = {n}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count", "B(L"]).status.code(), Some(2));
    assert_eq!(run(&["count", "A(L)"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--file", "/nonexistent/tree"]).status.code(), Some(2));
    assert_eq!(run(&["tables", "--manifest", &fixture("malformed_tables.toml")]).status.code(), Some(2));
    assert_eq!(run(&["tables"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--tables", "--fig9", "--transfer", "10"]).status.code(), Some(0));
}

#[test]
fn altered_manifest_fails_the_named_rows() {
    let o = run(&["tables", "--manifest", &fixture("altered_tables.toml")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let failed: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 2, "{out}");
    assert!(failed.iter().any(|l| l.contains("R7.2: m_replacement = 568") && l.contains("actual=567")));
    assert!(failed.iter().any(|l| l.contains("R3.1: condition = alpha<6/5") && l.contains("actual=alpha<7/6")));

    let o = run(&["--json", "verify", "--tables", "--manifest", &fixture("altered_tables.toml")]);
    assert_eq!(o.status.code(), Some(1));
    let statuses: Vec<String> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["status"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(statuses.iter().filter(|s| *s == "fail").count(), 2);
}

#[test]
fn outline_and_asymptotics() {
    let o = run(&["--json", "outline", "--n", "181"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["tag_counts"]["C^3F"], 5);
    assert_eq!(v["tag_counts"]["C^4F"], 1);
    assert_eq!(v["tag_counts"]["C^3_*"], 1);

    let o = run(&["--json", "asymptotics", "--n", "704", "--digits", "30"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["j"], 4);
    assert!(v["constant"].as_str().unwrap().starts_with("0.7902807147480498"));

    let o = run(&["asymptotics"]);
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn parse_normalises() {
    let o = run(&["parse", "A ( B ( L , F , L ) )"]);
    assert_eq!(stdout(&o).trim(), "CL");
}
