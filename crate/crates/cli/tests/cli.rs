use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn wdrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wdrep")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn euler_of_sp2() {
    let o = wdrep(&["euler", &fixture("sp2_trivial_q3.wdrep")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "1 - (1/3)*X");
}

#[test]
fn json_reports_are_deterministic() {
    let path = fixture("sp2_trivial_q3.wdrep");
    let a = wdrep(&["--json", "euler", &path]);
    let b = wdrep(&["--json", "euler", &path]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["header"]["kind"], "report");
    assert_eq!(v["body"]["result"]["euler"], "1 - (1/3)*X");
    assert_eq!(v["body"]["exit_code"], 0);
}

#[test]
fn analyze_reports_weight() {
    let o = wdrep(&["analyze", &fixture("sp2.wdrep")]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("pure of weight -1"), "{text}");
    assert!(text.contains("automorphic type [(1, 2)]"), "{text}");
}

#[test]
fn iso_negative_exits_one() {
    let o = wdrep(&["iso", &fixture("sp2.wdrep"), &fixture("sum_of_chars.wdrep")]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "not isomorphic");
    let o = wdrep(&["iso", &fixture("sp2.wdrep"), &fixture("sp2.wdrep")]);
    assert_eq!(code(&o), 0);
}

#[test]
fn pseudo_charpoly_of_frobenius() {
    let o = wdrep(&["pseudo-charpoly", &fixture("diag23.wdrep"), "--word", "phi"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "6 - 5*X + X^2");
}

#[test]
fn verify_purity_on_family() {
    let o = wdrep(&["verify-purity", &fixture("family.wdrep"), "--points", "1,3,1/3,5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("tau = 5: not pure"), "{text}");
    assert_eq!(text.lines().last(), Some("PASS"));
}

#[test]
fn specialization_at_a_zero_of_the_twist_is_an_input_error() {
    let o = wdrep(&["specialize", &fixture("family.wdrep"), "--at", "0"]);
    assert_eq!(code(&o), 2);
    let o = wdrep(&["specialize", &fixture("family.wdrep"), "--at", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn unsupported_eigenvalues_exit_three() {
    let o = wdrep(&["decompose", &fixture("golden.wdrep")]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("eigenvalues outside supported field"));
}

#[test]
fn validate_diagnostics() {
    let o = wdrep(&["validate", &fixture("sp2.wdrep")]);
    assert_eq!(code(&o), 0);
    let o = wdrep(&["validate", &fixture("invalid/non_nilpotent.wdrep")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL monodromy_nilpotent"));
    let o = wdrep(&["validate", &fixture("invalid/header_q6.wdrep")]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("header mismatch"));
}

#[test]
fn malformed_input_with_json_prints_a_bare_error_object() {
    let o = wdrep(&["--json", "euler", &fixture("invalid/truncated.wdrep")]);
    assert_eq!(code(&o), 2);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.get("header").is_none());
    assert_eq!(v["exit_code"], 2);
    assert!(v["result"]["error"].as_str().unwrap().contains("syntax error"));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(code(&wdrep(&["euler"])), 2);
    assert_eq!(code(&wdrep(&["--cyclo-mult", "0", "euler", &fixture("sp2.wdrep")])), 2);
}
