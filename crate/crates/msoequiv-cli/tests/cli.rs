//! End-to-end tests driving the built binary on the fixture files.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn msoequiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msoequiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_fixture(args: &[&str]) -> Output {
    let resolved: Vec<String> = args
        .iter()
        .map(|a| {
            if a.contains('.') && !a.starts_with('-') && !a.contains('(') {
                fixture(a).to_string_lossy().into_owned()
            } else {
                a.to_string()
            }
        })
        .collect();
    let refs: Vec<&str> = resolved.iter().map(|s| s.as_str()).collect();
    msoequiv(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn check_equiv_identity_vs_reverse_exits_one() {
    let o = run_fixture(&["check-equiv", "identity.mso-t", "reverse.mso-t", "sigma-star.rx"]);
    assert_eq!(o.status.code(), Some(1));
    let line = stdout(&o);
    assert!(
        line.starts_with("INEQUIVALENT reason=output-mismatch"),
        "{line}"
    );
    assert!(line.contains("witness="), "{line}");
}

#[test]
fn check_equiv_identity_vs_identity_exits_zero() {
    let o = run_fixture(&["check-equiv", "identity.mso-t", "identity.mso-t", "sigma-star.rx"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "EQUIVALENT");
}

#[test]
fn check_equiv_on_palindromes_is_equivalent() {
    let o = run_fixture(&["check-equiv", "identity.mso-t", "reverse.mso-t", "palindromes.cfg"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "EQUIVALENT");
}

#[test]
fn json_verdict_round_trips() {
    let o = run_fixture(&[
        "check-equiv",
        "identity.mso-t",
        "reverse.mso-t",
        "sigma-star.rx",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    assert_eq!(v["verdict"], "inequivalent");
    assert_eq!(v["reason"], "output-mismatch");
    assert!(v["n"].as_u64().unwrap() >= 1);
    let a = v["a"].as_str().unwrap();
    let b = v["b"].as_str().unwrap();
    assert_ne!(a, b);
    // the plain rendering carries the same fields
    let plain = run_fixture(&["check-equiv", "identity.mso-t", "reverse.mso-t", "sigma-star.rx"]);
    let line = stdout(&plain);
    assert!(line.contains(&format!("a={a}")));
    assert!(line.contains(&format!("b={b}")));
    assert!(line.contains(&format!("n={}", v["n"])));
}

#[test]
fn malformed_transducer_file_exits_three() {
    let dir = std::env::temp_dir().join("msoequiv-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.mso-t");
    std::fs::write(&bad, "copies: 1\nnot a transducer\n").unwrap();
    let o = msoequiv(&[
        "check-equiv",
        bad.to_str().unwrap(),
        bad.to_str().unwrap(),
        fixture("sigma-star.rx").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn run_prints_outputs_and_undefined() {
    let o = run_fixture(&["run", "reverse.mso-t", "ab"]);
    assert_eq!(stdout(&o), "ba");
    let o = run_fixture(&["run", "identity.mso-t", ""]);
    assert_eq!(stdout(&o), "ε");
    let o = run_fixture(&["run", "tree-identity.mso-t", "f(a,b)"]);
    assert_eq!(stdout(&o), "f(a,b)");
    let o = run_fixture(&["run", "root-swap.mso-t", "f(f(a,b),a)"]);
    assert_eq!(stdout(&o), "f(a,f(a,b))");
}

#[test]
fn run_undefined_outside_domain() {
    let dir = std::env::temp_dir().join("msoequiv-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let dead = dir.join("dead.mso-t");
    std::fs::write(
        &dead,
        "copies: 1\ninput-sigma: #\ninput-gamma: a b\noutput-sigma: #\noutput-gamma: a b\nkind: string\ndom: false\nnode 1 #: true\n",
    )
    .unwrap();
    let o = msoequiv(&["run", dead.to_str().unwrap(), "a"]);
    assert_eq!(stdout(&o), "UNDEFINED");
}

#[test]
fn parikh_prints_semilinear_set() {
    let o = run_fixture(&["parikh", "anbn.cfg"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("base (0,0); periods {(1,1)}"), "{out}");
}

#[test]
fn compile_prints_summary_and_dump() {
    let dir = std::env::temp_dir().join("msoequiv-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let dump = dir.join("has-edge.aut");
    let o = msoequiv(&[
        "compile",
        fixture("has-edge.mso-f").to_str().unwrap(),
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("word automaton"));
    let dumped = std::fs::read_to_string(&dump).unwrap();
    assert!(dumped.starts_with("states "));
    assert!(dumped.contains("trans "));
}

#[test]
fn tree_check_equiv_reports_marker_or_letters() {
    let o = run_fixture(&[
        "check-equiv",
        "tree-identity.mso-t",
        "root-swap.mso-t",
        "all-trees.rtg",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness=f(a,b)"), "{}", stdout(&o));
}

#[test]
fn selftest_passes() {
    let o = msoequiv(&["selftest", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all suites passed"));
}
