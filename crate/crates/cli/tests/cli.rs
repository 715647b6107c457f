use std::path::Path;
use std::process::Command;

use algforge::corpus;

const BIN: &str = env!("CARGO_BIN_EXE_algforge");

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).env_remove("ALGFORGE_MAX_DEGREE").output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn corpus_file(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.alg")).display().to_string()
}

#[test]
fn golden_corpus_exit_codes_from_files() {
    for case in corpus::CASES {
        let args: Vec<String> = case
            .args
            .iter()
            .map(|a| match a.strip_prefix("corpus:") {
                Some(n) if corpus::source(n).is_some() => corpus_file(n),
                _ => a.to_string(),
            })
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, _, err) = run(&refs);
        assert_eq!(code, case.exit, "{args:?}: {err}");
    }
}

#[test]
fn lie_lists_the_two_nonzero_triples() {
    let (code, out, _) = run(&["lie", "builtin:E0", "--json"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["J(X11, X21, X12) = 0", "J(X21, X12, X22) = 0"]);
}

#[test]
fn failing_check_carries_the_defect_polynomial() {
    let (code, out, _) = run(&["check", &corpus_file("e0_itemized"), "--json"]);
    assert_eq!(code, 1);
    assert!(out.contains("(2*x1^3 - 2*x1^2*x2)*d2"), "{out}");
}

#[test]
fn reports_are_byte_identical() {
    let args = ["charclass", "builtin:E0", "--connection", "torsion_free", "--json", "--seed", "5"];
    assert_eq!(run(&args).1, run(&args).1);
}

#[test]
fn usage_errors_print_usage() {
    let (code, _, err) = run(&["bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-paper"));
}

#[test]
fn parse_errors_are_positioned() {
    let (code, _, err) = run(&["check", &corpus_file("bad_diagonal")]);
    assert_eq!(code, 2);
    assert!(err.contains(":3:1: semantic error"), "{err}");
}

#[test]
fn env_var_sets_the_default_degree() {
    let out = Command::new(BIN)
        .args(["obstruction", "builtin:E0", "--triple", "1,2,3"])
        .env("ALGFORGE_MAX_DEGREE", "2")
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("at degree <= 2"), "{text}");
    let out = Command::new(BIN).args(["check", "builtin:E0"]).env("ALGFORGE_MAX_DEGREE", "two").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn derive_writes_a_document_that_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("derived.alg");
    let p = path.display().to_string();
    let (code, out, err) = run(&["derive", "builtin:E0", "--connection", "torsion_free", "-o", &p]);
    assert_eq!(code, 0, "{out}{err}");
    let (code, out, _) = run(&["lie", &p]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("all 120 generator triples"));
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = algforge::dsl::parse(&text).unwrap();
    let direct = algforge_core::builtins::e0().connection("torsion_free").unwrap().derive_bundle().unwrap();
    let a = doc.algebroid(&doc.bundles[0].name).unwrap();
    assert_eq!(a.check_axioms().passes(), direct.derived.check_axioms().passes());
    assert_eq!(a.structure_pairs(), direct.derived.structure_pairs());
}

#[test]
fn verify_paper_reports_nineteen_checks() {
    let (code, out, _) = run(&["verify-paper", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 19);
    assert_eq!(code, 1);
}
