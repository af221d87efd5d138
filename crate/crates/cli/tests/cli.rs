use std::path::PathBuf;
use std::process::Command;

use cfpow_cli::{run, Outcome};
use serde_json::Value;

const GOLDEN: [&str; 6] = ["--p", "-1", "--r", "2", "--d", "5"];
const PHI: [&str; 6] = ["--p", "1", "--r", "2", "--d", "5"];

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("cfpow").chain(args.iter().copied()))
}

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn cli_v(args: &[String]) -> Outcome {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    cli(&refs)
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let v: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&v).unwrap()
}

fn assert_valid(schema_name: &str, doc: &str) {
    let v: Value = serde_json::from_str(doc).unwrap_or_else(|e| panic!("not JSON ({e}): {doc}"));
    let validator = schema(schema_name);
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}\n{doc}");
}

fn json_of(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn cf_expand_sqrt2() {
    let out = cli(&["cf", "expand", "--p", "0", "--q", "1", "--r", "1", "--d", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), r#"{"a0":1,"preperiod":[],"period":[2]}"#);
    assert_valid("cf_expand.schema.json", &out.stdout);
}

#[test]
fn cf_convergents_and_binet() {
    let out = cli_v(&with(&["cf", "convergents", "--n", "6"], &GOLDEN));
    assert_eq!(out.code, 0);
    assert_eq!(json_of(&out)["q"], serde_json::json!(["1", "1", "2", "3", "5", "8", "13"]));
    assert_valid("cf_convergents.schema.json", &out.stdout);
    for alpha in [&["--d", "2"][..], &GOLDEN, &["--p", "3", "--q", "2", "--r", "7", "--d", "13"]] {
        let out = cli_v(&with(&["cf", "binet"], alpha));
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert_valid("cf_binet.schema.json", &out.stdout);
    }
}

#[test]
fn representations() {
    let z = cli(&["rep", "zeckendorf", "--value", "100"]);
    assert_eq!(z.stdout.trim(), r#"{"indices":[11,6,4]}"#);
    assert_valid("rep_zeckendorf.schema.json", &z.stdout);
    let r = cli(&["rep", "radix", "--value", "1203", "--b", "10"]);
    assert_eq!(json_of(&r)["digits"], serde_json::json!([1, 2, 3]));
    assert_eq!(json_of(&r)["positions"], serde_json::json!([3, 2, 0]));
    assert_valid("rep_radix.schema.json", &r.stdout);
    let o = cli(&["rep", "ostrowski", "--value", "12345", "--d", "7"]);
    assert_eq!(o.code, 0);
    assert_valid("rep_ostrowski.schema.json", &o.stdout);
    let missing = cli(&["rep", "ostrowski", "--value", "5"]);
    assert_eq!(missing.code, 3);
    assert_valid("error.schema.json", &missing.stdout);
}

#[test]
fn bound_reports_validate() {
    let y = cli(&["bounds", "y", "--K", "2", "--y", "5", "--d", "2"]);
    assert_eq!(y.code, 0);
    assert_valid("bound_report.schema.json", &y.stdout);
    let ham = cli(&["bounds", "ham", "--K", "2", "--l", "2", "--d", "2"]);
    assert_eq!(ham.code, 0);
    assert_valid("bound_report.schema.json", &ham.stdout);
    let ham2 = cli_v(&with(&["bounds", "ham2", "--K", "2", "--l", "2", "--b", "10"], &PHI));
    assert_eq!(ham2.code, 0);
    assert_valid("bound_report.schema.json", &ham2.stdout);
    assert_eq!(json_of(&ham2)["ledger"]["b"]["hi"], "1e1");
}

#[test]
fn golden_ham_is_inapplicable() {
    let out = cli_v(&with(&["bounds", "ham", "--K", "2", "--l", "2"], &PHI));
    assert_eq!(out.code, 2);
    let v = json_of(&out);
    assert_eq!(v["error"], "inapplicable");
    assert_eq!(v["detail"], "inapplicable: Q(alpha) = Q(sqrt5)");
    assert_valid("error.schema.json", &out.stdout);
}

#[test]
fn precondition_errors_exit_3() {
    for args in [
        &["cf", "expand", "--d", "9"][..],
        &["cf", "expand", "--d", "2", "--r", "0"],
        &["cf", "expand", "--d", "2", "--p", "0.5"],
        &["--precision", "16", "cf", "expand", "--d", "2"],
        &["bounds", "y", "--K", "2", "--y", "1", "--d", "2"],
        &["search", "--K", "2", "--N-max", "5", "--a-max", "5", "--d", "2", "--filter-radix", "2"],
        &["frobnicate"],
    ] {
        let out = cli(args);
        assert_eq!(out.code, 3, "{args:?} -> {}", out.stdout);
        assert_valid("error.schema.json", &out.stdout);
    }
}

#[test]
fn search_lines_and_filters() {
    let out = cli_v(&with(&["search", "--K", "2", "--N-max", "40", "--a-max", "5"], &GOLDEN));
    assert_eq!(out.code, 0);
    for line in out.stdout.lines() {
        assert_valid("solution.schema.json", line);
    }
    assert!(out.stdout.contains(r#"{"y":"3864","a":2,"N":[35,11],"value":"14930496"}"#));

    let zeck = cli_v(&with(
        &["search", "--K", "2", "--N-max", "40", "--a-max", "5", "--filter-zeckendorf", "1"],
        &GOLDEN,
    ));
    assert!(!zeck.stdout.contains("3864"));
    let radix = cli_v(&with(
        &["search", "--K", "2", "--N-max", "40", "--a-max", "5", "--filter-radix", "1,2"],
        &GOLDEN,
    ));
    for line in radix.stdout.lines() {
        let y: u64 = serde_json::from_str::<Value>(line).unwrap()["y"].as_str().unwrap().parse().unwrap();
        assert!(y.is_power_of_two(), "{line}");
    }
}

#[test]
fn search_budget_reports_partial_results() {
    let out = cli_v(&with(&["search", "--K", "2", "--N-max", "40", "--a-max", "5", "--budget", "300"], &GOLDEN));
    assert_eq!(out.code, 3);
    let last = out.stdout.lines().last().unwrap();
    assert_eq!(serde_json::from_str::<Value>(last).unwrap()["error"], "budget-exceeded");
}

#[test]
fn search_is_thread_count_independent() {
    let base = with(&["search", "--K", "3", "--N-max", "25", "--a-max", "4"], &["--d", "2"]);
    let one = cli_v(&[vec!["--threads".into(), "1".into()], base.clone()].concat());
    let many = cli_v(&[vec!["--threads".into(), "8".into()], base].concat());
    assert_eq!(one, many);
}

#[test]
fn verify_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("cfpow-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let sols = cli(&["search", "--K", "2", "--N-max", "20", "--a-max", "4", "--d", "2"]);
    let report = cli(&["bounds", "ham", "--K", "2", "--l", "2", "--d", "2"]);
    let sp = dir.join("solutions.jsonl");
    let rp = dir.join("report.json");
    std::fs::write(&sp, &sols.stdout).unwrap();
    std::fs::write(&rp, &report.stdout).unwrap();
    let out = cli(&["verify", "--solutions", sp.to_str().unwrap(), "--report", rp.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_valid("verify.schema.json", &out.stdout);
    assert_eq!(json_of(&out)["ok"], true);

    let mut shrunk = json_of(&report);
    shrunk["n1_bound"] = Value::from("0");
    shrunk["a_bound"] = Value::from("1");
    std::fs::write(&rp, shrunk.to_string()).unwrap();
    let out = cli(&["verify", "--solutions", sp.to_str().unwrap(), "--report", rp.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert_eq!(json_of(&out)["ok"], false);
    assert_valid("verify.schema.json", &out.stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_matches_library() {
    let bin = env!("CARGO_BIN_EXE_cfpow");
    let out = Command::new(bin).args(["cf", "expand", "--d", "2"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), cli(&["cf", "expand", "--d", "2"]).stdout);
    let out = Command::new(bin).args(["bounds", "ham", "--K", "2", "--l", "2"]).args(PHI).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let env = Command::new(bin)
        .env("CFPOW_PRECISION", "8")
        .args(["cf", "expand", "--d", "2"])
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}
