//! End-to-end checks of the `bbp` binary: exit codes, deterministic output,
//! and the documented command behaviors.

use bbp::pformula::{parse_document, Document};
use std::process::{Command, Output};

fn bbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbp"))
        .args(args)
        .output()
        .expect("run bbp")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_pi_sqrt3_passes_with_wide_agreement() {
    let out = bbp(&["verify", "pi_sqrt3", "--bits", "256", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], serde_json::Value::Bool(true));
    assert!(doc["agreement_bits"].as_i64().unwrap() >= 248);
}

#[test]
fn gen_even_p_is_a_usage_error() {
    let out = bbp(&["gen", "--family", "im-sum-a", "--degree", "1", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not BBP-type for even p"), "{err}");
}

#[test]
fn zero_check_z1() {
    let out = bbp(&["zero-check", "Z1", "--bits", "128", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], serde_json::Value::Bool(true));
    assert!(doc["value_bound_log2"].as_i64().unwrap() <= -112);
}

#[test]
fn zero_check_on_nonzero_formula_fails() {
    let out = bbp(&["zero-check", "pi_sqrt3", "--bits", "128"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn list_output_is_byte_identical_across_runs() {
    let a = bbp(&["list", "--json"]);
    let b = bbp(&["list", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(doc["formulas"].as_array().unwrap().len(), 15);
}

#[test]
fn list_families_names_the_eight_slugs() {
    let out = bbp(&["list", "--families"]);
    let text = stdout(&out);
    for slug in [
        "re-sum-a",
        "re-diff-a",
        "im-sum-a",
        "im-diff-a",
        "re-sum-b",
        "re-diff-b",
        "im-sum-b",
        "im-diff-b",
    ] {
        assert!(text.contains(slug), "missing {slug}");
    }
}

#[test]
fn show_round_trips_through_the_parser() {
    let out = bbp(&["show", "log2"]);
    assert_eq!(out.status.code(), Some(0));
    match parse_document(&stdout(&out)).unwrap() {
        Document::Scaled(sf) => {
            assert_eq!(sf.name, "log2");
            assert_eq!(sf.formula.length(), 24);
        }
        other => panic!("expected scaled document, got {other:?}"),
    }
}

#[test]
fn gen_output_reparses_and_verifies() {
    let out = bbp(&["gen", "--family", "re-sum-a", "--degree", "1", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = parse_document(&stdout(&out)).unwrap();
    let Document::Scaled(sf) = doc else {
        panic!("expected scaled document")
    };
    // re-evaluated identity agrees to 128 bits
    let agreement = sf.verify(160).unwrap();
    assert!(agreement >= 128, "agreement {agreement}");
}

#[test]
fn digits_of_log2_start_b17217() {
    let out = bbp(&["digits", "log2", "--pos", "0", "--count", "12", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["hex"].as_str().unwrap(), "B17217F7D1CF");
    assert!(doc["guard_margin_bits"].as_i64().unwrap() >= 8);
}

#[test]
fn digits_of_zero_relation_are_zero() {
    let out = bbp(&["digits", "Z1", "--pos", "1000", "--count", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0x.00000000"));
}

#[test]
fn eval_reports_value_and_radius() {
    let out = bbp(&["eval", "pi_sqrt3", "--bits", "128"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("5.441398092702653"), "{text}");
    assert!(text.contains("radius"), "{text}");
}

#[test]
fn unknown_name_is_usage_error() {
    for cmd in [
        vec!["show", "nope"],
        vec!["eval", "nope"],
        vec!["verify", "nope"],
        vec!["digits", "nope"],
        vec!["zero-check", "nope"],
    ] {
        let out = bbp(&cmd);
        assert_eq!(out.status.code(), Some(2), "{cmd:?}");
    }
}

#[test]
fn p_is_capped_at_99() {
    let out = bbp(&["gen", "--family", "im-sum-a", "--degree", "1", "--p", "101"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn worker_flag_does_not_change_output() {
    let a = bbp(&[
        "digits",
        "pi_sqrt3_log2",
        "--pos",
        "400",
        "--count",
        "12",
        "--json",
    ]);
    let b = bbp(&[
        "digits",
        "pi_sqrt3_log2",
        "--pos",
        "400",
        "--count",
        "12",
        "--json",
        "--workers",
        "2",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selftest_passes() {
    let out = bbp(&["selftest", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], serde_json::Value::Bool(true));
    assert_eq!(doc["results"].as_array().unwrap().len(), 9);
}

#[test]
fn env_var_sets_default_precision() {
    let out = Command::new(env!("CARGO_BIN_EXE_bbp"))
        .args(["eval", "log2", "--json"])
        .env("BBP_BITS", "64")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["bits"].as_u64(), Some(64));
}
