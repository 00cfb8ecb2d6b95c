//! End-to-end tests of the `covpic` binary: outputs, exit codes, JSON
//! round trips, and byte determinism.

use std::process::{Command, Output};

fn covpic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covpic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn picgroup_json_golden() {
    let out = covpic(&["picgroup", "--r", "2", "--g", "2", "--n", "3", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("strict JSON");
    assert_eq!(value["r"], 2);
    assert_eq!(value["g"], 2);
    assert_eq!(value["n"], 3);
    assert_eq!(value["d"], 3);
    assert_eq!(value["free_rank"], 3);
    assert_eq!(value["torsion"], serde_json::json!([20]));
    assert_eq!(value["far"]["free_rank"], 0);
    assert_eq!(value["far"]["torsion"], serde_json::json!([20]));
    assert_eq!(
        value["free_basis"],
        serde_json::json!(["Z[1,2]", "Z[1,3]", "Z[2,3]"])
    );
}

#[test]
fn picgroup_text_mode() {
    let out = covpic(&["picgroup", "--r", "2", "--g", "4", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("Z^2 (+) Z/18"), "unexpected output: {text}");
}

#[test]
fn empty_stack_is_a_domain_error() {
    let out = covpic(&["picgroup", "--r", "3", "--g", "3", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("empty stack: d not integral"),
        "unexpected stderr: {err}"
    );

    let out = covpic(&["picgroup", "--r", "3", "--g", "3", "--n", "0", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("error JSON");
    assert_eq!(value["code"], "empty_stack");
}

#[test]
fn usage_errors_exit_2() {
    let out = covpic(&["picgroup", "--r", "2", "--g", "2"]);
    assert_eq!(out.status.code(), Some(2), "missing --n is a usage error");
    let out = covpic(&["picgroup", "--r", "2", "--g", "2", "--n", "1", "--bogus"]);
    assert_eq!(out.status.code(), Some(2), "unknown flags are rejected");
    let out = covpic(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2), "unknown verbs are rejected");
    let out = covpic(&["picgroup", "--r", "2", "--g", "2", "--n", "0", "--d", "4"]);
    assert_eq!(out.status.code(), Some(2), "inconsistent --g/--d is a usage error");
}

#[test]
fn consistent_g_and_d_are_accepted() {
    let out = covpic(&["picgroup", "--r", "2", "--g", "2", "--n", "0", "--d", "3"]);
    assert!(out.status.success());
}

#[test]
fn disc_reports_exact_values() {
    let out = covpic(&["disc", "--coeffs", "1,0,1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("discriminant: 4"));

    // 3/4 x^2 - xy + y^2: disc = 4*(3/4) - 1 = 2.
    let out = covpic(&["disc", "--coeffs", "3/4,-1,1", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["discriminant"], "2");
    assert_eq!(value["degree"], 2);

    let out = covpic(&["disc", "--coeffs", "1,2"]);
    assert_eq!(out.status.code(), Some(1), "degree 1 is a domain error");
}

#[test]
fn relations_match_the_rank_formula() {
    let out = covpic(&["relations", "--r", "4", "--n", "5", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["columns"], 30);
    assert_eq!(value["rank"], 5);
    assert_eq!(value["quotient_free_rank"], 25);
    assert_eq!(value["quotient_torsion_free"], true);
}

#[test]
fn phi_lines_have_the_documented_prefixes() {
    let out = covpic(&["phi", "--r", "2", "--d", "3", "--n", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for prefix in ["phi[1]=", "phi[0]=", "lambda[1]=", "lambda[0]=", "psi[1]=", "psi[0]="] {
        assert!(text.contains(prefix), "missing {prefix} in: {text}");
    }
    assert!(text.contains("lambda[0]=1"), "lambda_0 should be 1");
}

#[test]
fn verify_elimination_passes_and_echoes_seed() {
    let out = covpic(&[
        "verify",
        "elimination",
        "--r",
        "2",
        "--d",
        "3",
        "--n",
        "5",
        "--trials",
        "20",
        "--seed",
        "42",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("seed: 42"));
    assert!(text.trim_end().ends_with("ALL CHECKS PASSED"), "got: {text}");
}

#[test]
fn verify_lattice_json_round_trips() {
    let out = covpic(&[
        "verify", "lattice", "--trials", "40", "--seed", "7", "--json",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["all_passed"], true);
    assert_eq!(value["seed"], 7);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "verify",
        "elimination",
        "--r",
        "2",
        "--d",
        "3",
        "--n",
        "4",
        "--trials",
        "5",
        "--seed",
        "9",
    ];
    let first = covpic(&args);
    let second = covpic(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let args = ["picgroup", "--r", "3", "--g", "4", "--n", "5", "--json"];
    let first = covpic(&args);
    let second = covpic(&args);
    assert_eq!(first.stdout, second.stdout);
}
