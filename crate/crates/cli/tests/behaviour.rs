//! End-to-end behaviour of the command-line interface, driven through
//! [`moonshine_cli::run`] in-process: exit codes, payload shapes, and the
//! flat CSV projection.

use std::fs;
use std::path::PathBuf;

use moonshine_cli::run;

fn temp_path(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("moonshine-cli-{tag}-{}.out", std::process::id()))
}

fn run_to_file(tag: &str, args: &[&str]) -> (i32, String) {
    let path = temp_path(tag);
    let mut argv: Vec<&str> = vec!["moonshine"];
    argv.extend_from_slice(args);
    argv.push("--out");
    let path_text = path.to_str().unwrap().to_string();
    argv.push(&path_text);
    let code = run(argv);
    let text = fs::read_to_string(&path).unwrap_or_default();
    fs::remove_file(&path).ok();
    (code, text)
}

#[test]
fn an_empty_prime_range_yields_an_empty_result_array() {
    let (code, text) = run_to_file(
        "empty",
        &["verify", "--primes", "24..28", "--format", "json"],
    );
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["schema_version"], 1);
    assert_eq!(value["results"].as_array().unwrap().len(), 0);
    assert_eq!(value["config_echo"]["primes"].as_array().unwrap().len(), 0);
    assert_eq!(value["config_echo"]["K"], 4);
}

#[test]
fn verify_for_one_prime_reports_pass_in_json() {
    let (code, text) = run_to_file(
        "five",
        &[
            "verify", "--primes", "5", "--window", "20", "--format", "json",
        ],
    );
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let result = &value["results"][0];
    assert_eq!(result["p"], 5);
    assert_eq!(result["vp_monster"], 9);
    assert_eq!(result["rhs11"], 9);
    assert_eq!(result["rhs12"], 9);
    assert_eq!(result["m_p"], 6);
    assert_eq!(result["s1"], serde_json::json!([0]));
    assert_eq!(result["table2_row"]["col_744"], 1);
    assert_eq!(result["table2_row"]["col_984"], serde_json::Value::Null);
    assert_eq!(result["deligne"]["K"], 4);
    assert_eq!(result["deligne"]["residual_valuation"], 4);
    assert_eq!(result["expected_discrepancy"], false);
    assert_eq!(result["pass"], true);
    // The booleans that feed `pass` stay out of the payload.
    assert!(result.get("table1_ok").is_none());
    assert!(result.get("deligne_ok").is_none());
}

#[test]
fn the_locus_for_seventy_one_matches_the_frozen_row() {
    let (code, text) = run_to_file(
        "ss71",
        &["ss", "--prime", "71", "--fast", "--format", "json"],
    );
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["p"], 71);
    assert_eq!(value["m_p"], 2);
    assert_eq!(value["checked"], false);
    assert_eq!(value["table2_row"]["col_744"], 37);
    assert_eq!(value["table2_row"]["col_984"], 61);
    assert_eq!(
        value["table2_row"]["others"],
        serde_json::json!([6, 7, 14, 32, 54])
    );
}

#[test]
fn an_irrational_locus_reports_pairs_and_no_row() {
    let (code, text) = run_to_file(
        "ss37",
        &["ss", "--prime", "37", "--fast", "--format", "json"],
    );
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["s1"], serde_json::json!([8]));
    assert_eq!(value["s2_pairs"].as_array().unwrap().len(), 1);
    assert_eq!(value["table2_row"], serde_json::Value::Null);
}

#[test]
fn csv_has_one_row_per_prime_in_schema_order() {
    let (code, text) = run_to_file(
        "csv",
        &[
            "verify", "--primes", "5", "--window", "20", "--format", "csv",
        ],
    );
    assert_eq!(code, 0);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("p,vp_monster,term_plus,term_p,term_p2,rhs11,rhs12,m_p,"));
    assert!(header.ends_with("faber_probe,expected_discrepancy,pass"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("5,9,3,5,1,9,9,6,0,,1||,4,1:3:3,4,"));
    assert!(row.ends_with("false,true"));
    assert_eq!(lines.next(), None);
}

#[test]
fn bad_requests_are_usage_errors() {
    assert_eq!(run(["moonshine", "verify", "--primes", "4"]), 2);
    assert_eq!(run(["moonshine", "verify", "--primes", "2..71,4"]), 2);
    assert_eq!(run(["moonshine", "verify", "--primes", "5", "--k", "1"]), 2);
    assert_eq!(
        run(["moonshine", "verify", "--primes", "5", "--nmax", "3"]),
        2
    );
    assert_eq!(run(["moonshine", "deligne", "--prime", "9"]), 2);
    // Structurally fine, but the fit is not defined at p = 2 or p = 37.
    assert_eq!(run(["moonshine", "deligne", "--prime", "2"]), 2);
    assert_eq!(run(["moonshine", "deligne", "--prime", "37"]), 2);
}

#[test]
fn the_deligne_fit_for_eleven_verifies() {
    let (code, text) = run_to_file(
        "fit11",
        &[
            "deligne", "--prime", "11", "--window", "20", "--format", "json",
        ],
    );
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["p"], 11);
    assert_eq!(value["K"], 4);
    assert_eq!(value["alpha_hats"], serde_json::json!([4, 5]));
    assert_eq!(value["residual_valuation"], 4);
    assert_eq!(value["bounds_ok"], true);
    assert_eq!(value["congruence_p2"], 2);
    assert_eq!(value["congruence_p3"], 3);
    assert_eq!(value["stable"], true);
    assert_eq!(value["ok"], true);
}

#[test]
fn the_probe_reports_all_three_readings() {
    let (code, text) = run_to_file(
        "probe",
        &[
            "probe-faber",
            "--prime",
            "5",
            "--window",
            "25",
            "--format",
            "json",
        ],
    );
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["p"], 5);
    assert_eq!(value["m_p"], 6);
    assert_eq!(value["normalized"], 3);
    assert_eq!(value["with_constant"], 3);
    assert_eq!(value["kronecker"], 1);
}
