use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn weillab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weillab")).args(args).env_remove("WEILLAB_BUDGET").output().unwrap()
}

fn run_spec(cmd: &str, file: &str, extra: &[&str]) -> Output {
    let path = spec(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    weillab(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn count_prints_counts_as_json() {
    let out = run_spec("count", "p1_f2.json", &["--max-m", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["command"], "count");
    assert_eq!(r["counts"], serde_json::json!(["3", "5", "9"]));
    assert_eq!(r["verdict"], "pass");
}

#[test]
fn tsv_table_replaces_the_json_on_stdout() {
    let out = run_spec("count", "p1_f2.json", &["--max-m", "3", "--emit-table", "tsv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "m\tcount\n1\t3\n2\t5\n3\t9\n");
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = run_spec("zeta", "e_f5.json", &["--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(r["zeta"]["P"], serde_json::json!(["1", "3", "5"]));
}

#[test]
fn elliptic_curve_passes_every_check() {
    let out = run_spec("zeta", "e_f5.json", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    for c in r["checks"].as_array().unwrap() {
        assert_eq!(c["holds"], true, "{c}");
    }
    assert_eq!(r["betti"], serde_json::json!([1, 2, 1]));
    assert_eq!(r["functional_equation"]["chi"], 0);
}

#[test]
fn hypothesis_controls_exit_with_one() {
    for (file, flag) in [("nodal_cubic_f5.json", "smooth"), ("parabola_affine_f5.json", "proper")] {
        let out = run_spec("zeta", file, &[]);
        assert_eq!(out.status.code(), Some(1), "{file}: {}", stderr(&out));
        assert!(stderr(&out).contains("failed checks"));
        let r = json(&out);
        assert_eq!(r["verdict"], "fail");
        let violated = r["hypotheses"]["violated"].as_array().unwrap();
        assert!(violated.iter().any(|v| v == flag), "{file}: {violated:?}");
    }
}

#[test]
fn input_and_resource_errors_exit_with_two() {
    let out = run_spec("zeta", "does_not_exist.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"));

    let out = run_spec("count", "over_budget.json", &["--max-m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("budget"), "{}", stderr(&out));
    assert_eq!(json(&out)["verdict"], "error");

    let out = weillab(&["zeta"]);
    assert_eq!(out.status.code(), Some(2));
    let out = weillab(&["count", spec("p1_f2.json").to_str().unwrap(), "--max-m", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_can_come_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_weillab"))
        .args(["count", spec("e_f5.json").to_str().unwrap(), "--max-m", "3"])
        .env("WEILLAB_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn help_and_version_exit_with_zero() {
    assert_eq!(weillab(&["--help"]).status.code(), Some(0));
    assert_eq!(weillab(&["--version"]).status.code(), Some(0));
}

#[test]
fn gauss_sum_meets_the_bound_with_equality() {
    let out = run_spec("expsum", "gauss_x2_f7.json", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(check(&r, "gauss_equality")["holds"], true);
    assert_eq!(r["lfunction"]["degree"], 1);
    for row in r["sums"].as_array().unwrap() {
        let m = row["m"].as_u64().unwrap() as u32;
        assert_eq!(row["abs_squared"], Value::String(7u64.pow(m).to_string()));
    }
}

#[test]
fn degree_divisible_by_p_is_flagged_but_summed() {
    let out = run_spec("expsum", "degree_p_f3.json", &[]);
    let r = json(&out);
    assert!(!r["warnings"].as_array().unwrap().is_empty());
    assert_eq!(r["hypotheses"]["degree_prime_to_p"], false);
    assert!(!r["sums"].as_array().unwrap().is_empty());
    assert_ne!(out.status.code(), Some(2));
}

#[test]
fn separated_cubic_factors_into_one_variable_pieces() {
    let out = run_spec("expsum", "diag_cubic_f7.json", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(check(&r, "kunneth")["holds"], true);
    assert_eq!(r["lfunction"]["degree"], 4);
}

#[test]
fn positivity_reads_a_factor_file() {
    let out = run_spec("positivity", "factors.json", &["--order", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["factors"].as_array().unwrap().len(), 3);
    assert_eq!(r["factors"][2]["deg_x"], 2);
}

#[test]
fn positivity_random_factors_are_reproducible() {
    let a = weillab(&["positivity", "--random", "25", "--seed", "7"]);
    let b = weillab(&["positivity", "--random", "25", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(weillab(&["positivity"]).status.code(), Some(2));
}

#[test]
fn tau_checks_pass() {
    let out = weillab(&["tau", "--max-n", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["primes"].as_array().unwrap().len(), 25);
    assert_eq!(weillab(&["tau", "--max-n", "50"]).status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_the_report() {
    let one = run_spec("zeta", "e_f5.json", &["--threads", "1"]);
    let four = run_spec("zeta", "e_f5.json", &["--threads", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn timings_appear_only_on_request() {
    let plain = json(&run_spec("zeta", "e_f5.json", &[]));
    assert!(plain.get("timings_ms").is_none());
    let timed = json(&run_spec("zeta", "e_f5.json", &["--timings"]));
    assert!(timed["timings_ms"].is_object());
}

#[test]
fn zero_polynomial_over_the_projective_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("line.json");
    std::fs::write(&file, r#"{"p": 3, "a": 1, "model": "projective", "vars": ["x", "y"], "polys": [[]]}"#).unwrap();
    let out = weillab(&["count", file.to_str().unwrap(), "--max-m", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["counts"], serde_json::json!(["4"]));
}
