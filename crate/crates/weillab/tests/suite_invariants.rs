use std::sync::OnceLock;

use num_bigint::BigInt;

use weillab::pipeline::{self, RunConfig};
use weillab::suite::{self, Case};
use weillab_core::zetarec::{exp_integer_series, hankel_rank_bound};

fn counts(case: &Case) -> Vec<BigInt> {
    case.report.body["counts"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().parse().unwrap()).collect()
}

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        let cfg = RunConfig::default();
        let mut v = suite::projective_spaces(&cfg);
        v.extend(suite::elliptic_curves(&cfg));
        v
    })
}

#[test]
fn hankel_windows_vanish_exactly_at_the_recurrence_order() {
    for case in cases() {
        let z = suite::zeta_of(&case.report).unwrap_or_else(|| panic!("{}: no zeta", case.name));
        let n = counts(case);
        let series = exp_integer_series(&n, n.len()).unwrap();
        let (a, b) = (z.numerator().degree(), z.denominator().degree());
        let start = (a + 1).saturating_sub(b);
        assert_eq!(hankel_rank_bound(&series, start, b + 1), Some(b), "{}", case.name);
    }
}

#[test]
fn more_counts_give_the_same_zeta_function() {
    // one more count stays inside the default budget for q <= 7
    for case in cases().iter().filter(|c| c.report.body["input"]["variety"]["p"].as_u64().unwrap() <= 7) {
        let z = suite::zeta_of(&case.report).unwrap();
        let spec = pipeline_spec(case);
        let max_m = case.report.config["max_m"].as_u64().unwrap() as u32;
        let dim = case.report.body["hypotheses"]["declared_dim"].as_u64().unwrap() as u32;
        let cfg = RunConfig { max_m: Some(max_m + 1), dim: Some(dim), ..RunConfig::default() };
        let report = pipeline::zeta_report(&spec, &case.name, &cfg);
        let longer = suite::zeta_of(&report).unwrap_or_else(|| panic!("{}: {:?}", case.name, report.errors));
        assert_eq!(z.numerator(), longer.numerator(), "{}", case.name);
        assert_eq!(z.denominator(), longer.denominator(), "{}", case.name);
    }
}

fn pipeline_spec(case: &Case) -> weillab_core::VarietySpec {
    let text = serde_json::to_string(&case.report.body["input"]["variety"]).unwrap();
    suite::parse_embedded(&case.name, &text)
}

#[test]
fn normalization_and_integrality() {
    for case in cases() {
        let z = suite::zeta_of(&case.report).unwrap();
        assert_eq!(z.numerator().constant_term(), BigInt::from(1));
        assert_eq!(z.denominator().constant_term(), BigInt::from(1));
        assert!(case.matches(), "{}: {:?}", case.name, case.report.failed_checks());
    }
}
