//! The built-in verification suite run by `verify-all`.
//!
//! Every case is a full report of one of the ordinary commands together
//! with the verdict it is expected to reach. The hypothesis-violation
//! controls are expected to fail.

use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use weillab_core::expsum::{plan_exp_sum, required_terms};
use weillab_core::geometry::{MPoly, Model, VarietySpec};
use weillab_core::positivity::DEFAULT_ORDER;
use weillab_core::{PrimePower, ZetaFunction};

use crate::json::{VarietyFile, ZetaJson};
use crate::pipeline::{self, PositivityOptions, RunConfig};
use crate::report::{Check, Report, Verdict};

pub const P1_F2: &str = include_str!("../../../specs/p1_f2.json");
pub const E_F5: &str = include_str!("../../../specs/e_f5.json");

const ELLIPTIC: [(&str, &str); 7] = [
    ("e_f5", E_F5),
    ("ec_f5_b", include_str!("../../../specs/ec_f5_b.json")),
    ("ec_f7_a", include_str!("../../../specs/ec_f7_a.json")),
    ("ec_f7_b", include_str!("../../../specs/ec_f7_b.json")),
    ("ec_f9", include_str!("../../../specs/ec_f9.json")),
    ("ec_f11_a", include_str!("../../../specs/ec_f11_a.json")),
    ("ec_f11_b", include_str!("../../../specs/ec_f11_b.json")),
];
const QUARTIC: &str = include_str!("../../../specs/quartic_f5.json");
const NODAL_CUBIC: &str = include_str!("../../../specs/nodal_cubic_f5.json");
const AFFINE_PARABOLA: &str = include_str!("../../../specs/parabola_affine_f5.json");

/// Counts needed for an elliptic curve: `deg P + deg Q + holdout + 1`.
pub const ELLIPTIC_MAX_M: u32 = 7;
/// The plane quartic has `deg P + deg Q = 8`: ten counts fit it with one
/// held out, and an eleventh would exceed the default budget.
pub const QUARTIC_MAX_M: u32 = 10;
pub const QUARTIC_HOLDOUT: usize = 1;
pub const CONTROL_MAX_M: u32 = 6;
pub const PROJECTIVE_FIELDS: [u64; 4] = [2, 3, 5, 7];
pub const EXPSUM_FIELDS: [(u64, u32); 4] = [(3, 1), (5, 1), (7, 1), (3, 2)];
pub const POSITIVITY_FACTORS: usize = 500;
pub const POSITIVITY_SEED: u64 = 0x5eed_0003;
pub const POSITIVITY_MAX_K: u32 = 3;
pub const DOMINANCE_ORDER: usize = 15;
pub const TAU_MAX_N: usize = 200;
pub const TAU_PRIMES_UP_TO: u64 = 97;

pub struct Case {
    pub group: &'static str,
    pub name: String,
    pub expected: Verdict,
    pub report: Report,
}

impl Case {
    pub fn matches(&self) -> bool {
        self.report.verdict == self.expected
    }
}

pub fn parse_embedded(name: &str, text: &str) -> VarietySpec {
    VarietyFile::parse(text, Path::new(name))
        .and_then(|f| f.to_spec())
        .unwrap_or_else(|e| panic!("embedded spec {name} is invalid: {e}"))
}

fn with(cfg: &RunConfig, max_m: u32, holdout: usize, dim: u32) -> RunConfig {
    RunConfig { max_m: Some(max_m), holdout, dim: Some(dim), ..cfg.clone() }
}

/// The zeta function recorded in a report, if reconstruction succeeded.
pub fn zeta_of(report: &Report) -> Option<ZetaFunction> {
    let z: ZetaJson = serde_json::from_value(report.body.get("zeta")?.clone()).ok()?;
    z.to_zeta().ok()
}

/// `P^n` over `F_p` for `n <= 2`, `p` in [`PROJECTIVE_FIELDS`].
pub fn projective_spaces(cfg: &RunConfig) -> Vec<Case> {
    let mut out = Vec::new();
    for n in 0..=2u32 {
        for p in PROJECTIVE_FIELDS {
            let base = PrimePower::new(p, 1).expect("prime");
            let spec = VarietySpec::full_space(base, Model::Projective, n as usize + 1).with_dim(n);
            let name = format!("p{n}_f{p}");
            // deg Q = n + 1 and deg P = 0
            let report = pipeline::zeta_report(&spec, &name, &with(cfg, n + 4, cfg.holdout, n));
            out.push(Case { group: "projective_space", name, expected: Verdict::Pass, report });
        }
    }
    out
}

pub fn elliptic_curves(cfg: &RunConfig) -> Vec<Case> {
    ELLIPTIC
        .iter()
        .map(|&(name, text)| {
            let spec = parse_embedded(name, text);
            let report = pipeline::zeta_report(&spec, name, &with(cfg, ELLIPTIC_MAX_M, cfg.holdout, 1));
            Case { group: "elliptic_curve", name: name.to_owned(), expected: Verdict::Pass, report }
        })
        .collect()
}

pub fn quartic(cfg: &RunConfig) -> Case {
    let spec = parse_embedded("quartic_f5", QUARTIC);
    let report = pipeline::zeta_report(&spec, "quartic_f5", &with(cfg, QUARTIC_MAX_M, QUARTIC_HOLDOUT, 1));
    Case { group: "plane_quartic", name: "quartic_f5".into(), expected: Verdict::Pass, report }
}

/// A nodal cubic (not smooth) and an affine curve (not proper).
pub fn controls(cfg: &RunConfig) -> Vec<Case> {
    [("nodal_cubic_f5", NODAL_CUBIC), ("parabola_affine_f5", AFFINE_PARABOLA)]
        .iter()
        .map(|&(name, text)| {
            let spec = parse_embedded(name, text);
            let report = pipeline::zeta_report(&spec, name, &with(cfg, CONTROL_MAX_M, cfg.holdout, 1));
            Case { group: "hypothesis_control", name: name.to_owned(), expected: Verdict::Fail, report }
        })
        .collect()
}

/// `x_1^d + .. + x_n^d` over `F_p`.
pub fn diagonal_form(p: u64, n: usize, d: u32) -> MPoly {
    let terms: Vec<(BigInt, Vec<u32>)> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = d;
            (BigInt::from(1), e)
        })
        .collect();
    MPoly::from_integer_terms(p as u32, n, &terms).expect("arity matches")
}

pub fn diagonal_spec(base: PrimePower, n: usize, d: u32) -> VarietySpec {
    let vars = (1..=n).map(|i| format!("x{i}")).collect();
    VarietySpec::new(base, Model::Affine, vars, vec![diagonal_form(base.p() as u64, n, d)]).expect("valid spec")
}

/// The largest holdout up to `cfg.holdout` whose required sums fit in the
/// budget, or `cfg.holdout` itself when none does.
pub fn fitting_holdout(poly: &MPoly, base: PrimePower, d: u32, n: u32, cfg: &RunConfig) -> usize {
    (1..=cfg.holdout)
        .rev()
        .find(|&h| {
            let t = required_terms(d, n, h) as u32;
            plan_exp_sum(poly, base, t).planned_evaluations() <= cfg.budget as u128
        })
        .unwrap_or(cfg.holdout)
}

/// Diagonal forms of degree `d` in `n <= 2` variables with `p` not
/// dividing `d`.
pub fn exponential_sums(cfg: &RunConfig) -> Vec<Case> {
    let mut out = Vec::new();
    for (p, a) in EXPSUM_FIELDS {
        let base = PrimePower::new(p, a).expect("prime power");
        for d in 2..=4u32 {
            if d as u64 % p == 0 {
                continue;
            }
            for n in 1..=2u32 {
                let spec = diagonal_spec(base, n as usize, d);
                let h = fitting_holdout(&spec.polys()[0], base, d, n, cfg);
                let case_cfg = RunConfig { max_m: None, holdout: h, ..cfg.clone() };
                let name = format!("diag_q{}_d{d}_n{n}", base.q());
                let report = pipeline::expsum_report(&spec, &name, &case_cfg).expect("one polynomial");
                out.push(Case { group: "exponential_sum", name, expected: Verdict::Pass, report });
            }
        }
    }
    out
}

/// Random local factors, then closed-point dominance for the given zeta
/// functions.
pub fn positivity(zetas: &[(String, ZetaFunction)]) -> Case {
    let base = PrimePower::new(5, 1).expect("prime");
    let factors = pipeline::random_factors(POSITIVITY_FACTORS, POSITIVITY_SEED, base);
    let mut config = Map::new();
    config.insert("random".into(), json!(POSITIVITY_FACTORS));
    config.insert("seed".into(), json!(POSITIVITY_SEED));
    config.insert("max_k".into(), json!(POSITIVITY_MAX_K));
    config.insert("order".into(), json!(DEFAULT_ORDER));
    config.insert("dominance_order".into(), json!(DOMINANCE_ORDER));
    let opts = PositivityOptions { max_k: POSITIVITY_MAX_K, order: DEFAULT_ORDER, include_series: false };
    let mut report = pipeline::positivity_report(&factors, &opts, config);
    let mut all = true;
    let mut entries = Vec::new();
    for (name, z) in zetas {
        let (holds, entry) = pipeline::dominance_entry(name, z, DOMINANCE_ORDER);
        all &= holds;
        entries.push(entry);
    }
    report.check(Check::exact("closed_point_dominance", all, Value::Array(entries)));
    report.finish();
    Case { group: "positivity", name: "random_local_factors".into(), expected: Verdict::Pass, report }
}

pub fn tau() -> Case {
    let report = pipeline::tau_report(TAU_MAX_N, TAU_PRIMES_UP_TO, None).expect("valid arguments");
    Case { group: "ramanujan", name: "tau".into(), expected: Verdict::Pass, report }
}

/// Every case, in a fixed order.
pub fn run_all(cfg: &RunConfig) -> Vec<Case> {
    let mut cases = projective_spaces(cfg);
    cases.extend(elliptic_curves(cfg));
    cases.push(quartic(cfg));
    cases.extend(controls(cfg));
    let zetas: Vec<(String, ZetaFunction)> = cases
        .iter()
        .filter(|c| c.expected == Verdict::Pass)
        .filter_map(|c| zeta_of(&c.report).map(|z| (c.name.clone(), z)))
        .collect();
    cases.extend(exponential_sums(cfg));
    cases.push(positivity(&zetas));
    cases.push(tau());
    cases
}

/// Summary of a suite run. A case that reached its expected verdict holds;
/// the summary is an error if any case stopped on a resource or input error.
pub fn summary(cases: &[Case], config: Map<String, Value>) -> Report {
    let mut report = Report::new("verify-all", config);
    let mut rows = Vec::new();
    report.table = crate::report::Table::new(&["group", "case", "expected", "verdict"]);
    for c in cases {
        let verdict = serde_json::to_value(c.report.verdict).expect("serializes");
        let expected = serde_json::to_value(c.expected).expect("serializes");
        report.table.push(vec![
            c.group.to_owned(),
            c.name.clone(),
            expected.as_str().unwrap_or_default().to_owned(),
            verdict.as_str().unwrap_or_default().to_owned(),
        ]);
        rows.push(json!({
            "group": c.group,
            "name": c.name,
            "expected": expected,
            "verdict": verdict,
            "failed_checks": c.report.failed_checks(),
            "errors": c.report.errors,
        }));
        if c.report.verdict == Verdict::Error {
            report.error(format!("{}: {}", c.name, c.report.errors.join("; ")));
        } else {
            report.check(Check::exact(&format!("{}/{}", c.group, c.name), c.matches(), json!({})));
        }
    }
    report.set("cases", rows);
    report.finish();
    report
}
