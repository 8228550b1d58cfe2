//! The verification batteries behind each command.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use weillab_core::cyclo::{CycloRational, CyclotomicInt};
use weillab_core::expsum::{
    abs_bound_check, hypothesis_warnings, plan_exp_sum, ExpSumError, purity_check, required_terms, sheaf_lfunction, split_components,
    SheafLFunction, VerdictMode,
};
use weillab_core::geometry::{smoothness_probe, MPoly, Model, SmoothnessVerdict, VarietySpec};
use weillab_core::modulartau::{delta_expansion, ramanujan_check, MODULUS_TOLERANCE};
use weillab_core::positivity::{
    closed_point_factors, dominance_check, power_sums, tensor_local_factor_series, tensor_logderiv_series,
    LocalFactor, PositivityError,
};
use weillab_core::weilverify::{
    ci_bound_check, duality_check, functional_equation_check, weight_split, weight_predicate, WeightSplit,
    PAIRING_TOLERANCE,
};
use weillab_core::zetarec::{expand_count_series, rational_reconstruct, zeta_series};
use weillab_core::{poly, PrimePower, ZetaFunction, DEFAULT_BUDGET, DEFAULT_HOLDOUT};

use crate::error::{Error, Result};
use crate::json::{rational_string, strings, VarietyFile, ZetaJson};
use crate::parallel;
use crate::report::{Check, Mode, Report, Table};

/// Extension degrees counted when `--max-m` is not given.
pub const DEFAULT_MAX_M: u32 = 8;
/// Default relative tolerance on root moduli.
pub const DEFAULT_MODULUS_TOLERANCE: f64 = 1e-9;
/// Default relative tolerance for L-function purity.
pub const DEFAULT_PURITY_TOLERANCE: f64 = 1e-8;
/// Largest extension degree searched for singular points.
pub const SMOOTHNESS_PROBE_DEGREE: u32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub budget: u64,
    pub max_m: Option<u32>,
    pub holdout: usize,
    pub dim: Option<u32>,
    pub tolerance: Option<f64>,
    pub threads: usize,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            budget: DEFAULT_BUDGET,
            max_m: None,
            holdout: DEFAULT_HOLDOUT,
            dim: None,
            tolerance: None,
            threads: 1,
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::input("budget must be at least 1"));
        }
        if self.holdout == 0 {
            return Err(Error::input("holdout must be at least 1"));
        }
        if self.max_m == Some(0) {
            return Err(Error::input("--max-m must be at least 1"));
        }
        if self.tolerance.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::input("tolerance must be a positive number"));
        }
        Ok(())
    }

    /// Everything that can influence a result. The thread count is left
    /// out: it never changes one.
    pub fn echo(&self, max_m: Option<u32>) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("budget".into(), json!(self.budget));
        if let Some(max_m) = max_m {
            m.insert("max_m".into(), json!(max_m));
        }
        m.insert("holdout".into(), json!(self.holdout));
        if let Some(d) = self.dim {
            m.insert("dim".into(), json!(d));
        }
        if let Some(t) = self.tolerance {
            m.insert("tolerance".into(), json!(t));
        }
        m
    }

    fn modulus_tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_MODULUS_TOLERANCE)
    }

    fn pairing_tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(PAIRING_TOLERANCE)
    }

    fn purity_tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_PURITY_TOLERANCE)
    }
}

struct Stopwatch {
    enabled: bool,
    start: Instant,
    laps: Map<String, Value>,
}

impl Stopwatch {
    fn new(enabled: bool) -> Self {
        Stopwatch { enabled, start: Instant::now(), laps: Map::new() }
    }

    fn lap(&mut self, name: &str) {
        if self.enabled {
            let ms = self.start.elapsed().as_secs_f64() * 1e3;
            self.laps.insert(name.into(), json!((ms * 1e3).round() / 1e3));
            self.start = Instant::now();
        }
    }

    fn finish(self, report: &mut Report) {
        if self.enabled {
            report.timings_ms = Some(self.laps);
        }
    }
}

fn input_echo(source: &str, spec: &VarietySpec) -> Value {
    json!({ "source": source, "variety": VarietyFile::from_spec(spec) })
}

/// `count`: `N_1 .. N_max_m`.
pub fn count_report(spec: &VarietySpec, source: &str, cfg: &RunConfig) -> Report {
    let max_m = cfg.max_m.unwrap_or(DEFAULT_MAX_M);
    let mut report = Report::new("count", cfg.echo(Some(max_m)));
    let mut watch = Stopwatch::new(cfg.timings);
    report.set("input", input_echo(source, spec));
    report.table = Table::new(&["m", "count"]);
    match parallel::count_series(spec, max_m, cfg.budget, cfg.threads) {
        Ok(series) => {
            for (i, c) in series.counts.iter().enumerate() {
                report.table.push(vec![(i + 1).to_string(), c.to_string()]);
            }
            report.set("q", spec.base().q().to_string());
            report.set("counts", strings(&series.counts));
        }
        Err(e) => report.error(e),
    }
    watch.lap("count");
    watch.finish(&mut report);
    report.finish();
    report
}

fn smoothness_json(v: &SmoothnessVerdict) -> Value {
    match v {
        SmoothnessVerdict::NoSingularPointFound { searched_up_to } => {
            json!({ "singular_point_found": false, "searched_up_to": searched_up_to })
        }
        SmoothnessVerdict::SingularPoint { m, point } => json!({
            "singular_point_found": true,
            "extension_degree": m,
            "point": point.iter().map(|x| x.coeffs().to_vec()).collect::<Vec<_>>(),
        }),
    }
}

fn split_json(split: &WeightSplit) -> Value {
    let factors: Vec<Value> = split
        .factors
        .iter()
        .map(|f| {
            json!({
                "weight": f.weight,
                "poly": strings(f.poly.coeffs()),
                "roots": f.roots.iter().map(|r| json!({
                    "re": r.re, "im": r.im, "modulus": r.modulus, "residual": r.residual,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "betti": split.betti_numbers(),
        "factors": factors,
        "band": split.band,
        "precision_bits": split.precision,
        "max_relative_deviation": split.max_relative_deviation,
    })
}

/// `zeta`: counts, exact reconstruction and, given a dimension, the full
/// battery of consequences.
pub fn zeta_report(spec: &VarietySpec, source: &str, cfg: &RunConfig) -> Report {
    let max_m = cfg.max_m.unwrap_or(DEFAULT_MAX_M);
    let mut report = Report::new("zeta", cfg.echo(Some(max_m)));
    let mut watch = Stopwatch::new(cfg.timings);
    report.set("input", input_echo(source, spec));

    let counts = match parallel::count_series(spec, max_m, cfg.budget, cfg.threads) {
        Ok(c) => c,
        Err(e) => {
            report.error(e);
            report.finish();
            return report;
        }
    };
    watch.lap("count");
    report.set("counts", strings(&counts.counts));
    let z = match zeta_series(&counts, max_m as usize).and_then(|s| rational_reconstruct(&s, cfg.holdout)) {
        Ok(z) => z,
        Err(e) => {
            report.error(e);
            report.finish();
            return report;
        }
    };
    watch.lap("reconstruct");
    report.set("zeta", ZetaJson::from_zeta(&z));
    report.check(Check::exact(
        "holdout_prediction",
        true,
        json!({ "terms_used": z.terms_used(), "holdout": z.holdout() }),
    ));
    let predicted = expand_count_series(&z, max_m as usize);
    let actual: Vec<BigInt> = counts.counts.iter().map(|c| BigInt::from(c.clone())).collect();
    report.check(Check::exact("count_recovery", predicted == actual, json!({ "predicted": strings(&predicted) })));
    report.table = Table::new(&["m", "count", "predicted"]);
    for (i, (a, p)) in actual.iter().zip(&predicted).enumerate() {
        report.table.push(vec![(i + 1).to_string(), a.to_string(), p.to_string()]);
    }

    if let Some(n) = cfg.dim.or(spec.declared_dim()) {
        let spec = spec.clone().with_dim(n);
        weil_battery(&mut report, &spec, &z, n, cfg);
        watch.lap("verify");
    }
    watch.finish(&mut report);
    report.finish();
    report
}

fn hypotheses(spec: &VarietySpec, n: u32, cfg: &RunConfig) -> (Value, Option<Check>) {
    let projective = spec.model() == Model::Projective;
    let complete_intersection =
        projective && spec.polys().len() as i64 == spec.num_vars() as i64 - 1 - n as i64;
    let mut violated = Vec::new();
    if !projective {
        violated.push("proper");
    }
    if !complete_intersection {
        violated.push("complete_intersection");
    }
    let probe = smoothness_probe(spec, SMOOTHNESS_PROBE_DEGREE, cfg.budget);
    let (smooth_json, check) = match &probe {
        Ok(v) => {
            if v.is_singular() {
                violated.push("smooth");
            }
            let j = smoothness_json(v);
            (j.clone(), Some(Check::exact("smoothness_probe", !v.is_singular(), j).advisory()))
        }
        Err(e) => (json!({ "error": e.to_string() }), None),
    };
    let h = json!({
        "model": spec.model().as_str(),
        "proper": projective,
        "declared_dim": n,
        "complete_intersection": complete_intersection,
        "smoothness": smooth_json,
        "violated": violated,
    });
    (h, check)
}

fn weil_battery(report: &mut Report, spec: &VarietySpec, z: &ZetaFunction, n: u32, cfg: &RunConfig) {
    let (hyp, smooth_check) = hypotheses(spec, n, cfg);
    report.set("hypotheses", hyp);
    let split = weight_split(z, n);
    match &split {
        Ok(s) => {
            report.set("betti", s.betti_numbers());
            report.set("weight_split", split_json(s));
            let tol = cfg.modulus_tolerance();
            report.check(Check::float(
                "weight_split",
                s.max_relative_deviation <= tol,
                tol,
                json!({ "max_relative_deviation": s.max_relative_deviation, "betti": s.betti_numbers() }),
            ));
            let q = z.q().q();
            let per_weight: Vec<Value> = s
                .factors
                .iter()
                .map(|f| {
                    let r = weight_predicate(&f.poly.to_rationals(), &q, f.weight, tol);
                    json!({ "weight": f.weight, "holds": r.holds, "max_relative_deviation": r.max_relative_deviation })
                })
                .collect();
            let all = per_weight.iter().all(|v| v["holds"] == json!(true));
            report.check(Check::float("weight_predicate", all, tol, Value::Array(per_weight)));
        }
        Err(e) => {
            report.check(Check::float(
                "weight_split",
                false,
                cfg.modulus_tolerance(),
                json!({ "error": e.to_string() }),
            ));
        }
    }
    let split = split.ok();

    let fe = functional_equation_check(z, n, split.as_ref());
    let fe_json = json!({
        "chi": fe.chi,
        "epsilon": fe.epsilon,
        "parity_violated": fe.parity_violated,
        "middle_multiplicity": fe.middle_multiplicity,
        "epsilon_rule_consistent": fe.epsilon_rule_consistent,
    });
    report.set("functional_equation", fe_json.clone());
    report.check(Check::exact("functional_equation", fe.holds, fe_json));
    if let Some(consistent) = fe.epsilon_rule_consistent {
        report.check(Check::exact(
            "epsilon_rule",
            consistent,
            json!({ "epsilon": fe.epsilon, "middle_multiplicity": fe.middle_multiplicity }),
        ));
    }

    if let Some(s) = &split {
        let d = duality_check(s);
        let tol = cfg.pairing_tolerance();
        report.check(Check::float(
            "duality",
            d.worst_distance <= tol,
            tol,
            json!({ "worst_distance": if d.worst_distance.is_finite() { json!(d.worst_distance) } else { json!("inf") } }),
        ));
        match ci_bound_check(spec, z, s) {
            Ok(ci) => report.check(Check::exact(
                "point_count_bound",
                ci.holds,
                json!({
                    "n1": ci.n1.to_string(),
                    "projective_count": ci.projective_count.to_string(),
                    "difference": ci.lhs.to_string(),
                    "b": ci.b,
                    "bound_squared": ci.bound_squared.to_string(),
                }),
            )),
            Err(e) => report.error(e),
        }
    }
    if let Some(c) = smooth_check {
        report.check(c);
    }
}

fn cyclo_json(c: &CyclotomicInt) -> Vec<String> {
    strings(c.coeffs())
}

fn cyclo_rational_json(c: &CycloRational) -> Value {
    match c.to_cyclotomic_int() {
        Some(i) => json!(cyclo_json(&i)),
        None => json!(c.coeffs().iter().map(rational_string).collect::<Vec<_>>()),
    }
}

fn lfunction_json(l: &SheafLFunction) -> Value {
    json!({
        "side": l.side.as_str(),
        "degree": l.degree(),
        "expected_degree": l.expected_degree,
        "coefficients": l.poly.iter().map(cyclo_rational_json).collect::<Vec<_>>(),
        "terms_used": l.terms_used,
        "holdout": l.holdout,
    })
}

fn mode_of(m: VerdictMode) -> Mode {
    match m {
        VerdictMode::Exact => Mode::Exact,
        VerdictMode::Interval => Mode::Interval,
        VerdictMode::Tolerance => Mode::Float,
    }
}

/// Sums `S_1..S_t` for one polynomial, stopping at the first error.
fn sums_up_to(
    poly: &MPoly,
    base: PrimePower,
    t: u32,
    cfg: &RunConfig,
) -> (Vec<CyclotomicInt>, Option<ExpSumError>) {
    let mut sums = Vec::new();
    for m in 1..=t {
        match parallel::exp_sum(poly, base, m, cfg.budget, cfg.threads) {
            Ok(s) => sums.push(s),
            Err(e) => return (sums, Some(e)),
        }
    }
    (sums, None)
}

/// Sums after which a fit of an L-function of degree `(d - 1)^n` is
/// unique: the fitted prefix is longer than twice the degree.
fn unique_fit_terms(d: u32, n: u32, holdout: usize) -> u32 {
    (2 * (d.saturating_sub(1) as usize).pow(n) + holdout) as u32
}

/// Reconstructs the L-function from `sums`. With `extend`, an ambiguous or
/// mispredicting fit is retried with one more sum until the fit is unique
/// or the budget runs out.
fn fit_lfunction(
    poly: &MPoly,
    base: PrimePower,
    sums: &mut Vec<CyclotomicInt>,
    extend: bool,
    cfg: &RunConfig,
) -> Result<SheafLFunction, ExpSumError> {
    let (d, n) = (poly.total_degree(), poly.num_vars() as u32);
    let cap = unique_fit_terms(d, n, cfg.holdout);
    loop {
        let fit = sheaf_lfunction(sums, base, d, n, cfg.holdout);
        let retry = matches!(fit, Err(ExpSumError::NoRationalFit { .. } | ExpSumError::HoldoutMismatch { .. }));
        if !(extend && retry && (sums.len() as u32) < cap) {
            return fit;
        }
        let m = sums.len() as u32 + 1;
        match parallel::exp_sum(poly, base, m, cfg.budget, cfg.threads) {
            Ok(s) => sums.push(s),
            Err(_) => return fit,
        }
    }
}

/// Relative slack used when an enclosure of `|S|` straddles the bound.
pub const ABS_BOUND_TOLERANCE: f64 = 1e-9;

/// `expsum`: the sums over `F_{q^m}^n`, the square-root bound, and the
/// L-function with its degree and purity.
///
/// Without `--max-m` the sums run to the fewest that can determine the
/// L-function, and further sums are added while the fit stays ambiguous.
pub fn expsum_report(spec: &VarietySpec, source: &str, cfg: &RunConfig) -> Result<Report> {
    let [poly] = spec.polys() else {
        return Err(Error::input("an exponential-sum input holds exactly one polynomial"));
    };
    let base = spec.base();
    let n = poly.num_vars() as u32;
    let d = poly.total_degree();
    let max_m = cfg.max_m.unwrap_or(required_terms(d, n, cfg.holdout) as u32);
    let mut report = Report::new("expsum", cfg.echo(cfg.max_m));
    let mut watch = Stopwatch::new(cfg.timings);
    report.set("input", input_echo(source, spec));
    report.set("n", n);
    report.set("degree", d);
    let warnings: Vec<String> = hypothesis_warnings(poly).iter().map(ToString::to_string).collect();
    report.set("warnings", &warnings);
    report.set("hypotheses", json!({ "degree_prime_to_p": warnings.is_empty() }));

    let planned = plan_exp_sum(poly, base, max_m).planned_evaluations();
    if planned > cfg.budget as u128 {
        report.error(ExpSumError::BudgetExceeded { m: max_m, planned, budget: cfg.budget });
        report.finish();
        return Ok(report);
    }
    let (mut sums, err) = sums_up_to(poly, base, max_m, cfg);
    if let Some(e) = err {
        report.error(e);
        report.finish();
        return Ok(report);
    }
    let lfunction = fit_lfunction(poly, base, &mut sums, cfg.max_m.is_none(), cfg);
    watch.lap("sums");
    report.set("sums_computed", sums.len());

    let mut rows = Vec::new();
    let mut bound_ok = true;
    let mut gauss_ok = true;
    let mut mode = Mode::Exact;
    report.table = Table::new(&["m", "abs", "bound", "holds"]);
    for (i, s) in sums.iter().enumerate() {
        let m = i as u32 + 1;
        let q_m = base.extend(m).q();
        let r = abs_bound_check(s, d, n, &q_m);
        bound_ok &= r.holds;
        gauss_ok &= r.equals_sqrt_q_n;
        mode = match (mode, r.mode) {
            (Mode::Float, _) | (_, VerdictMode::Tolerance) => Mode::Float,
            (Mode::Interval, _) | (_, VerdictMode::Interval) => Mode::Interval,
            _ => Mode::Exact,
        };
        report.table.push(vec![m.to_string(), format!("{:e}", r.abs_value), format!("{:e}", r.bound), r.holds.to_string()]);
        rows.push(json!({
            "m": m,
            "S": cyclo_json(s),
            "abs": r.abs_value,
            "abs_squared": r.abs_squared_exact.map(|k| k.to_string()),
            "bound": r.bound,
            "holds": r.holds,
            "mode": mode_of(r.mode),
        }));
    }
    report.set("sums", rows);
    let mut bound = Check::exact("abs_bound", bound_ok, json!({ "sums_checked": sums.len() })).with_mode(mode);
    if mode == Mode::Float {
        bound.tolerance = Some(ABS_BOUND_TOLERANCE);
    }
    report.check(bound);
    if d == 2 && base.p() != 2 {
        report.check(Check::exact("gauss_equality", gauss_ok, json!({ "sums_checked": sums.len() })).with_mode(mode));
    }

    lfunction_checks(&mut report, poly, base, lfunction, n, cfg);
    watch.lap("lfunction");
    watch.finish(&mut report);
    report.finish();
    Ok(report)
}

fn lfunction_checks(
    report: &mut Report,
    poly: &MPoly,
    base: PrimePower,
    lfunction: Result<SheafLFunction, ExpSumError>,
    n: u32,
    cfg: &RunConfig,
) {
    let l = match lfunction {
        Ok(l) => l,
        Err(e) => {
            report.check(Check::exact("lfunction_degree", false, json!({ "error": e.to_string() })));
            return;
        }
    };
    report.set("lfunction", lfunction_json(&l));
    report.check(Check::exact(
        "lfunction_degree",
        l.degree() == l.expected_degree,
        json!({ "degree": l.degree(), "expected": l.expected_degree }),
    ));
    report.check(Check::exact("lfunction_side", l.side_matches_parity, json!({ "side": l.side.as_str(), "n": n })));
    let tol = cfg.purity_tolerance();
    match purity_check(&l, tol) {
        Ok(p) => report.check(Check::float(
            "purity",
            p.holds,
            tol,
            json!({ "target_modulus": p.target_modulus, "moduli": p.moduli, "max_relative_deviation": p.max_relative_deviation }),
        )),
        Err(e) => report.check(Check::float("purity", false, tol, json!({ "error": e.to_string() }))),
    }

    let has_constant = poly.terms().iter().any(|t| t.exps.iter().all(|&e| e == 0));
    let all_used = (0..poly.num_vars()).all(|v| poly.uses_var(v));
    let parts = split_components(poly, base);
    if parts.len() >= 2 && !has_constant && all_used {
        match kunneth(&parts, base, cfg) {
            Ok(product) => report.check(Check::exact(
                "kunneth",
                product == l.poly,
                json!({ "components": parts.len(), "tensor_degree": poly::degree(&product).unwrap_or(0) }),
            )),
            Err(e) => report.check(Check::exact("kunneth", false, json!({ "error": e }))),
        }
    }
}

/// Tensor product of the components' L-functions.
fn kunneth(parts: &[MPoly], base: PrimePower, cfg: &RunConfig) -> Result<Vec<CycloRational>, String> {
    let mut acc: Option<Vec<CycloRational>> = None;
    for part in parts {
        let (d, n) = (part.total_degree(), part.num_vars() as u32);
        let t = required_terms(d, n, cfg.holdout) as u32;
        let (mut sums, err) = sums_up_to(part, base, t, cfg);
        if let Some(e) = err {
            return Err(e.to_string());
        }
        let l = fit_lfunction(part, base, &mut sums, true, cfg).map_err(|e| e.to_string())?;
        acc = Some(match acc {
            None => l.poly,
            Some(a) => poly::tensor(&a, &l.poly),
        });
    }
    acc.ok_or_else(|| "no components".to_owned())
}

/// Rational local factors with random coefficients `a / b`, `|a| <= 9`,
/// `1 <= b <= 9`, degree `1..=4`, constant term 1.
pub fn random_factors(count: usize, seed: u64, base: PrimePower) -> Vec<LocalFactor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let deg = rng.gen_range(1..=4usize);
            let mut c = vec![BigRational::from_integer(1.into())];
            for i in 1..=deg {
                let num: i64 = rng.gen_range(-9..=9);
                let den: i64 = rng.gen_range(1..=9);
                // keep the degree exact
                let num = if i == deg && num == 0 { 1 } else { num };
                c.push(BigRational::new(num.into(), den.into()));
            }
            LocalFactor::new(c, base, 1).expect("constant term is 1")
        })
        .collect()
}

pub struct PositivityOptions {
    pub max_k: u32,
    pub order: usize,
    pub include_series: bool,
}

/// `positivity`: nonnegativity of both tensor-power series for each factor
/// and `k = 1..=max_k`.
pub fn positivity_report(factors: &[LocalFactor], opts: &PositivityOptions, config: Map<String, Value>) -> Report {
    let mut report = Report::new("positivity", config);
    let mut negatives: Vec<Value> = Vec::new();
    let mut inverse_ok = true;
    let mut entries = Vec::new();
    report.table = Table::new(&["factor", "k", "logderiv_nonnegative", "local_factor_nonnegative"]);
    for (i, f) in factors.iter().enumerate() {
        let mut per_k = Vec::new();
        match power_sums(f, opts.order) {
            // both sides in u = t^{deg x}
            Ok(s) => {
                let one = [BigRational::from_integer(1.into())];
                inverse_ok &= poly::exp_series(&s, opts.order) == poly::expand_ratio(&one, f.poly(), opts.order + 1)
            }
            Err(e) => report.error(e),
        }
        for k in 1..=opts.max_k {
            let ld = tensor_logderiv_series(f, k, opts.order);
            let lf = tensor_local_factor_series(f, k, opts.order);
            for (which, r) in [("logderiv", &ld), ("local_factor", &lf)] {
                if let Err(PositivityError::NegativeCoefficient { index }) = r {
                    negatives.push(json!({ "factor": i, "k": k, "series": which, "index": index }));
                } else if let Err(e) = r {
                    report.error(e);
                }
            }
            report.table.push(vec![i.to_string(), k.to_string(), ld.is_ok().to_string(), lf.is_ok().to_string()]);
            let mut entry = json!({ "k": k, "logderiv_nonnegative": ld.is_ok(), "local_factor_nonnegative": lf.is_ok() });
            if opts.include_series {
                if let (Ok(a), Ok(b)) = (&ld, &lf) {
                    entry["logderiv"] = json!(a.iter().map(rational_string).collect::<Vec<_>>());
                    entry["local_factor"] = json!(b.iter().map(rational_string).collect::<Vec<_>>());
                }
            }
            per_k.push(entry);
        }
        entries.push(json!({
            "poly": f.poly().iter().map(rational_string).collect::<Vec<_>>(),
            "deg_x": f.deg_x(),
            "q_x": f.q_x().q().to_string(),
            "results": per_k,
        }));
    }
    report.set("factors", entries);
    report.check(Check::exact(
        "nonnegative_coefficients",
        negatives.is_empty(),
        json!({ "factors": factors.len(), "max_k": opts.max_k, "order": opts.order, "negative": negatives }),
    ));
    report.check(Check::exact("exp_of_power_sums_inverts_factor", inverse_ok, json!({ "factors": factors.len() })));
    report.finish();
    report
}

/// Coefficientwise dominance of each closed-point factor group by the full
/// zeta series, through order `t`.
pub fn dominance_entry(name: &str, z: &ZetaFunction, t: usize) -> (bool, Value) {
    let counts: Vec<BigUint> = expand_count_series(z, t)
        .into_iter()
        .map(|c| c.to_biguint().expect("point counts are nonnegative"))
        .collect();
    let factors = closed_point_factors(&counts, t);
    match dominance_check(&factors, t) {
        Ok(r) => {
            let zeta = poly::expand_ratio(&z.numerator().to_rationals(), &z.denominator().to_rationals(), t + 1);
            let product_is_zeta = r.product == zeta;
            let holds = r.holds && product_is_zeta;
            (holds, json!({ "name": name, "factor_groups": factors.len(), "dominated": r.holds, "product_is_zeta": product_is_zeta }))
        }
        Err(e) => (false, json!({ "name": name, "error": e.to_string() })),
    }
}

/// `tau`: the discriminant form's coefficients and the Ramanujan bound at
/// every prime up to `primes_up_to`.
pub fn tau_report(max_n: usize, primes_up_to: u64, tolerance: Option<f64>) -> Result<Report> {
    if max_n == 0 {
        return Err(Error::input("--max-n must be at least 1"));
    }
    let mut config = Map::new();
    config.insert("max_n".into(), json!(max_n));
    config.insert("check_primes_up_to".into(), json!(primes_up_to));
    if let Some(t) = tolerance {
        config.insert("tolerance".into(), json!(t));
    }
    let tol = tolerance.unwrap_or(MODULUS_TOLERANCE);
    let mut report = Report::new("tau", config);
    let exp = delta_expansion(max_n);
    let mut rows = Vec::new();
    let (mut bound_ok, mut moduli_ok) = (true, true);
    report.table = Table::new(&["p", "tau", "bound_holds", "max_relative_deviation"]);
    for p in (2..=primes_up_to).filter(|&p| weillab_core::ffield::is_prime(p)) {
        let r = ramanujan_check(p, &exp)?;
        let ok = r.max_relative_deviation <= tol;
        bound_ok &= r.bound_holds;
        moduli_ok &= ok;
        report.table.push(vec![
            p.to_string(),
            r.a_p.to_string(),
            r.bound_holds.to_string(),
            format!("{:e}", r.max_relative_deviation),
        ]);
        rows.push(json!({
            "p": p,
            "tau": r.a_p.to_string(),
            "four_p11": r.bound_rhs.to_string(),
            "bound_holds": r.bound_holds,
            "root_moduli": r.root_moduli,
            "target_modulus": r.target_modulus,
            "max_relative_deviation": r.max_relative_deviation,
        }));
    }
    report.set("primes", rows);
    report.check(Check::exact("ramanujan_bound", bound_ok, json!({ "primes_up_to": primes_up_to })));
    report.check(Check::float("root_moduli", moduli_ok, tol, json!({ "target": "p^(11/2)" })));
    report.finish();
    Ok(report)
}
