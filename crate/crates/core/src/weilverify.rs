//! Checks of a reconstructed zeta function against the Weil conjectures.
//!
//! Verdicts that are statements about integer polynomials (the functional
//! equation, the regrouping `prod P_i = P, Q`, the point-count bound) are
//! decided exactly. Root moduli and the duality pairing are floating point
//! and carry their tolerance in the report.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ffield::{projective_space_count, PrimePower};
use crate::geometry::VarietySpec;
use crate::poly::ZPoly;
use crate::roots::{self, Root, PRECISION_LADDER};
use crate::zetarec::{expand_counts, ZetaFunction};

/// Relative band `| |alpha| / q^{i/2} - 1 |` for assigning a weight.
pub const CLASSIFY_BAND: f64 = 1e-6;

/// Largest accepted `|Log(a / b)|` between paired eigenvalues.
pub const PAIRING_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum WeilError {
    /// A reciprocal root whose modulus is no power `q^{i/2}` with `i` of the
    /// right parity in `0..=2n`.
    UnclassifiableRoot { modulus: f64, weight_estimate: f64, in_numerator: bool },
    /// Grouping the classified roots does not reproduce `P` and `Q` exactly,
    /// even at the highest precision.
    NonIntegerRegroup,
    /// The root iteration did not converge at any precision.
    RootFindingFailed,
    MissingDeclaredDim,
}

impl fmt::Display for WeilError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeilError::UnclassifiableRoot { modulus, weight_estimate, in_numerator } => write!(
                f,
                "reciprocal root of {} with modulus {modulus:.12} has weight {weight_estimate:.9}, outside every admissible class",
                if *in_numerator { "P" } else { "Q" }
            ),
            WeilError::NonIntegerRegroup => {
                write!(f, "classified roots do not regroup into integer factors of P and Q")
            }
            WeilError::RootFindingFailed => write!(f, "root iteration did not converge"),
            WeilError::MissingDeclaredDim => write!(f, "the variety does not declare its dimension"),
        }
    }
}

impl core::error::Error for WeilError {}

/// A reciprocal root `alpha`, rounded to double precision for reporting.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInfo {
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
    /// Relative residual of the corresponding root of the reversed factor.
    pub residual: f64,
}

impl RootInfo {
    fn from_root(r: &Root, prec: u32) -> Self {
        let (re, im) = r.to_f64();
        RootInfo { re, im, modulus: r.value.abs(prec).to_f64(), residual: r.residual }
    }

    pub fn arg(&self) -> f64 {
        libm::atan2(self.im, self.re)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightFactor {
    pub weight: u32,
    pub poly: ZPoly,
    pub roots: Vec<RootInfo>,
}

/// `P = prod_{i odd} P_i`, `Q = prod_{i even} P_i`, with every reciprocal
/// root of `P_i` of modulus `q^{i/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSplit {
    pub q: PrimePower,
    pub n: u32,
    /// One entry per weight `0..=2n`.
    pub factors: Vec<WeightFactor>,
    pub band: f64,
    pub precision: u32,
    /// Largest `| |alpha| / q^{i/2} - 1 |` over all roots.
    pub max_relative_deviation: f64,
}

impl WeightSplit {
    /// `[deg P_0, .., deg P_{2n}]`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.poly.degree()).collect()
    }

    pub fn factor(&self, i: u32) -> &WeightFactor {
        &self.factors[i as usize]
    }
}

fn ln_q(q: PrimePower) -> f64 {
    q.k() as f64 * libm::log(q.p() as f64)
}

/// `(weight estimate, nearest class, relative deviation from that class)`.
fn classify(modulus: f64, lnq: f64) -> (f64, u32, f64) {
    let w = 2.0 * libm::log(modulus) / lnq;
    let i = libm::round(w).max(0.0);
    let expected = libm::exp(i * lnq / 2.0);
    (w, i as u32, (modulus / expected - 1.0).abs())
}

enum Attempt {
    Split(WeightSplit),
    NoConvergence,
    RegroupFailed,
}

fn try_split(z: &ZetaFunction, n: u32, prec: u32) -> Result<Attempt, WeilError> {
    let lnq = ln_q(z.q());
    let mut classes: Vec<Vec<Root>> = vec![Vec::new(); 2 * n as usize + 1];
    let mut max_dev: f64 = 0.0;
    for (poly, in_numerator) in [(z.numerator(), true), (z.denominator(), false)] {
        let Some(roots) = roots::reciprocal_roots(poly, prec) else {
            return Ok(Attempt::NoConvergence);
        };
        for r in roots {
            let modulus = r.value.abs(prec).to_f64();
            let (w, i, dev) = classify(modulus, lnq);
            let parity_ok = (i % 2 == 1) == in_numerator;
            if dev > CLASSIFY_BAND || !parity_ok || i > 2 * n {
                return Err(WeilError::UnclassifiableRoot { modulus, weight_estimate: w, in_numerator });
            }
            max_dev = max_dev.max(dev);
            classes[i as usize].push(r);
        }
    }
    let mut factors = Vec::with_capacity(classes.len());
    let (mut odd, mut even) = (ZPoly::one(), ZPoly::one());
    for (i, cls) in classes.iter().enumerate() {
        let values: Vec<_> = cls.iter().map(|r| r.value.clone()).collect();
        let poly = roots::integer_poly_from_reciprocal_roots(&values, prec);
        if i % 2 == 1 {
            odd = odd.mul(&poly);
        } else {
            even = even.mul(&poly);
        }
        let roots = cls.iter().map(|r| RootInfo::from_root(r, prec)).collect();
        factors.push(WeightFactor { weight: i as u32, poly, roots });
    }
    if &odd != z.numerator() || &even != z.denominator() {
        return Ok(Attempt::RegroupFailed);
    }
    Ok(Attempt::Split(WeightSplit {
        q: z.q(),
        n,
        factors,
        band: CLASSIFY_BAND,
        precision: prec,
        max_relative_deviation: max_dev,
    }))
}

/// Groups the reciprocal roots of `P` and `Q` by weight and rebuilds the
/// integer factors `P_0, .., P_{2n}`. Precision is escalated when the
/// iteration fails or the regrouped product is not exact.
pub fn weight_split(z: &ZetaFunction, n: u32) -> Result<WeightSplit, WeilError> {
    let mut converged_somewhere = false;
    for &prec in &PRECISION_LADDER {
        match try_split(z, n, prec)? {
            Attempt::Split(split) => return Ok(split),
            Attempt::RegroupFailed => converged_somewhere = true,
            Attempt::NoConvergence => {}
        }
    }
    Err(if converged_somewhere { WeilError::NonIntegerRegroup } else { WeilError::RootFindingFailed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalEqReport {
    pub chi: i64,
    pub n: u32,
    /// Sign for which the identity holds exactly, if any.
    pub epsilon: Option<i8>,
    pub holds: bool,
    /// `n chi` is odd, which no smooth proper variety allows.
    pub parity_violated: bool,
    /// Multiplicity of the eigenvalue `q^{n/2}` (only for even `n`).
    pub middle_multiplicity: Option<usize>,
    /// Whether `epsilon` agrees with `+1` for odd `n` and `(-1)^N` for even `n`.
    pub epsilon_rule_consistent: Option<bool>,
}

/// `(q^n t)^deg f(1 / (q^n t))`: coefficient of `t^{deg - j}` is `f_j q^{n(deg-j)}`.
fn dual_poly(f: &ZPoly, qn: &BigInt) -> ZPoly {
    let d = f.degree();
    let mut c = vec![BigInt::zero(); d + 1];
    let mut power = BigInt::one();
    for j in (0..=d).rev() {
        c[d - j] = f.coeff(j) * &power;
        power *= qn;
    }
    ZPoly::new(c)
}

/// Exact test of `Z(t) = eps q^{-n chi/2} t^{-chi} Z(1 / (q^n t))` for both
/// signs. After clearing denominators this reads
/// `P * Q~ = eps q^{n chi / 2} P~ * Q` with `f~(t) = (q^n t)^{deg f} f(1/(q^n t))`.
pub fn functional_equation_check(z: &ZetaFunction, n: u32, split: Option<&WeightSplit>) -> FunctionalEqReport {
    let chi = z.euler_characteristic();
    let nchi = n as i64 * chi;
    let mut report = FunctionalEqReport {
        chi,
        n,
        epsilon: None,
        holds: false,
        parity_violated: nchi % 2 != 0,
        middle_multiplicity: None,
        epsilon_rule_consistent: None,
    };
    if report.parity_violated {
        return report;
    }
    let q = BigInt::from(z.q().q());
    let qn = num_traits::pow(q.clone(), n as usize);
    let (p, qq) = (z.numerator(), z.denominator());
    let p_dual = dual_poly(p, &qn);
    let q_dual = dual_poly(qq, &qn);
    let half = nchi / 2;
    let scale = num_traits::pow(q.clone(), half.unsigned_abs() as usize);
    let (lhs, rhs) = if half >= 0 {
        (p.mul(&q_dual), p_dual.mul(qq).scale(&scale))
    } else {
        (p.mul(&q_dual).scale(&scale), p_dual.mul(qq))
    };
    for eps in [1i8, -1] {
        if lhs == rhs.scale(&BigInt::from(eps)) {
            report.epsilon = Some(eps);
            report.holds = true;
            break;
        }
    }
    if n % 2 == 0 {
        let middle = num_traits::pow(q, n as usize / 2);
        let host = split.map(|s| &s.factor(n).poly).unwrap_or(qq);
        report.middle_multiplicity = Some(host.multiplicity_of_factor(&middle));
    }
    if let Some(eps) = report.epsilon {
        let expected = match report.middle_multiplicity {
            None => 1,
            Some(mult) => {
                if mult % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        };
        report.epsilon_rule_consistent = Some(eps == expected);
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport {
    pub holds: bool,
    /// Largest `|Log(q^n / alpha / beta)|` over the greedy pairing; infinite
    /// when some degrees differ.
    pub worst_distance: f64,
    pub tolerance: f64,
}

fn log_distance(a_mod: f64, a_arg: f64, b: &RootInfo) -> f64 {
    let dl = libm::log(a_mod / b.modulus);
    let mut da = a_arg - b.arg();
    let two_pi = 2.0 * core::f64::consts::PI;
    da -= two_pi * libm::round(da / two_pi);
    libm::sqrt(dl * dl + da * da)
}

/// Matches `{q^n / alpha : alpha root of P_i}` against the roots of
/// `P_{2n-i}` greedily, each root used once.
pub fn duality_check(split: &WeightSplit) -> DualityReport {
    let qn = libm::exp(split.n as f64 * ln_q(split.q));
    let top = 2 * split.n as usize;
    let mut worst: f64 = 0.0;
    for i in 0..=top {
        let src = &split.factors[i].roots;
        let dst = &split.factors[top - i].roots;
        if src.len() != dst.len() {
            worst = f64::INFINITY;
            continue;
        }
        let mut used = vec![false; dst.len()];
        for a in src {
            let (m, arg) = (qn / a.modulus, -a.arg());
            let best = (0..dst.len())
                .filter(|&j| !used[j])
                .map(|j| (j, log_distance(m, arg, &dst[j])))
                .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(core::cmp::Ordering::Equal));
            if let Some((j, d)) = best {
                used[j] = true;
                worst = worst.max(d);
            }
        }
    }
    DualityReport { holds: worst <= PAIRING_TOLERANCE, worst_distance: worst, tolerance: PAIRING_TOLERANCE }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiBoundReport {
    pub n: u32,
    pub n1: BigInt,
    pub projective_count: BigUint,
    /// `N_1 - #P^n(F_q)`.
    pub lhs: BigInt,
    /// `deg P_n`, minus one for even `n`.
    pub b: i64,
    /// `b^2 q^n`, compared against `lhs^2`.
    pub bound_squared: BigInt,
    pub holds: bool,
}

/// `|N_1 - #P^n(F_q)| <= b q^{n/2}`, decided on squares.
pub fn ci_bound_check(spec: &VarietySpec, z: &ZetaFunction, split: &WeightSplit) -> Result<CiBoundReport, WeilError> {
    let n = spec.declared_dim().ok_or(WeilError::MissingDeclaredDim)?;
    let n1 = expand_counts(z, 1);
    let q = z.q().q();
    let projective_count = projective_space_count(n, &q, 1);
    let lhs = &n1 - BigInt::from(projective_count.clone());
    let b = split.factor(n).poly.degree() as i64 - i64::from(n % 2 == 0);
    let bound_squared = BigInt::from(b * b) * BigInt::from(q.pow(n));
    let holds = b >= 0 && &lhs * &lhs <= bound_squared;
    Ok(CiBoundReport { n, n1, projective_count, lhs, b, bound_squared, holds })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightPredicateReport {
    pub holds: bool,
    pub max_relative_deviation: f64,
    pub tolerance: f64,
}

/// Whether every reciprocal root of `poly` (constant term 1) has modulus
/// `q_x^{beta/2}` within `tolerance`, relative.
pub fn weight_predicate(poly: &[BigRational], q_x: &BigUint, beta: u32, tolerance: f64) -> WeightPredicateReport {
    let mut rev: Vec<BigRational> = poly.to_vec();
    while rev.last().is_some_and(|c| c.is_zero()) {
        rev.pop();
    }
    rev.reverse();
    let lnq = libm::log(num_traits::ToPrimitive::to_f64(q_x).unwrap_or(f64::INFINITY));
    let target = libm::exp(beta as f64 * lnq / 2.0);
    let roots = PRECISION_LADDER.iter().find_map(|&p| roots::roots_with(&rev, roots::embed_rational, p));
    let Some(roots) = roots else {
        return WeightPredicateReport { holds: false, max_relative_deviation: f64::INFINITY, tolerance };
    };
    let dev = roots.iter().map(|r| (r.modulus() / target - 1.0).abs()).fold(0.0, f64::max);
    WeightPredicateReport { holds: dev <= tolerance, max_relative_deviation: dev, tolerance }
}
