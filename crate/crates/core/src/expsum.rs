//! Additive character sums `S_m = sum_{x in F_{q^m}^n} psi(Tr Q(x))` and the
//! L-function they generate.
//!
//! `psi(c) = zeta_p^c` on `F_p`, so each sum is an element of `Z[zeta_p]`,
//! computed exactly from a histogram of trace values. The polynomial `Q` has
//! coefficients in the prime field.
//!
//! Variables are grouped into components (connected through shared
//! monomials). Because `psi` turns sums into products, the full sum factors
//! as `psi(Tr c_0) * Q^free * prod_components S_component`, so the work is
//! `sum Q^{|component|}` rather than `Q^n`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::bigfloat::BigFloat;
use crate::cyclo::{CycloRational, CyclotomicInt};
use crate::ffield::tables::{DenseField, KernelField, ZechField, ZECH_TABLE_CAP};
use crate::ffield::{FFElem, FieldCtx, FieldError, PrimePower};
use crate::geometry::plan::{eval, Monomial, TypedPoly, CHUNK_TUPLES};
use crate::geometry::MPoly;
use crate::pade::{self, PadeError};
use crate::poly::{self, Scalar};
use crate::roots::{self, PRECISION_LADDER};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpSumError {
    Field(FieldError),
    BudgetExceeded { m: u32, planned: u128, budget: u64 },
    InsufficientTerms { needed: usize, available: usize },
    HoldoutTooSmall,
    NoRationalFit { terms_used: usize },
    HoldoutMismatch { index: usize },
    /// Both numerator and denominator of the reconstructed series are
    /// nontrivial.
    NotPurePolynomial { numerator_degree: usize, denominator_degree: usize },
    DegreeMismatch { found: usize, expected: usize },
    RootFindingFailed,
}

impl fmt::Display for ExpSumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpSumError::Field(e) => write!(f, "{e}"),
            ExpSumError::BudgetExceeded { m, planned, budget } => write!(
                f,
                "exponential sum over extension degree {m} needs {planned} evaluations, over the budget of {budget}; raise --budget or lower --max-m"
            ),
            ExpSumError::InsufficientTerms { needed, available } => write!(
                f,
                "L-function reconstruction needs {needed} sums but only {available} were computed; raise --max-m"
            ),
            ExpSumError::HoldoutTooSmall => write!(f, "holdout must be at least 1"),
            ExpSumError::NoRationalFit { terms_used } => {
                write!(f, "no rational function fits the first {terms_used} coefficients; raise --max-m")
            }
            ExpSumError::HoldoutMismatch { index } => {
                write!(f, "reconstructed L-function mispredicts held-out coefficient {index}")
            }
            ExpSumError::NotPurePolynomial { numerator_degree, denominator_degree } => write!(
                f,
                "L-function is a ratio of degrees {numerator_degree}/{denominator_degree}, not a polynomial or its inverse"
            ),
            ExpSumError::DegreeMismatch { found, expected } => {
                write!(f, "L-function has degree {found}, expected {expected}")
            }
            ExpSumError::RootFindingFailed => write!(f, "root finding did not converge"),
        }
    }
}

impl core::error::Error for ExpSumError {}

impl From<FieldError> for ExpSumError {
    fn from(e: FieldError) -> Self {
        ExpSumError::Field(e)
    }
}

impl From<PadeError> for ExpSumError {
    fn from(e: PadeError) -> Self {
        match e {
            PadeError::NoRationalFit { terms_used } => ExpSumError::NoRationalFit { terms_used },
            PadeError::HoldoutMismatch { index } => ExpSumError::HoldoutMismatch { index },
        }
    }
}

/// Conditions of the square-root bound that the polynomial fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpSumWarning {
    DegreeDivisibleByP { degree: u32, p: u32 },
}

impl fmt::Display for ExpSumWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpSumWarning::DegreeDivisibleByP { degree, p } => {
                write!(f, "degree {degree} is divisible by the characteristic {p}; the bound need not hold")
            }
        }
    }
}

pub fn hypothesis_warnings(poly: &MPoly) -> Vec<ExpSumWarning> {
    let d = poly.total_degree();
    let p = poly.p();
    if d % p == 0 {
        vec![ExpSumWarning::DegreeDivisibleByP { degree: d, p }]
    } else {
        Vec::new()
    }
}

/// `psi(Tr x) = zeta_p^{Tr x}`.
pub fn additive_character(ctx: &FieldCtx, x: &FFElem) -> CyclotomicInt {
    CyclotomicInt::zeta_pow(ctx.p(), ctx.trace_to_prime(x) as u64)
}

/// Replaces `Q` by `j Q`, which turns `psi` into `psi_j(x) = psi(j x)`.
pub fn twist(poly: &MPoly, j: u32) -> MPoly {
    let p = poly.p();
    let terms: Vec<(BigInt, Vec<u32>)> = poly
        .terms()
        .iter()
        .map(|t| (BigInt::from(t.coeff as u64 * j as u64 % p as u64), t.exps.clone()))
        .collect();
    MPoly::from_integer_terms(p, poly.num_vars(), &terms).expect("coefficients are reduced")
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Component {
    vars: Vec<usize>,
    /// Terms over component-local variable indices.
    terms: Vec<(u32, Monomial)>,
}

/// How one `S_m` will be evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpSumPlan {
    ext: PrimePower,
    m: u32,
    q_ext: u128,
    constant: u32,
    free_vars: u32,
    components: Vec<Component>,
}

fn find(parent: &mut [usize], v: usize) -> usize {
    let mut r = v;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = v;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Splits `poly` into variable-disjoint components and plans `S_m` over
/// `F_{q^m}` where `F_q = base`.
pub fn plan_exp_sum(poly: &MPoly, base: PrimePower, m: u32) -> ExpSumPlan {
    assert_eq!(poly.p(), base.p(), "polynomial and field characteristic differ");
    let n = poly.num_vars();
    let ext = base.extend(m);
    let q_ext = ext.q().to_u128().unwrap_or(u128::MAX);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut constant = 0u32;
    for t in poly.terms() {
        let vs: Vec<usize> = (0..n).filter(|&v| t.exps[v] > 0).collect();
        if vs.is_empty() {
            constant = t.coeff;
        }
        for w in vs.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let used: Vec<usize> = (0..n).filter(|&v| poly.uses_var(v)).collect();
    let root_of: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let mut roots: Vec<usize> = used.iter().map(|&v| root_of[v]).collect();
    roots.sort_unstable();
    roots.dedup();
    let components = roots
        .iter()
        .map(|&r| {
            let vars: Vec<usize> = used.iter().copied().filter(|&v| root_of[v] == r).collect();
            let terms = poly
                .terms()
                .iter()
                .filter(|t| vars.iter().any(|&v| t.exps[v] > 0))
                .map(|t| {
                    let mono = vars.iter().enumerate().filter(|(_, &v)| t.exps[v] > 0).map(|(i, &v)| (i, t.exps[v])).collect();
                    (t.coeff, mono)
                })
                .collect();
            Component { vars, terms }
        })
        .collect();
    ExpSumPlan { ext, m, q_ext, constant, free_vars: (n - used.len()) as u32, components }
}

/// The variable-disjoint pieces `Q_i` of `Q = c_0 + sum Q_i`, each as a
/// polynomial in its own variables, in order of their first variable.
pub fn split_components(poly: &MPoly, base: PrimePower) -> Vec<MPoly> {
    let plan = plan_exp_sum(poly, base, 1);
    plan.components
        .iter()
        .map(|c| {
            let w = c.vars.len();
            let terms: Vec<(BigInt, Vec<u32>)> = c
                .terms
                .iter()
                .map(|(k, mono)| {
                    let mut e = vec![0u32; w];
                    for &(v, x) in mono {
                        e[v] = x;
                    }
                    (BigInt::from(*k), e)
                })
                .collect();
            MPoly::from_integer_terms(poly.p(), w, &terms).expect("arity matches")
        })
        .collect()
}

fn sat_pow(base: u128, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(base))
}

impl ExpSumPlan {
    pub fn extension(&self) -> PrimePower {
        self.ext
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn free_vars(&self) -> u32 {
        self.free_vars
    }

    /// For each component, the index of the first component with the same
    /// polynomial up to renaming of variables. Only those are enumerated.
    fn representatives(&self) -> Vec<usize> {
        let key = |c: &Component| (c.vars.len(), c.terms.clone());
        (0..self.components.len())
            .map(|i| (0..=i).find(|&j| key(&self.components[j]) == key(&self.components[i])).expect("i matches itself"))
            .collect()
    }

    /// Polynomial evaluations the plan performs.
    pub fn planned_evaluations(&self) -> u128 {
        let reps = self.representatives();
        self.components
            .iter()
            .enumerate()
            .filter(|&(i, _)| reps[i] == i)
            .fold(0u128, |acc, (_, c)| acc.saturating_add(sat_pow(self.q_ext, c.vars.len())))
    }

    pub fn prepare(&self, budget: u64) -> Result<PreparedExpSum, ExpSumError> {
        let planned = self.planned_evaluations();
        if planned > budget as u128 {
            return Err(ExpSumError::BudgetExceeded { m: self.m, planned, budget });
        }
        let reps = self.representatives();
        let mut chunks = Vec::new();
        for (ci, c) in self.components.iter().enumerate().filter(|&(i, _)| reps[i] == i) {
            let total = sat_pow(self.q_ext, c.vars.len());
            let mut start = 0u128;
            while start < total {
                let end = (start + CHUNK_TUPLES).min(total);
                chunks.push(SumChunk { component: ci, start, end });
                start = end;
            }
        }
        let kernel = if self.components.is_empty() {
            SumKernel::Trivial
        } else if self.q_ext <= ZECH_TABLE_CAP as u128 {
            SumKernel::Zech(TypedSum::new(ZechField::new(self.ext, true)?, &self.components))
        } else {
            SumKernel::Dense(TypedSum::new(DenseField::new(self.ext)?, &self.components))
        };
        Ok(PreparedExpSum { plan: self.clone(), reps, chunks, kernel })
    }
}

#[derive(Clone, Copy, Debug)]
struct SumChunk {
    component: usize,
    start: u128,
    end: u128,
}

struct TypedSum<F: KernelField> {
    field: F,
    components: Vec<(usize, TypedPoly<F::E>)>,
}

impl<F: KernelField> TypedSum<F> {
    fn new(field: F, components: &[Component]) -> Self {
        let components = components
            .iter()
            .map(|c| (c.vars.len(), c.terms.iter().map(|(k, mono)| (field.from_prime(*k), mono.clone())).collect()))
            .collect();
        TypedSum { field, components }
    }

    fn histogram(&self, chunk: SumChunk, p: u32) -> Vec<u64> {
        let f = &self.field;
        let (w, poly) = &self.components[chunk.component];
        let q = f.size() as u128;
        let mut digits = vec![0u64; *w];
        let mut rest = chunk.start;
        for d in digits.iter_mut().rev() {
            *d = (rest % q) as u64;
            rest /= q;
        }
        let mut xs: Vec<F::E> = digits.iter().map(|&d| f.element(d)).collect();
        let mut hist = vec![0u64; p as usize];
        for _ in chunk.start..chunk.end {
            hist[f.trace(eval(f, poly, &xs)) as usize] += 1;
            for i in (0..*w).rev() {
                digits[i] += 1;
                if (digits[i] as u128) < q {
                    xs[i] = f.element(digits[i]);
                    break;
                }
                digits[i] = 0;
                xs[i] = f.element(0);
            }
        }
        hist
    }
}

enum SumKernel {
    Trivial,
    Zech(TypedSum<ZechField>),
    Dense(TypedSum<DenseField>),
}

/// A plan with tables built. Chunks produce trace histograms that may be
/// computed in any order; [`Self::combine`] assembles the exact sum.
pub struct PreparedExpSum {
    plan: ExpSumPlan,
    reps: Vec<usize>,
    chunks: Vec<SumChunk>,
    kernel: SumKernel,
}

impl PreparedExpSum {
    pub fn plan(&self) -> &ExpSumPlan {
        &self.plan
    }

    pub fn num_chunks(&self) -> usize {
        self.chunks.len()
    }

    /// Trace histogram of chunk `i`: entry `c` counts points with trace `c`.
    pub fn sum_chunk(&self, i: usize) -> Vec<u64> {
        let p = self.plan.ext.p();
        match &self.kernel {
            SumKernel::Trivial => vec![0; p as usize],
            SumKernel::Zech(t) => t.histogram(self.chunks[i], p),
            SumKernel::Dense(t) => t.histogram(self.chunks[i], p),
        }
    }

    pub fn combine(&self, partials: &[Vec<u64>]) -> CyclotomicInt {
        assert_eq!(partials.len(), self.chunks.len());
        let p = self.plan.ext.p();
        let mut per_comp = vec![vec![BigInt::zero(); p as usize]; self.plan.components.len()];
        for (chunk, h) in self.chunks.iter().zip(partials) {
            for (acc, &c) in per_comp[chunk.component].iter_mut().zip(h) {
                *acc += c;
            }
        }
        // Tr_{F_{q^m}/F_p}(c_0) = [F_{q^m} : F_p] c_0
        let tr_c0 = self.plan.constant as u64 * self.plan.ext.k() as u64;
        let free = BigInt::from(self.plan.ext.q()).pow(self.plan.free_vars);
        let mut s = CyclotomicInt::zeta_pow(p, tr_c0).scale(&free);
        for &r in &self.reps {
            s = s.mul(&CyclotomicInt::from_exponent_counts(p, &per_comp[r]));
        }
        s
    }

    pub fn evaluate(&self) -> CyclotomicInt {
        let partials: Vec<Vec<u64>> = (0..self.num_chunks()).map(|i| self.sum_chunk(i)).collect();
        self.combine(&partials)
    }
}

/// `S_m` for `poly` over `F_{q^m}`, `F_q = base`, sequentially.
pub fn exp_sum(poly: &MPoly, base: PrimePower, m: u32, budget: u64) -> Result<CyclotomicInt, ExpSumError> {
    Ok(plan_exp_sum(poly, base, m).prepare(budget)?.evaluate())
}

/// Reference evaluation: every point of `F_{q^m}^n`, with no factoring.
pub fn exp_sum_direct(poly: &MPoly, base: PrimePower, m: u32, budget: u64) -> Result<CyclotomicInt, ExpSumError> {
    let ext = base.extend(m);
    let ctx = FieldCtx::new(ext.p() as u64, ext.k())?;
    let n = poly.num_vars();
    let q = ext.q().to_u64().filter(|&q| q <= budget).ok_or(ExpSumError::BudgetExceeded {
        m,
        planned: ext.q().to_u128().unwrap_or(u128::MAX),
        budget,
    })?;
    let planned = sat_pow(q as u128, n);
    if planned > budget as u128 {
        return Err(ExpSumError::BudgetExceeded { m, planned, budget });
    }
    let mut counts = vec![BigInt::zero(); ext.p() as usize];
    let mut idx = vec![0u64; n];
    let mut point: Vec<FFElem> = vec![ctx.zero(); n];
    for _ in 0..planned {
        counts[ctx.trace_to_prime(&poly.eval(&ctx, &point)) as usize] += 1;
        for i in (0..n).rev() {
            idx[i] += 1;
            if idx[i] < q {
                point[i] = ctx.element_at(idx[i]);
                break;
            }
            idx[i] = 0;
            point[i] = ctx.zero();
        }
    }
    Ok(CyclotomicInt::from_exponent_counts(ext.p(), &counts))
}

/// `S_1, .., S_max_m`.
pub fn exp_sum_series(poly: &MPoly, base: PrimePower, max_m: u32, budget: u64) -> Result<Vec<CyclotomicInt>, ExpSumError> {
    (1..=max_m).map(|m| exp_sum(poly, base, m, budget)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictMode {
    /// Decided by exact integer arithmetic.
    Exact,
    /// Decided by a certified floating-point enclosure.
    Interval,
    /// The enclosure straddles the bound; decided within a relative
    /// tolerance.
    Tolerance,
}

impl VerdictMode {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictMode::Exact => "exact",
            VerdictMode::Interval => "interval",
            VerdictMode::Tolerance => "float",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbsBoundReport {
    /// `|S|^2 = S * conj(S)` when it is a rational integer.
    pub abs_squared_exact: Option<BigInt>,
    pub abs_value: f64,
    /// `(d - 1)^n q^{n/2}`.
    pub bound: f64,
    /// `(d - 1)^{2n} q^n`.
    pub bound_squared: BigUint,
    pub holds: bool,
    /// Whether `|S|^2` equals `q^n`, exactly when possible.
    pub equals_sqrt_q_n: bool,
    pub mode: VerdictMode,
}

const ABS_PREC: u32 = 256;
const ABS_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Checks `|S| <= (d - 1)^n q^{n/2}` for a sum over `F_q^n`.
pub fn abs_bound_check(s: &CyclotomicInt, d: u32, n: u32, q: &BigUint) -> AbsBoundReport {
    let norm = s.mul(&s.conj());
    let qn = q.pow(n);
    let bound_squared = BigUint::from(d.saturating_sub(1)).pow(2 * n) * &qn;
    let bound = libm::sqrt(bound_squared.to_f64().unwrap_or(f64::INFINITY));
    let abs_value = libm::sqrt(norm.embed(ABS_PREC).re.to_f64().max(0.0));
    if let Some(k) = norm.as_integer() {
        let b = BigInt::from(bound_squared.clone());
        let equals = k == BigInt::from(qn);
        return AbsBoundReport {
            holds: k <= b,
            abs_squared_exact: Some(k),
            abs_value,
            bound,
            bound_squared,
            equals_sqrt_q_n: equals,
            mode: VerdictMode::Exact,
        };
    }
    // The embedding error is far below one unit in the 200th bit of the l1
    // norm, which bounds every term.
    let w = ABS_PREC;
    let v = norm.embed(w).re;
    let err = BigFloat::from_bigint(&(norm.l1_norm() + 1u32), w).mul(&BigFloat::from_f64(libm::ldexp(1.0, -200)), w);
    let upper = v.add(&err, w);
    let lower = v.sub(&err, w);
    let b = BigFloat::from_bigint(&BigInt::from(bound_squared.clone()), w);
    let qn_f = BigFloat::from_bigint(&BigInt::from(qn), w);
    let (holds, mode) = if upper.cmp_value(&b).is_le() {
        (true, VerdictMode::Interval)
    } else if lower.cmp_value(&b).is_gt() && (lower.to_f64() / bound_squared.to_f64().unwrap_or(f64::INFINITY) - 1.0) > ABS_RELATIVE_TOLERANCE {
        (false, VerdictMode::Interval)
    } else {
        let rel = v.to_f64() / bound_squared.to_f64().unwrap_or(f64::INFINITY) - 1.0;
        (rel <= ABS_RELATIVE_TOLERANCE, VerdictMode::Tolerance)
    };
    let equals = lower.cmp_value(&qn_f).is_le() && upper.cmp_value(&qn_f).is_ge();
    AbsBoundReport { abs_squared_exact: None, abs_value, bound, bound_squared, holds, equals_sqrt_q_n: equals, mode }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LSide {
    Numerator,
    Denominator,
}

impl LSide {
    pub fn as_str(self) -> &'static str {
        match self {
            LSide::Numerator => "numerator",
            LSide::Denominator => "denominator",
        }
    }
}

/// `exp(sum S_m t^m / m)` identified as `L(t)` or `1 / L(t)` with
/// `L(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SheafLFunction {
    pub base: PrimePower,
    pub n: u32,
    pub poly: Vec<CycloRational>,
    pub side: LSide,
    pub expected_degree: usize,
    /// `L` sits on the numerator exactly when `n` is odd.
    pub side_matches_parity: bool,
    pub terms_used: usize,
    pub holdout: usize,
}

impl SheafLFunction {
    pub fn degree(&self) -> usize {
        poly::degree(&self.poly).unwrap_or(0)
    }
}

/// Sums needed to reconstruct an L-function of degree `(d - 1)^n`.
pub fn required_terms(d: u32, n: u32, holdout: usize) -> usize {
    (d.saturating_sub(1) as usize).pow(n) + holdout + 1
}

/// Reconstructs the L-function from `sums[m - 1] = S_m`.
pub fn sheaf_lfunction(
    sums: &[CyclotomicInt],
    base: PrimePower,
    d: u32,
    n: u32,
    holdout: usize,
) -> Result<SheafLFunction, ExpSumError> {
    if holdout == 0 {
        return Err(ExpSumError::HoldoutTooSmall);
    }
    let needed = required_terms(d, n, holdout);
    if sums.len() < needed {
        return Err(ExpSumError::InsufficientTerms { needed, available: sums.len() });
    }
    let s: Vec<CycloRational> = sums.iter().map(CyclotomicInt::to_rational).collect();
    let series = poly::exp_series(&s, s.len());
    let fit = pade::reconstruct(&series, holdout)?;
    let g = poly::gcd(&fit.num, &fit.den);
    let num = poly::divrem(&fit.num, &g).0;
    let den = poly::divrem(&fit.den, &g).0;
    let c = den[0].inv().expect("constant term is nonzero");
    let num = poly::scale(&num, &c);
    let den = poly::scale(&den, &c);
    let (dn, dd) = (poly::degree(&num).unwrap_or(0), poly::degree(&den).unwrap_or(0));
    let (poly, side) = match (dn, dd) {
        (_, 0) => (num, LSide::Numerator),
        (0, _) => (den, LSide::Denominator),
        _ => return Err(ExpSumError::NotPurePolynomial { numerator_degree: dn, denominator_degree: dd }),
    };
    let expected = (d.saturating_sub(1) as usize).pow(n);
    let found = poly::degree(&poly).unwrap_or(0);
    if found != expected {
        return Err(ExpSumError::DegreeMismatch { found, expected });
    }
    let side_matches_parity = (side == LSide::Numerator) == (n % 2 == 1);
    Ok(SheafLFunction {
        base,
        n,
        poly,
        side,
        expected_degree: expected,
        side_matches_parity,
        terms_used: fit.terms_used,
        holdout,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PurityReport {
    pub target_modulus: f64,
    pub moduli: Vec<f64>,
    pub max_relative_deviation: f64,
    pub tolerance: f64,
    pub precision: u32,
    pub holds: bool,
}

/// Every reciprocal root of `L` has modulus `q^{n/2}`.
pub fn purity_check(l: &SheafLFunction, tolerance: f64) -> Result<PurityReport, ExpSumError> {
    let q = l.base.q().to_f64().unwrap_or(f64::INFINITY);
    let target = libm::pow(q, l.n as f64 / 2.0);
    let d = l.degree();
    let mut rev: Vec<CycloRational> = l.poly[..=d].to_vec();
    rev.reverse();
    let (found, precision) = PRECISION_LADDER
        .iter()
        .find_map(|&prec| roots::roots_with(&rev, CycloRational::embed, prec).map(|r| (r, prec)))
        .ok_or(ExpSumError::RootFindingFailed)?;
    let moduli: Vec<f64> = found.iter().map(|r| r.modulus()).collect();
    let max_relative_deviation = moduli.iter().map(|m| (m / target - 1.0).abs()).fold(0.0, f64::max);
    Ok(PurityReport {
        target_modulus: target,
        moduli,
        max_relative_deviation,
        tolerance,
        precision,
        holds: max_relative_deviation <= tolerance,
    })
}

/// The L-function of `Q_1(x) + Q_2(y)` in disjoint variables is the tensor
/// product of the factors' L-functions: its reciprocal roots are all
/// products of theirs. Exact comparison.
pub fn kunneth_check(factors: (&SheafLFunction, &SheafLFunction), product: &SheafLFunction) -> bool {
    poly::tensor(&factors.0.poly, &factors.1.poly) == product.poly
}

/// `L(t)` coefficients as exact elements of `Z[zeta_p]`, if integral.
pub fn integral_coefficients(l: &SheafLFunction) -> Option<Vec<CyclotomicInt>> {
    l.poly.iter().map(CycloRational::to_cyclotomic_int).collect()
}

/// `#{x in F_{q^m}^n : Tr Q(x) = c}` for every `c`, by direct enumeration;
/// used by the character orthogonality relations.
pub fn trace_value_counts(poly: &MPoly, base: PrimePower, m: u32, budget: u64) -> Result<Vec<BigUint>, ExpSumError> {
    let s = exp_sum_direct(poly, base, m, budget)?;
    // Recover counts from S via the inverse discrete Fourier transform over
    // the twisted sums: p * N_c = sum_j zeta^{-jc} S^{(j)}, S^{(0)} = Q^n.
    let p = base.p();
    let qn = BigInt::from(base.extend(m).q()).pow(poly.num_vars() as u32);
    let mut out = Vec::with_capacity(p as usize);
    for c in 0..p as u64 {
        let mut acc = CyclotomicInt::from_integer(p, qn.clone());
        for j in 1..p as u64 {
            acc = acc.add(&s.galois(j).mul(&CyclotomicInt::zeta_pow(p, (p as u64 - c) * j % p as u64)));
        }
        let v = acc.as_integer().expect("orthogonality gives an integer");
        let (quo, rem) = v.div_rem(&BigInt::from(p));
        debug_assert!(rem.is_zero());
        out.push(quo.to_biguint().expect("count is nonnegative"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, k: u32) -> PrimePower {
        PrimePower::new(p, k).unwrap()
    }

    fn diag(p: u32, n: usize, d: u32) -> MPoly {
        let terms: Vec<(i64, Vec<u32>)> = (0..n)
            .map(|i| {
                let mut e = vec![0u32; n];
                e[i] = d;
                (1, e)
            })
            .collect();
        let refs: Vec<(i64, &[u32])> = terms.iter().map(|(c, e)| (*c, e.as_slice())).collect();
        MPoly::from_terms(p, n, &refs)
    }

    #[test]
    fn trivial_and_linear_sums() {
        let zero = MPoly::zero(7, 2);
        assert_eq!(exp_sum(&zero, pp(7, 1), 2, 1 << 20).unwrap().as_integer(), Some(BigInt::from(7u32.pow(4))));
        let lin = MPoly::from_terms(7, 1, &[(1, &[1])]);
        assert!(exp_sum(&lin, pp(7, 1), 1, 1 << 20).unwrap().is_zero());
    }

    #[test]
    fn gauss_sum_has_norm_q() {
        let g = exp_sum(&diag(7, 1, 2), pp(7, 1), 1, 1 << 20).unwrap();
        assert_eq!(g.mul(&g.conj()).as_integer(), Some(BigInt::from(7)));
        let r = abs_bound_check(&g, 2, 1, &BigUint::from(7u32));
        assert!(r.holds && r.equals_sqrt_q_n && r.mode == VerdictMode::Exact);
    }

    #[test]
    fn separated_matches_direct() {
        let q = MPoly::from_terms(5, 3, &[(1, &[3, 0, 0]), (2, &[0, 2, 0]), (1, &[0, 1, 1]), (3, &[0, 0, 0])]);
        for m in 1..=2 {
            assert_eq!(exp_sum(&q, pp(5, 1), m, 1 << 20).unwrap(), exp_sum_direct(&q, pp(5, 1), m, 1 << 20).unwrap());
        }
        let plan = plan_exp_sum(&q, pp(5, 1), 1);
        assert_eq!(plan.num_components(), 2);
        assert_eq!(plan.planned_evaluations(), 5 + 25);
    }

    #[test]
    fn components_of_diagonal_form() {
        let parts = split_components(&diag(5, 3, 3), pp(5, 1));
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|f| *f == diag(5, 1, 3)));
    }

    #[test]
    fn budget_is_enforced() {
        let q = diag(5, 2, 3);
        assert!(matches!(exp_sum(&q, pp(5, 1), 3, 100), Err(ExpSumError::BudgetExceeded { planned: 125, .. })));
    }

    #[test]
    fn repeated_components_are_enumerated_once() {
        let q = diag(5, 2, 3);
        assert_eq!(plan_exp_sum(&q, pp(5, 1), 2).planned_evaluations(), 25);
        for m in 1..=2 {
            let s1 = exp_sum(&diag(5, 1, 3), pp(5, 1), m, 1 << 20).unwrap();
            let s2 = exp_sum(&q, pp(5, 1), m, 1 << 20).unwrap();
            assert_eq!(s2, s1.mul(&s1));
            assert_eq!(s2, exp_sum_direct(&q, pp(5, 1), m, 1 << 20).unwrap());
        }
    }

    #[test]
    fn cubic_lfunction_is_pure() {
        let q = diag(7, 1, 3);
        let base = pp(7, 1);
        let sums = exp_sum_series(&q, base, required_terms(3, 1, 2) as u32, 1 << 20).unwrap();
        let l = sheaf_lfunction(&sums, base, 3, 1, 2).unwrap();
        assert_eq!(l.degree(), 2);
        assert_eq!(l.side, LSide::Numerator);
        assert!(purity_check(&l, 1e-8).unwrap().holds);
    }

    #[test]
    fn degree_divisible_by_p_warns() {
        assert_eq!(hypothesis_warnings(&diag(3, 1, 3)).len(), 1);
        assert!(hypothesis_warnings(&diag(5, 1, 3)).is_empty());
    }

    #[test]
    fn orthogonality_counts() {
        let q = diag(5, 2, 2);
        let counts = trace_value_counts(&q, pp(5, 1), 1, 1 << 20).unwrap();
        let total: BigUint = counts.iter().sum();
        assert_eq!(total, BigUint::from(25u32));
        // x^2 + y^2 = 0 over F_5 has 9 solutions
        assert_eq!(counts[0], BigUint::from(9u32));
    }
}
