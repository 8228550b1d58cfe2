//! From point counts to the zeta function `Z(t) = exp(sum N_m t^m / m)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ffield::PrimePower;
use crate::geometry::CountSeries;
use crate::pade::{self, PadeError};
use crate::poly::{self, Scalar, ZPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZetaError {
    /// `n a_n` was not divisible by `n`: the counts are not the counts of a
    /// variety.
    NonIntegralCoefficient { index: usize },
    InsufficientTerms { needed: usize, available: usize },
    HoldoutTooSmall,
    NoRationalFit { terms_used: usize },
    HoldoutMismatch { index: usize },
    /// The reduced fit has non-integral coefficients.
    NonIntegralFit,
}

impl fmt::Display for ZetaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaError::NonIntegralCoefficient { index } => {
                write!(f, "zeta series coefficient {index} is not an integer; the counts are inconsistent")
            }
            ZetaError::InsufficientTerms { needed, available } => {
                write!(f, "need {needed} terms, only {available} available")
            }
            ZetaError::HoldoutTooSmall => write!(f, "holdout must be at least 1"),
            ZetaError::NoRationalFit { .. } | ZetaError::HoldoutMismatch { .. } => {
                let e = match *self {
                    ZetaError::NoRationalFit { terms_used } => PadeError::NoRationalFit { terms_used },
                    ZetaError::HoldoutMismatch { index } => PadeError::HoldoutMismatch { index },
                    _ => unreachable!(),
                };
                write!(f, "{e} (raise --max-m)")
            }
            ZetaError::NonIntegralFit => {
                write!(f, "reduced rational fit has non-integral coefficients")
            }
        }
    }
}

impl core::error::Error for ZetaError {}

impl From<PadeError> for ZetaError {
    fn from(e: PadeError) -> Self {
        match e {
            PadeError::NoRationalFit { terms_used } => ZetaError::NoRationalFit { terms_used },
            PadeError::HoldoutMismatch { index } => ZetaError::HoldoutMismatch { index },
        }
    }
}

/// Truncated power series `a_0 + a_1 t + ..` with `a_0 = 1` and integer
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeriesZ {
    q: PrimePower,
    coeffs: Vec<BigInt>,
}

impl PowerSeriesZ {
    pub fn new(q: PrimePower, coeffs: Vec<BigInt>) -> Self {
        assert!(coeffs.first().is_some_and(|c| c.is_one()), "a_0 must be 1");
        PowerSeriesZ { q, coeffs }
    }

    pub fn q(&self) -> PrimePower {
        self.q
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Truncation order `T`: coefficients `a_0..a_T` are known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// `exp(sum_{m <= t} N_m t^m / m)` via `n a_n = sum_{m=1}^n N_m a_{n-m}`.
pub fn exp_integer_series(counts: &[BigInt], t: usize) -> Result<Vec<BigInt>, ZetaError> {
    if t > counts.len() {
        return Err(ZetaError::InsufficientTerms { needed: t, available: counts.len() });
    }
    let mut a: Vec<BigInt> = vec![BigInt::one()];
    for n in 1..=t {
        let mut acc = BigInt::zero();
        for m in 1..=n {
            acc += &counts[m - 1] * &a[n - m];
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(n));
        if !rem.is_zero() {
            return Err(ZetaError::NonIntegralCoefficient { index: n });
        }
        a.push(quot);
    }
    Ok(a)
}

pub fn zeta_series(counts: &CountSeries, t: usize) -> Result<PowerSeriesZ, ZetaError> {
    let n: Vec<BigInt> = counts.counts.iter().map(|c| BigInt::from(c.clone())).collect();
    Ok(PowerSeriesZ { q: counts.q, coeffs: exp_integer_series(&n, t)? })
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Whether the Hankel determinant `det(a_{i+j+k})_{0 <= i,j <= M}` vanishes.
pub fn hankel_zero_test(seq: &[BigInt], window: usize, k: usize) -> Result<bool, ZetaError> {
    let needed = k + 2 * window + 1;
    if seq.len() < needed {
        return Err(ZetaError::InsufficientTerms { needed, available: seq.len() });
    }
    let m = (0..=window).map(|i| (0..=window).map(|j| seq[i + j + k].clone()).collect()).collect();
    Ok(bareiss_determinant(m).is_zero())
}

/// `Z = P / Q` with coprime integer polynomials and `P(0) = Q(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaFunction {
    q: PrimePower,
    numerator: ZPoly,
    denominator: ZPoly,
    terms_used: usize,
    holdout: usize,
}

impl ZetaFunction {
    /// Wraps a known rational function; panics unless both constant terms
    /// are 1.
    pub fn new(q: PrimePower, numerator: ZPoly, denominator: ZPoly) -> Self {
        assert!(numerator.constant_term().is_one() && denominator.constant_term().is_one());
        ZetaFunction { q, numerator, denominator, terms_used: 0, holdout: 0 }
    }

    pub fn q(&self) -> PrimePower {
        self.q
    }

    /// `P`.
    pub fn numerator(&self) -> &ZPoly {
        &self.numerator
    }

    /// `Q`.
    pub fn denominator(&self) -> &ZPoly {
        &self.denominator
    }

    /// Coefficients the reconstruction was fitted on.
    pub fn terms_used(&self) -> usize {
        self.terms_used
    }

    pub fn holdout(&self) -> usize {
        self.holdout
    }

    /// `deg Q - deg P`.
    pub fn euler_characteristic(&self) -> i64 {
        self.denominator.degree() as i64 - self.numerator.degree() as i64
    }

    /// First `n` coefficients of `P / Q`.
    pub fn series(&self, n: usize) -> Vec<BigInt> {
        let r = poly::expand_ratio(&self.numerator.to_rationals(), &self.denominator.to_rationals(), n);
        r.into_iter().map(|c| c.to_integer()).collect()
    }
}

fn rationals_to_integers(v: &[BigRational]) -> Option<ZPoly> {
    v.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect::<Option<Vec<_>>>().map(ZPoly::new)
}

/// Minimal-degree `P / Q` fitted on all but the last `holdout` coefficients,
/// then validated on the held-out ones.
pub fn rational_reconstruct(series: &PowerSeriesZ, holdout: usize) -> Result<ZetaFunction, ZetaError> {
    if holdout == 0 {
        return Err(ZetaError::HoldoutTooSmall);
    }
    let s: Vec<BigRational> = series.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let fit = pade::reconstruct(&s, holdout)?;
    let g = poly::gcd(&fit.num, &fit.den);
    let num = poly::divrem(&fit.num, &g).0;
    let den = poly::divrem(&fit.den, &g).0;
    let c = den[0].inv().expect("gcd divides a polynomial with constant term 1");
    let num = poly::scale(&num, &c);
    let den = poly::scale(&den, &c);
    let numerator = rationals_to_integers(&num).ok_or(ZetaError::NonIntegralFit)?;
    let denominator = rationals_to_integers(&den).ok_or(ZetaError::NonIntegralFit)?;
    debug_assert!(numerator.constant_term().is_one() && denominator.constant_term().is_one());
    Ok(ZetaFunction { q: series.q, numerator, denominator, terms_used: fit.terms_used, holdout })
}

/// `N_m = sum beta^m - sum alpha^m` from Newton's identities on `Q` and `P`.
pub fn expand_counts(z: &ZetaFunction, m: usize) -> BigInt {
    assert!(m >= 1);
    let sq = z.denominator.power_sums(m);
    let sp = z.numerator.power_sums(m);
    &sq[m - 1] - &sp[m - 1]
}

/// `N_1..N_t` from a zeta function.
pub fn expand_count_series(z: &ZetaFunction, t: usize) -> Vec<BigInt> {
    let sq = z.denominator.power_sums(t);
    let sp = z.numerator.power_sums(t);
    sq.iter().zip(&sp).map(|(a, b)| a - b).collect()
}

/// Smallest `M` such that every Hankel window of size `M + 1` available in
/// `seq` (starting at `k >= start`) vanishes; `None` if none up to `max_window`.
pub fn hankel_rank_bound(seq: &[BigInt], start: usize, max_window: usize) -> Option<usize> {
    (0..=max_window).find(|&w| {
        let mut any = false;
        let mut k = start;
        while k + 2 * w < seq.len() {
            any = true;
            if !hankel_zero_test(seq, w, k).unwrap_or(false) {
                return false;
            }
            k += 1;
        }
        any
    })
}

/// `true` when every coefficient is nonnegative.
pub fn all_nonnegative(v: &[BigInt]) -> bool {
    v.iter().all(|c| !c.is_negative())
}
