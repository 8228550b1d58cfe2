//! The discriminant form `Delta = q prod_{n >= 1} (1 - q^n)^24` and the
//! Ramanujan bound `|tau(p)| <= 2 p^{11/2}`.
//!
//! The product is taken from Euler's pentagonal series
//! `prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}` and raised to the 24th power
//! by repeated squaring of truncated polynomials. Products run in `i128`
//! with overflow checks and are redone in `BigInt` when a check fires, so
//! results are always exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::ffield::is_prime;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauError {
    /// `p` is not a prime at most the expansion length.
    PrimeOutOfRange { p: u64, n: usize },
}

impl fmt::Display for TauError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauError::PrimeOutOfRange { p, n } => {
                write!(f, "{p} is not a prime covered by an expansion to q^{n}; raise --max-n")
            }
        }
    }
}

impl core::error::Error for TauError {}

/// `a_1 .. a_N` of a q-expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    coeffs: Vec<BigInt>,
}

impl QExpansion {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a_n` for `1 <= n <= N`.
    pub fn get(&self, n: usize) -> &BigInt {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
}

/// `sum_k (-1)^k q^{k(3k-1)/2}` over all integers `k`, to degree `< len`.
pub fn pentagonal_series(len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    if len > 0 {
        out[0] = 1;
    }
    for k in 1i64.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let a = (k * (3 * k - 1) / 2) as usize;
        let b = (k * (3 * k + 1) / 2) as usize;
        if a >= len {
            break;
        }
        out[a] += sign;
        if b < len {
            out[b] += sign;
        }
    }
    out
}

enum Coeffs {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl Coeffs {
    fn to_big(&self) -> Vec<BigInt> {
        match self {
            Coeffs::Small(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
            Coeffs::Big(v) => v.clone(),
        }
    }
}

fn mul_small(a: &[i128], b: &[i128], len: usize) -> Option<Vec<i128>> {
    let mut out = vec![0i128; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if y != 0 {
                out[i + j] = out[i + j].checked_add(x.checked_mul(y)?)?;
            }
        }
    }
    Some(out)
}

fn mul_big(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn mul_truncated(a: &Coeffs, b: &Coeffs, len: usize) -> Coeffs {
    if let (Coeffs::Small(x), Coeffs::Small(y)) = (a, b) {
        if let Some(v) = mul_small(x, y, len) {
            return Coeffs::Small(v);
        }
    }
    Coeffs::Big(mul_big(&a.to_big(), &b.to_big(), len))
}

/// `a_1 .. a_n` of `Delta`.
pub fn delta_expansion(n: usize) -> QExpansion {
    assert!(n >= 1, "expansion needs at least one coefficient");
    // a_k of Delta is the coefficient of q^{k-1} in prod (1 - q^j)^24.
    let len = n;
    let mut base = Coeffs::Small(pentagonal_series(len));
    let mut acc: Option<Coeffs> = None;
    let mut e = 24u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => Coeffs::Small(match &base {
                    Coeffs::Small(v) => v.clone(),
                    Coeffs::Big(_) => unreachable!("base is small until squared"),
                }),
                Some(a) => mul_truncated(&a, &base, len),
            });
        }
        e >>= 1;
        if e > 0 {
            base = mul_truncated(&base, &base, len);
        }
    }
    QExpansion { coeffs: acc.expect("exponent is positive").to_big() }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RamanujanReport {
    pub p: u64,
    pub a_p: BigInt,
    /// `4 p^11`.
    pub bound_rhs: BigInt,
    /// `a_p^2 <= 4 p^11`, decided in integers.
    pub bound_holds: bool,
    /// Moduli of the roots of `T^2 - a_p T + p^11`.
    pub root_moduli: [f64; 2],
    pub target_modulus: f64,
    pub max_relative_deviation: f64,
    pub tolerance: f64,
    pub moduli_hold: bool,
}

/// Relative tolerance on root moduli.
pub const MODULUS_TOLERANCE: f64 = 1e-9;

pub fn ramanujan_check(p: u64, exp: &QExpansion) -> Result<RamanujanReport, TauError> {
    if !is_prime(p) || p as usize > exp.len() {
        return Err(TauError::PrimeOutOfRange { p, n: exp.len() });
    }
    let a = exp.get(p as usize).clone();
    let p11 = BigInt::from(p).pow(11);
    let bound_rhs = BigInt::from(4) * &p11;
    let disc = &a * &a - &bound_rhs;
    let bound_holds = !disc.is_positive();
    let af = a.to_f64().unwrap_or(f64::INFINITY);
    let root_moduli = if bound_holds {
        // (a +- i sqrt(4 p^11 - a^2)) / 2
        let im = libm::sqrt((-&disc).to_f64().unwrap_or(f64::INFINITY)) / 2.0;
        let m = libm::hypot(af / 2.0, im);
        [m, m]
    } else {
        let r = libm::sqrt(disc.to_f64().unwrap_or(f64::INFINITY)) / 2.0;
        [(af / 2.0 + r).abs(), (af / 2.0 - r).abs()]
    };
    let target = libm::pow(p as f64, 5.5);
    let max_relative_deviation = root_moduli.iter().map(|m| (m / target - 1.0).abs()).fold(0.0, f64::max);
    Ok(RamanujanReport {
        p,
        a_p: a,
        bound_rhs,
        bound_holds,
        root_moduli,
        target_modulus: target,
        max_relative_deviation,
        tolerance: MODULUS_TOLERANCE,
        moduli_hold: max_relative_deviation <= MODULUS_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: usize) -> Vec<BigInt> {
        let mut poly = vec![BigInt::zero(); n];
        poly[0] = BigInt::from(1);
        for j in 1..n {
            for _ in 0..24 {
                for i in (j..n).rev() {
                    let t = poly[i - j].clone();
                    poly[i] -= t;
                }
            }
        }
        poly
    }

    #[test]
    fn known_values() {
        let d = delta_expansion(12);
        let expected = [1i64, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944];
        for (n, &v) in expected.iter().enumerate() {
            assert_eq!(*d.get(n + 1), BigInt::from(v));
        }
    }

    #[test]
    fn matches_naive_product() {
        let d = delta_expansion(120);
        assert_eq!(d.coeffs(), naive(120).as_slice());
        assert_eq!(*d.get(6), d.get(2) * d.get(3));
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let x = Coeffs::Small(vec![1, i128::MAX / 2]);
        let sq = mul_truncated(&x, &x, 3).to_big();
        let h = BigInt::from(i128::MAX / 2);
        assert_eq!(sq, vec![BigInt::from(1), BigInt::from(2) * &h, &h * &h]);
    }

    #[test]
    fn ramanujan_small_primes() {
        let d = delta_expansion(100);
        for p in [2u64, 3, 5, 97] {
            let r = ramanujan_check(p, &d).unwrap();
            assert!(r.bound_holds && r.moduli_hold, "p = {p}");
        }
        assert_eq!(ramanujan_check(4, &d), Err(TauError::PrimeOutOfRange { p: 4, n: 100 }));
        assert_eq!(ramanujan_check(101, &d), Err(TauError::PrimeOutOfRange { p: 101, n: 100 }));
    }
}
