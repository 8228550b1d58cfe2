//! Positivity and dominance of tensor-power series built from local factors.
//!
//! For `f = prod (1 - alpha_i t)` with rational coefficients the power sums
//! `s_n = sum alpha_i^n` are rational, so `s_n^{2k} >= 0` and the series
//! `exp(sum s_n^{2k} t^n / n)` has nonnegative coefficients. Everything here
//! is exact; a negative coefficient is reported with its index.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ffield::PrimePower;
use crate::poly;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PositivityError {
    /// The local factor's constant term is not 1.
    NotNormalized,
    /// Coefficient `index` of a generated series is negative.
    NegativeCoefficient { index: usize },
    /// Input series `factor` has a negative coefficient at `index`, or a
    /// constant term other than 1.
    NonPositiveInput { factor: usize, index: usize },
    InvalidOrder,
}

impl fmt::Display for PositivityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PositivityError::NotNormalized => write!(f, "local factor must have constant term 1"),
            PositivityError::NegativeCoefficient { index } => {
                write!(f, "coefficient {index} is negative; the factor cannot have rational power sums")
            }
            PositivityError::NonPositiveInput { factor, index } => {
                write!(f, "factor {factor} is not a normalized nonnegative series (coefficient {index})")
            }
            PositivityError::InvalidOrder => write!(f, "truncation order and tensor exponent must be at least 1"),
        }
    }
}

impl core::error::Error for PositivityError {}

/// `det(1 - F_x u)` for a closed point `x`, with `u = t^{deg x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    poly: Vec<BigRational>,
    q_x: PrimePower,
    deg_x: u32,
}

impl LocalFactor {
    pub fn new(mut poly: Vec<BigRational>, q_x: PrimePower, deg_x: u32) -> Result<Self, PositivityError> {
        poly::trim(&mut poly);
        if poly.first().map_or(true, |c| !c.is_one()) || deg_x == 0 {
            return Err(PositivityError::NotNormalized);
        }
        Ok(LocalFactor { poly, q_x, deg_x })
    }

    pub fn poly(&self) -> &[BigRational] {
        &self.poly
    }

    pub fn q_x(&self) -> PrimePower {
        self.q_x
    }

    pub fn deg_x(&self) -> u32 {
        self.deg_x
    }

    /// Coefficients `0..=t` of `1 / poly(t^{deg x})`.
    pub fn inverse_series(&self, t: usize) -> Vec<BigRational> {
        let d = self.deg_x as usize;
        let mut den = vec![BigRational::zero(); (self.poly.len() - 1) * d + 1];
        for (i, c) in self.poly.iter().enumerate() {
            den[i * d] = c.clone();
        }
        poly::expand_ratio(&[BigRational::one()], &den, t + 1)
    }
}

/// `s_1..s_t` by Newton's identities on the coefficients.
pub fn power_sums(f: &LocalFactor, t: usize) -> Result<Vec<BigRational>, PositivityError> {
    if t == 0 {
        return Err(PositivityError::InvalidOrder);
    }
    Ok(poly::power_sums(&f.poly, t))
}

fn first_negative(series: &[BigRational]) -> Option<usize> {
    series.iter().position(Signed::is_negative)
}

/// `s_n^{2k}` for `n = 1..=t`: the coefficients of `t d/dt log` of the
/// local factor of the `2k`-th tensor power. Entry `i` holds `n = i + 1`.
pub fn tensor_logderiv_series(f: &LocalFactor, k: u32, t: usize) -> Result<Vec<BigRational>, PositivityError> {
    if k == 0 {
        return Err(PositivityError::InvalidOrder);
    }
    let out: Vec<BigRational> = power_sums(f, t)?.iter().map(|s| num_traits::pow(s.clone(), 2 * k as usize)).collect();
    match first_negative(&out) {
        Some(i) => Err(PositivityError::NegativeCoefficient { index: i + 1 }),
        None => Ok(out),
    }
}

/// Coefficients `0..=t` of `exp(sum s_n^{2k} t^n / n)`.
pub fn tensor_local_factor_series(f: &LocalFactor, k: u32, t: usize) -> Result<Vec<BigRational>, PositivityError> {
    let s = tensor_logderiv_series(f, k, t)?;
    let out = poly::exp_series(&s, t);
    match first_negative(&out) {
        Some(index) => Err(PositivityError::NegativeCoefficient { index }),
        None => Ok(out),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceReport {
    pub holds: bool,
    /// First `(factor, index)` with a coefficient above the product's.
    pub first_violation: Option<(usize, usize)>,
    pub product: Vec<BigRational>,
    pub order: usize,
}

/// Checks `a_{i,n} <= a_n` for every factor `i` and `n <= t`, where `a_n`
/// are the coefficients of the truncated product of all factors.
pub fn dominance_check(factors: &[Vec<BigRational>], t: usize) -> Result<DominanceReport, PositivityError> {
    let padded: Vec<Vec<BigRational>> = factors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut g: Vec<BigRational> = f.iter().take(t + 1).cloned().collect();
            g.resize(t + 1, BigRational::zero());
            if !g[0].is_one() {
                return Err(PositivityError::NonPositiveInput { factor: i, index: 0 });
            }
            match first_negative(&g) {
                Some(index) => Err(PositivityError::NonPositiveInput { factor: i, index }),
                None => Ok(g),
            }
        })
        .collect::<Result<_, _>>()?;
    let mut product = vec![BigRational::zero(); t + 1];
    product[0] = BigRational::one();
    for g in &padded {
        let mut next = poly::mul(&product, g);
        next.resize(t + 1, BigRational::zero());
        next.truncate(t + 1);
        product = next;
    }
    let first_violation = padded
        .iter()
        .enumerate()
        .find_map(|(i, g)| g.iter().zip(&product).position(|(a, b)| a > b).map(|n| (i, n)));
    Ok(DominanceReport { holds: first_violation.is_none(), first_violation, product, order: t })
}

/// Number of closed points of each degree `1..=counts.len()` from the point
/// counts `N_1, N_2, ..` by Moebius inversion of `N_m = sum_{d | m} d a_d`.
pub fn closed_point_counts(counts: &[BigUint]) -> Vec<BigInt> {
    let mu = |mut n: usize| -> i32 {
        let mut r = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                r = -r;
            }
            p += 1;
        }
        if n > 1 {
            r = -r;
        }
        r
    };
    (1..=counts.len())
        .map(|d| {
            let s: BigInt = (1..=d)
                .filter(|e| d % e == 0)
                .map(|e| BigInt::from(mu(d / e)) * BigInt::from(counts[e - 1].clone()))
                .sum();
            s / BigInt::from(d)
        })
        .collect()
}

/// Coefficients `0..=t` of `(1 - t^d)^{-a}`: the combined local factors of
/// the `a` closed points of degree `d`.
pub fn closed_point_group_series(d: usize, a: &BigInt, t: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); t + 1];
    // binomial(a + j - 1, j), built incrementally
    let mut c = BigInt::one();
    for j in 0..=t / d {
        out[j * d] = BigRational::from_integer(c.clone());
        c = c * (a + BigInt::from(j)) / BigInt::from(j + 1);
    }
    out
}

/// The closed-point factorisation `Z(t) = prod_d (1 - t^d)^{-a_d}`, one
/// series per degree with `a_d > 0`, from counts `N_1..N_t`.
pub fn closed_point_factors(counts: &[BigUint], t: usize) -> Vec<Vec<BigRational>> {
    closed_point_counts(&counts[..t.min(counts.len())])
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_positive())
        .map(|(i, a)| closed_point_group_series(i + 1, a, t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn factor(c: &[i64]) -> LocalFactor {
        LocalFactor::new(c.iter().map(|&x| q(x)).collect(), PrimePower::new(5, 1).unwrap(), 1).unwrap()
    }

    #[test]
    fn power_sums_of_split_factor() {
        let s = power_sums(&factor(&[1, -3, 2]), 6).unwrap();
        for (i, v) in s.iter().enumerate() {
            assert_eq!(*v, q(2i64.pow(i as u32 + 1) + 1));
        }
    }

    #[test]
    fn sign_alternating_factor_becomes_geometric() {
        let s = tensor_local_factor_series(&factor(&[1, 1]), 1, 10).unwrap();
        assert!(s.iter().all(|c| *c == q(1)));
    }

    #[test]
    fn exp_of_power_sums_inverts_factor() {
        let f = factor(&[1, -2, 5]);
        let s = power_sums(&f, 12).unwrap();
        assert_eq!(poly::exp_series(&s, 12), f.inverse_series(12));
    }

    #[test]
    fn rejects_unnormalized() {
        assert_eq!(
            LocalFactor::new(vec![q(2), q(1)], PrimePower::new(5, 1).unwrap(), 1),
            Err(PositivityError::NotNormalized)
        );
    }

    #[test]
    fn dominance_examples() {
        let f = vec![q(1), q(1)];
        let r = dominance_check(&[f.clone(), f.clone()], 3).unwrap();
        assert!(r.holds);
        assert_eq!(r.product, vec![q(1), q(2), q(1), q(0)]);
        assert!(dominance_check(&[vec![q(1), q(-1)]], 3).is_err());
    }

    #[test]
    fn closed_points_of_projective_line() {
        // P^1 over F_3: N_m = 3^m + 1; 4 rational points, 3 of degree 2.
        let counts: Vec<BigUint> = (1..=6u32).map(|m| BigUint::from(3u32.pow(m) + 1)).collect();
        let a = closed_point_counts(&counts);
        assert_eq!(a[..3], [BigInt::from(4), BigInt::from(3), BigInt::from(8)]);
        let factors = closed_point_factors(&counts, 6);
        let r = dominance_check(&factors, 6).unwrap();
        let zeta = poly::expand_ratio(&[q(1)], &poly::mul(&[q(1), q(-1)], &[q(1), q(-3)]), 7);
        assert_eq!(r.product, zeta);
        assert!(r.holds);
    }
}
