//! Univariate polynomials: integer polynomials ([`ZPoly`]) and dense
//! polynomials over an exact field ([`Scalar`]), coefficients ascending.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact field element usable by the generic polynomial routines.
///
/// Elements of some fields (cyclotomic fields) carry parameters, so constants
/// are produced from an existing element rather than from nothing.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

pub fn trim<F: Scalar>(a: &mut Vec<F>) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

/// Degree, `None` for the zero polynomial.
pub fn degree<F: Scalar>(a: &[F]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn add<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: Vec<F> = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = o.add(s);
    }
    trim(&mut out);
    out
}

pub fn sub<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    let neg_b: Vec<F> = b.iter().map(|c| c.neg()).collect();
    add(a, &neg_b)
}

pub fn mul<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let zero = a[0].zero_like();
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(&mut out);
    out
}

pub fn scale<F: Scalar>(a: &[F], c: &F) -> Vec<F> {
    let mut out: Vec<F> = a.iter().map(|x| x.mul(c)).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem<F: Scalar>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut r: Vec<F> = a.to_vec();
    trim(&mut r);
    let zero = b[0].zero_like();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut quot = vec![zero; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr].mul(&lead_inv);
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            r[shift + j] = r[shift + j].sub(&c.mul(bj));
        }
        quot[shift] = c;
        trim(&mut r);
    }
    trim(&mut quot);
    (quot, r)
}

pub fn make_monic<F: Scalar>(a: &[F]) -> Vec<F> {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = a[d].inv().expect("nonzero leading coefficient");
            let mut out = scale(&a[..=d], &inv);
            trim(&mut out);
            out
        }
    }
}

/// Monic gcd; zero only if both inputs are zero.
pub fn gcd<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(&x)
}

pub fn derivative<F: Scalar>(a: &[F]) -> Vec<F> {
    let mut out: Vec<F> =
        a.iter().enumerate().skip(1).map(|(i, c)| c.mul(&c.from_i64_like(i as i64))).collect();
    trim(&mut out);
    out
}

/// Yun's algorithm (characteristic zero): `f = c * prod g_i^i` with the `g_i`
/// monic, squarefree and pairwise coprime. Returns the nonconstant `(g_i, i)`.
pub fn squarefree_decomposition<F: Scalar>(f: &[F]) -> Vec<(Vec<F>, usize)> {
    let mut out = Vec::new();
    let f = make_monic(f);
    if degree(&f).unwrap_or(0) == 0 {
        return out;
    }
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        if degree(&a).unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = divrem(&b, &a).0;
        let c = divrem(&d, &a).0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

/// First `n` coefficients of the power series `num / den`; `den[0]` must be
/// invertible.
pub fn expand_ratio<F: Scalar>(num: &[F], den: &[F], n: usize) -> Vec<F> {
    let d0_inv = den[0].inv().expect("denominator must have invertible constant term");
    let zero = den[0].zero_like();
    let mut out: Vec<F> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = num.get(i).cloned().unwrap_or_else(|| zero.clone());
        for j in 1..=i.min(den.len().saturating_sub(1)) {
            acc = acc.sub(&den[j].mul(&out[i - j]));
        }
        out.push(acc.mul(&d0_inv));
    }
    out
}

/// Power sums `s_1..s_t` of the reciprocal roots of `f = prod (1 - a_i t)`,
/// from Newton's identities. `f[0]` must be one.
pub fn power_sums<F: Scalar>(f: &[F], t: usize) -> Vec<F> {
    let zero = f[0].zero_like();
    let mut s: Vec<F> = Vec::with_capacity(t);
    for m in 1..=t {
        let cm = f.get(m).cloned().unwrap_or_else(|| zero.clone());
        let mut acc = cm.mul(&cm.from_i64_like(m as i64));
        for i in 1..m {
            if let Some(ci) = f.get(i) {
                acc = acc.add(&ci.mul(&s[m - i - 1]));
            }
        }
        s.push(acc.neg());
    }
    s
}

/// Inverse of [`power_sums`]: the polynomial `prod (1 - a_i t)` of degree
/// `deg` whose reciprocal roots have power sums `s[0..deg]`.
pub fn from_power_sums<F: Scalar>(s: &[F], deg: usize) -> Vec<F> {
    let one = s[0].one_like();
    let mut c: Vec<F> = vec![one];
    for m in 1..=deg {
        let mut acc = s[m - 1].clone();
        for i in 1..m {
            acc = acc.add(&c[i].mul(&s[m - i - 1]));
        }
        let inv_m = acc.from_i64_like(m as i64).inv().expect("characteristic zero");
        c.push(acc.mul(&inv_m).neg());
    }
    trim(&mut c);
    c
}

/// Coefficients `a_0..a_t` of `exp(sum_{m >= 1} s_m t^m / m)` from
/// `n a_n = sum_{m=1}^n s_m a_{n-m}`; `s[m - 1]` holds `s_m`.
pub fn exp_series<F: Scalar>(s: &[F], t: usize) -> Vec<F> {
    let one = s[0].one_like();
    let mut a: Vec<F> = vec![one];
    for n in 1..=t {
        let mut acc = s[0].zero_like();
        for m in 1..=n {
            acc = acc.add(&s[m - 1].mul(&a[n - m]));
        }
        let inv_n = acc.from_i64_like(n as i64).inv().expect("characteristic zero");
        a.push(acc.mul(&inv_n));
    }
    a
}

/// `prod_{i,j} (1 - a_i b_j t)` from `prod (1 - a_i t)` and `prod (1 - b_j t)`:
/// its power sums are the products of the factors' power sums.
pub fn tensor<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    let (da, db) = (degree(a).unwrap_or(0), degree(b).unwrap_or(0));
    let d = da * db;
    if d == 0 {
        return vec![a[0].one_like()];
    }
    let sa = power_sums(a, d);
    let sb = power_sums(b, d);
    let s: Vec<F> = sa.iter().zip(&sb).map(|(x, y)| x.mul(y)).collect();
    from_power_sums(&s, d)
}

/// Integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZPoly(Vec<BigInt>);

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    /// `1 - c t`.
    pub fn linear_factor(c: &BigInt) -> Self {
        Self::new(vec![BigInt::one(), -c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> ZPoly {
        ZPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// `self / d` if `d` divides `self` exactly in `Z[t]`.
    pub fn exact_div(&self, d: &ZPoly) -> Option<ZPoly> {
        let dd = d.0.len().checked_sub(1)?;
        let lead = &d.0[dd];
        let mut r = self.0.clone();
        if r.len() <= dd {
            return r.iter().all(|c| c.is_zero()).then(ZPoly::default);
        }
        let mut quot = vec![BigInt::zero(); r.len() - dd];
        for shift in (0..r.len() - dd).rev() {
            let top = &r[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (qc, rem) = top.div_rem(lead);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[shift + j] -= &qc * dj;
            }
            quot[shift] = qc;
        }
        r.iter().all(|c| c.is_zero()).then(|| ZPoly::new(quot))
    }

    /// `t^deg * f(1/t)` for `deg >= degree`.
    pub fn reversed(&self, deg: usize) -> ZPoly {
        let mut v = vec![BigInt::zero(); deg + 1];
        for (i, c) in self.0.iter().enumerate() {
            v[deg - i] = c.clone();
        }
        ZPoly::new(v)
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.0.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    /// Power sums `s_1..s_t` of the reciprocal roots when the constant term
    /// is one; exact, no division needed.
    pub fn power_sums(&self, t: usize) -> Vec<BigInt> {
        debug_assert!(self.constant_term().is_one());
        let mut s: Vec<BigInt> = Vec::with_capacity(t);
        for m in 1..=t {
            let mut acc = self.coeff(m) * BigInt::from(m);
            for i in 1..m {
                acc += self.coeff(i) * &s[m - i - 1];
            }
            s.push(-acc);
        }
        s
    }

    /// Exact multiplicity of `1 - c t` as a factor.
    pub fn multiplicity_of_factor(&self, c: &BigInt) -> usize {
        let f = ZPoly::linear_factor(c);
        let mut cur = self.clone();
        let mut n = 0;
        while !cur.is_zero() {
            match cur.exact_div(&f) {
                Some(qt) => {
                    cur = qt;
                    n += 1;
                }
                None => break,
            }
        }
        n
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn exact_division() {
        let f = ZPoly::from_i64(&[1, -3, 2]);
        let g = ZPoly::from_i64(&[1, -1]);
        assert_eq!(f.exact_div(&g), Some(ZPoly::from_i64(&[1, -2])));
        assert_eq!(f.exact_div(&ZPoly::from_i64(&[1, 1])), None);
        assert_eq!(f.multiplicity_of_factor(&BigInt::from(2)), 1);
        let sq = f.mul(&ZPoly::from_i64(&[1, -2]));
        assert_eq!(sq.multiplicity_of_factor(&BigInt::from(2)), 2);
    }

    #[test]
    fn newton_identities_roundtrip() {
        // (1 - t)(1 - 2t): power sums 2^n + 1.
        let f = ZPoly::from_i64(&[1, -3, 2]);
        let s = f.power_sums(5);
        let expected: Vec<BigInt> = (1..=5).map(|n| BigInt::from((1i64 << n) + 1)).collect();
        assert_eq!(s, expected);
        let sr: Vec<BigRational> = s.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        assert_eq!(from_power_sums(&sr, 2), f.to_rationals());
    }

    #[test]
    fn squarefree_parts() {
        // (t - 1)^2 (t + 2)
        let f = mul(&mul(&[q(-1), q(1)], &[q(-1), q(1)]), &[q(2), q(1)]);
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts, vec![(vec![q(2), q(1)], 1), (vec![q(-1), q(1)], 2)]);
    }

    #[test]
    fn ratio_expansion() {
        let s = expand_ratio(&[q(1)], &[q(1), q(-3)], 5);
        assert_eq!(s, [1, 3, 9, 27, 81].map(q));
    }

    #[test]
    fn tensor_of_linear_factors() {
        // (1 - 2t) (x) (1 - 3t)(1 + t) = (1 - 6t)(1 + 2t)
        let a = [q(1), q(-2)];
        let b = mul(&[q(1), q(-3)], &[q(1), q(1)]);
        assert_eq!(tensor(&a, &b), mul(&[q(1), q(-6)], &[q(1), q(2)]));
        // exp(sum 3^m t^m / m) = 1 / (1 - 3t)
        let s: Vec<BigRational> = (1..=5).map(|m| q(3i64.pow(m))).collect();
        assert_eq!(exp_series(&s, 5), [1, 3, 9, 27, 81, 243].map(q));
    }

    #[test]
    fn display() {
        assert_eq!(ZPoly::from_i64(&[1, -2, 5]).to_string(), "1 - 2t + 5t^2");
    }
}
