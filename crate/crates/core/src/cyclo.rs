//! Exact arithmetic in `Z[zeta_p]` and `Q(zeta_p)` for a prime `p`.
//!
//! Elements are stored in the power basis `1, zeta, .., zeta^{p-2}`. Products
//! are formed in `R[x]/(x^p - 1)` and reduced with
//! `zeta^{p-1} = -(1 + zeta + .. + zeta^{p-2})`, i.e. by subtracting the top
//! lifted coefficient from all others. This representation is canonical.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::bigfloat::{BigComplex, BigFloat};
use crate::poly::Scalar;

fn reduce_lift<T: Clone + Num>(mut lift: Vec<T>) -> Vec<T> {
    let p = lift.len();
    let top = lift.pop().expect("lift has length p");
    debug_assert_eq!(lift.len(), p - 1);
    for c in lift.iter_mut() {
        *c = c.clone() - top.clone();
    }
    lift
}

fn mul_generic<T: Clone + Num>(a: &[T], b: &[T]) -> Vec<T> {
    let p = a.len() + 1;
    let mut lift = vec![T::zero(); p];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                let k = (i + j) % p;
                lift[k] = lift[k].clone() + x.clone() * y.clone();
            }
        }
    }
    reduce_lift(lift)
}

/// `zeta -> zeta^j` on a coefficient vector; `j` must be prime to `p`.
fn galois_generic<T: Clone + Num>(a: &[T], j: u64) -> Vec<T> {
    let p = a.len() as u64 + 1;
    let mut lift = vec![T::zero(); p as usize];
    for (i, c) in a.iter().enumerate() {
        let k = (i as u64 * j % p) as usize;
        lift[k] = lift[k].clone() + c.clone();
    }
    reduce_lift(lift)
}

fn zeta_powers(p: u32, prec: u32) -> Vec<BigComplex> {
    let z = BigComplex::root_of_unity(1, p as u64, prec + 16);
    let mut out = Vec::with_capacity(p as usize);
    let mut cur = BigComplex::from_real(BigFloat::from_i64(1));
    for _ in 0..p {
        out.push(cur.clone());
        cur = cur.mul(&z, prec + 16);
    }
    out
}

/// Element of `Z[zeta_p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicInt {
    p: u32,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn zero(p: u32) -> Self {
        assert!(p >= 2);
        CyclotomicInt { p, coeffs: vec![BigInt::zero(); p as usize - 1] }
    }

    pub fn from_integer(p: u32, n: BigInt) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = n;
        z
    }

    pub fn one(p: u32) -> Self {
        Self::from_integer(p, BigInt::one())
    }

    /// `zeta^j`.
    pub fn zeta_pow(p: u32, j: u64) -> Self {
        let mut lift = vec![BigInt::zero(); p as usize];
        lift[(j % p as u64) as usize] = BigInt::one();
        CyclotomicInt { p, coeffs: reduce_lift(lift) }
    }

    /// `sum_c counts[c] zeta^c` for `c in 0..p`.
    pub fn from_exponent_counts(p: u32, counts: &[BigInt]) -> Self {
        assert_eq!(counts.len(), p as usize);
        CyclotomicInt { p, coeffs: reduce_lift(counts.to_vec()) }
    }

    /// Builds from a canonical coefficient vector of length `p - 1`.
    pub fn from_coeffs(p: u32, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), p as usize - 1);
        CyclotomicInt { p, coeffs }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        CyclotomicInt { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        CyclotomicInt { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        CyclotomicInt { p: self.p, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        CyclotomicInt { p: self.p, coeffs: mul_generic(&self.coeffs, &o.coeffs) }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CyclotomicInt { p: self.p, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(self.p as u64 - 1)
    }

    /// The automorphism `zeta -> zeta^j`, `j` prime to `p`.
    pub fn galois(&self, j: u64) -> Self {
        assert!(j % self.p as u64 != 0, "j must be prime to p");
        CyclotomicInt { p: self.p, coeffs: galois_generic(&self.coeffs, j) }
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    /// `sum |c_i|`, which bounds `|x|` under every complex embedding.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Value under `zeta -> e^{2 pi i / p}`.
    pub fn embed(&self, prec: u32) -> BigComplex {
        let powers = zeta_powers(self.p, prec);
        let w = prec + 16;
        let mut acc = BigComplex::zero();
        for (c, z) in self.coeffs.iter().zip(&powers) {
            if !c.is_zero() {
                acc = acc.add(&z.scale(&BigFloat::from_bigint(c, w), w), w);
            }
        }
        acc
    }

    pub fn to_rational(&self) -> CycloRational {
        CycloRational {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect(),
        }
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Element of the field `Q(zeta_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloRational {
    p: u32,
    coeffs: Vec<BigRational>,
}

impl CycloRational {
    pub fn zero(p: u32) -> Self {
        CycloRational { p, coeffs: vec![BigRational::zero(); p as usize - 1] }
    }

    pub fn from_rational(p: u32, r: BigRational) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = r;
        z
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn galois(&self, j: u64) -> Self {
        CycloRational { p: self.p, coeffs: galois_generic(&self.coeffs, j) }
    }

    pub fn conj(&self) -> Self {
        self.galois(self.p as u64 - 1)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    /// The element of `Z[zeta_p]` it equals, if all coefficients are integers.
    pub fn to_cyclotomic_int(&self) -> Option<CyclotomicInt> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()?;
        Some(CyclotomicInt { p: self.p, coeffs })
    }

    /// Field norm to `Q`: the product of all conjugates.
    pub fn norm(&self) -> BigRational {
        let mut acc = self.clone();
        for j in 2..self.p as u64 {
            acc = Scalar::mul(&acc, &self.galois(j));
        }
        acc.as_rational().expect("the norm is rational")
    }

    pub fn embed(&self, prec: u32) -> BigComplex {
        let powers = zeta_powers(self.p, prec);
        let w = prec + 16;
        let mut acc = BigComplex::zero();
        for (c, z) in self.coeffs.iter().zip(&powers) {
            if !Zero::is_zero(c) {
                acc = acc.add(&z.scale(&BigFloat::from_rational(c, w), w), w);
            }
        }
        acc
    }
}

impl Scalar for CycloRational {
    fn zero_like(&self) -> Self {
        CycloRational::zero(self.p)
    }

    fn one_like(&self) -> Self {
        CycloRational::from_rational(self.p, BigRational::one())
    }

    fn from_i64_like(&self, n: i64) -> Self {
        CycloRational::from_rational(self.p, BigRational::from_integer(n.into()))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn add(&self, o: &Self) -> Self {
        CycloRational { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    fn sub(&self, o: &Self) -> Self {
        CycloRational { p: self.p, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    fn mul(&self, o: &Self) -> Self {
        CycloRational { p: self.p, coeffs: mul_generic(&self.coeffs, &o.coeffs) }
    }

    fn neg(&self) -> Self {
        CycloRational { p: self.p, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    /// `a^{-1} = (prod_{j >= 2} sigma_j(a)) / N(a)`.
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let mut others = self.one_like();
        for j in 2..self.p as u64 {
            others = Scalar::mul(&others, &self.galois(j));
        }
        let n = Scalar::mul(self, &others).as_rational().expect("the norm is rational");
        let inv_n = n.recip();
        Some(CycloRational { p: self.p, coeffs: others.coeffs.iter().map(|c| c * &inv_n).collect() })
    }
}
