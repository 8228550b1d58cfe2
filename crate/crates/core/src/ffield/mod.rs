//! Finite fields `F_{p^k}` as `F_p[x]/(f)` with a deterministically chosen
//! modulus `f`.
//!
//! [`FieldCtx`] is the reference model: dense coefficient vectors, schoolbook
//! arithmetic, Frobenius and absolute trace. The enumeration kernels in
//! [`crate::geometry`] and [`crate::expsum`] use the table-driven
//! [`tables::ZechField`] instead; point counts and traces do not depend on the
//! model of the field, so the two never need to be identified.

pub(crate) mod fp_poly;
pub mod tables;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Largest accepted characteristic (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    DegreeZero,
    BudgetExceeded { size: BigUint, budget: u64 },
    IncompatibleDegrees { source: PrimePower, target: PrimePower },
    NoRootFound,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not a prime below 2^31"),
            FieldError::DegreeZero => write!(f, "extension degree must be at least 1"),
            FieldError::BudgetExceeded { size, budget } => {
                write!(f, "field of size {size} exceeds enumeration budget {budget}")
            }
            FieldError::IncompatibleDegrees { source, target } => write!(
                f,
                "cannot embed F_{{{}^{}}} into F_{{{}^{}}}",
                source.p, source.k, target.p, target.k
            ),
            FieldError::NoRootFound => write!(f, "modulus has no root in the target field"),
        }
    }
}

impl core::error::Error for FieldError {}

/// Deterministic primality by trial division; fine for `n < 2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `q = p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    p: u32,
    k: u32,
}

impl PrimePower {
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::DegreeZero);
        }
        Ok(PrimePower { p: p as u32, k })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> BigUint {
        BigUint::from(self.p).pow(self.k)
    }

    /// `q` if it fits in a `u64`.
    pub fn q_u64(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.k)
    }

    /// `q^m`, i.e. the field `F_{q^m}`.
    pub fn extend(&self, m: u32) -> PrimePower {
        PrimePower { p: self.p, k: self.k * m }
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.k)
        }
    }
}

/// Element of `F_{p^k}`: `k` residues, coefficient of `x^i` at index `i`.
///
/// The derived ordering is the enumeration order of [`FieldCtx::elements`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElem {
    coeffs: Vec<u32>,
}

impl FFElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Immutable description of `F_{p^k}`; shareable across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    pp: PrimePower,
    /// Monic, `k + 1` entries.
    modulus: Vec<u32>,
}

impl FieldCtx {
    /// Builds `F_{p^k}` with modulus the first irreducible monic polynomial of
    /// degree `k` ordered by number of nonzero terms, then lexicographically on
    /// `[c_0, .., c_{k-1}]`.
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        let pp = PrimePower::new(p, k)?;
        let modulus = fp_poly::first_monic_where(pp.p, k as usize, |f| {
            fp_poly::is_irreducible(f, pp.p)
        })
        .expect("an irreducible polynomial of every degree exists");
        Ok(FieldCtx { pp, modulus })
    }

    pub(crate) fn with_modulus(pp: PrimePower, modulus: Vec<u32>) -> Self {
        debug_assert_eq!(modulus.len(), pp.k as usize + 1);
        FieldCtx { pp, modulus }
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn p(&self) -> u32 {
        self.pp.p
    }

    pub fn degree(&self) -> u32 {
        self.pp.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn size(&self) -> BigUint {
        self.pp.q()
    }

    fn k(&self) -> usize {
        self.pp.k as usize
    }

    pub fn zero(&self) -> FFElem {
        FFElem { coeffs: vec![0; self.k()] }
    }

    pub fn one(&self) -> FFElem {
        self.from_prime(1)
    }

    /// Image of the integer `c` in the prime field.
    pub fn from_prime(&self, c: u64) -> FFElem {
        let mut e = self.zero();
        e.coeffs[0] = (c % self.pp.p as u64) as u32;
        e
    }

    /// The class of `x`, i.e. the generator `F_p[x]/(f)` is built on.
    pub fn generator(&self) -> FFElem {
        self.from_poly(&[0, 1])
    }

    /// Reduces an arbitrary coefficient list modulo `p` and the modulus.
    pub fn from_poly(&self, coeffs: &[u32]) -> FFElem {
        let p = self.pp.p;
        let reduced: Vec<u32> = coeffs.iter().map(|&c| c % p).collect();
        let r = fp_poly::rem_monic(&reduced, &self.modulus, p);
        let mut out = self.zero();
        out.coeffs[..r.len()].copy_from_slice(&r);
        out
    }

    pub fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let p = self.pp.p as u64;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| ((x as u64 + y as u64) % p) as u32)
            .collect();
        FFElem { coeffs }
    }

    pub fn neg(&self, a: &FFElem) -> FFElem {
        let p = self.pp.p;
        let coeffs = a.coeffs.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect();
        FFElem { coeffs }
    }

    pub fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        let prod = fp_poly::mul(&a.coeffs, &b.coeffs, self.pp.p);
        let r = fp_poly::rem_monic(&prod, &self.modulus, self.pp.p);
        let mut out = self.zero();
        out.coeffs[..r.len()].copy_from_slice(&r);
        out
    }

    pub fn scale(&self, a: &FFElem, c: u32) -> FFElem {
        let p = self.pp.p as u64;
        let coeffs = a.coeffs.iter().map(|&x| (x as u64 * c as u64 % p) as u32).collect();
        FFElem { coeffs }
    }

    pub fn pow_u64(&self, a: &FFElem, mut e: u64) -> FFElem {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn pow(&self, a: &FFElem, e: &BigUint) -> FFElem {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.mul(&result, &result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &FFElem) -> Option<FFElem> {
        if a.is_zero() {
            return None;
        }
        let e = self.size() - BigUint::from(2u32);
        Some(self.pow(a, &e))
    }

    /// `x -> x^p`.
    pub fn frobenius_p(&self, a: &FFElem) -> FFElem {
        self.pow_u64(a, self.pp.p as u64)
    }

    /// `x -> x^q` for a subfield `F_q` of this field, as `q.k()` successive
    /// p-power maps.
    pub fn frobenius_q(&self, a: &FFElem, q: PrimePower) -> FFElem {
        debug_assert_eq!(q.p, self.pp.p);
        (0..q.k).fold(a.clone(), |x, _| self.frobenius_p(&x))
    }

    /// Absolute trace `x + x^p + .. + x^(p^(k-1))`, an element of `F_p`.
    pub fn trace_to_prime(&self, a: &FFElem) -> u32 {
        let mut acc = self.zero();
        let mut conj = a.clone();
        for _ in 0..self.k() {
            acc = self.add(&acc, &conj);
            conj = self.frobenius_p(&conj);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// Element number `index` in enumeration order: lexicographic in
    /// `(c_0, .., c_{k-1})`, so `c_{k-1}` varies fastest.
    pub fn element_at(&self, mut index: u64) -> FFElem {
        let p = self.pp.p as u64;
        let mut coeffs = vec![0u32; self.k()];
        for c in coeffs.iter_mut().rev() {
            *c = (index % p) as u32;
            index /= p;
        }
        FFElem { coeffs }
    }

    pub fn index_of(&self, a: &FFElem) -> u64 {
        let p = self.pp.p as u64;
        a.coeffs.iter().fold(0u64, |acc, &c| acc * p + c as u64)
    }

    /// All elements in enumeration order, refusing fields larger than
    /// `budget`.
    pub fn elements(&self, budget: u64) -> Result<Elements<'_>, FieldError> {
        let size = self.size();
        match size.to_u64() {
            Some(q) if q <= budget => Ok(self.elements_range(0, q)),
            _ => Err(FieldError::BudgetExceeded { size, budget }),
        }
    }

    /// Elements with enumeration index in `start..end`. Independent streams
    /// over disjoint ranges partition the field.
    pub fn elements_range(&self, start: u64, end: u64) -> Elements<'_> {
        Elements { ctx: self, next: start, end }
    }
}

/// Restartable stream over a range of the enumeration order.
#[derive(Clone, Debug)]
pub struct Elements<'a> {
    ctx: &'a FieldCtx,
    next: u64,
    end: u64,
}

impl Iterator for Elements<'_> {
    type Item = FFElem;

    fn next(&mut self) -> Option<FFElem> {
        if self.next >= self.end {
            return None;
        }
        let e = self.ctx.element_at(self.next);
        self.next += 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end.saturating_sub(self.next)) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements<'_> {}

/// Convenience wrapper around [`FieldCtx::new`].
pub fn make_field(p: u64, k: u32) -> Result<FieldCtx, FieldError> {
    FieldCtx::new(p, k)
}

/// Ring embedding `F_{p^a} -> F_{p^{ab}}`, fixed by sending the source
/// generator to the first root of the source modulus in the target's
/// enumeration order.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldCtx,
    target: FieldCtx,
    /// Images of `1, x, .., x^(a-1)`.
    basis_images: Vec<FFElem>,
}

impl Embedding {
    pub fn new(source: &FieldCtx, target: &FieldCtx) -> Result<Self, FieldError> {
        let (s, t) = (source.prime_power(), target.prime_power());
        if s.p != t.p || t.k % s.k != 0 {
            return Err(FieldError::IncompatibleDegrees { source: s, target: t });
        }
        let q = target.size().to_u64().ok_or(FieldError::NoRootFound)?;
        let root = target
            .elements_range(0, q)
            .find(|cand| eval_fp_poly(target, source.modulus(), cand).is_zero())
            .ok_or(FieldError::NoRootFound)?;
        let mut basis_images = Vec::with_capacity(s.k as usize);
        let mut power = target.one();
        for _ in 0..s.k {
            basis_images.push(power.clone());
            power = target.mul(&power, &root);
        }
        Ok(Embedding { source: source.clone(), target: target.clone(), basis_images })
    }

    pub fn source(&self) -> &FieldCtx {
        &self.source
    }

    pub fn target(&self) -> &FieldCtx {
        &self.target
    }

    /// Image of the source generator.
    pub fn generator_image(&self) -> &FFElem {
        self.basis_images.get(1).unwrap_or(&self.basis_images[0])
    }

    pub fn apply(&self, a: &FFElem) -> FFElem {
        a.coeffs
            .iter()
            .zip(&self.basis_images)
            .fold(self.target.zero(), |acc, (&c, img)| {
                self.target.add(&acc, &self.target.scale(img, c))
            })
    }
}

/// One-shot embedding of `a` from `source` into `target`.
pub fn embed(a: &FFElem, source: &FieldCtx, target: &FieldCtx) -> Result<FFElem, FieldError> {
    Ok(Embedding::new(source, target)?.apply(a))
}

/// Evaluates a polynomial with `F_p` coefficients at an element.
pub fn eval_fp_poly(ctx: &FieldCtx, coeffs: &[u32], at: &FFElem) -> FFElem {
    coeffs.iter().rev().fold(ctx.zero(), |acc, &c| {
        ctx.add(&ctx.mul(&acc, at), &ctx.from_prime(c as u64))
    })
}

/// `sum_{i=0}^{n} q^{m i}`: the number of points of `P^n` over `F_{q^m}`.
pub fn projective_space_count(n: u32, q: &BigUint, m: u32) -> BigUint {
    let qm = q.pow(m);
    let mut acc = BigUint::zero();
    let mut term = BigUint::one();
    for _ in 0..=n {
        acc += &term;
        term *= &qm;
    }
    acc
}
