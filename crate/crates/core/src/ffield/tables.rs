//! Field arithmetic for the enumeration kernels.
//!
//! [`ZechField`] stores every nonzero element as its discrete logarithm with
//! respect to a primitive element and precomputes Zech logarithms
//! `Z(n) = log(1 + g^n)`, so a multiplication is an integer addition and an
//! addition is one table lookup. Tables cost 4 bytes per field element (plus 4
//! more for the optional trace table), so it is used up to [`ZECH_TABLE_CAP`].
//! Larger fields fall back to [`DenseField`].

use alloc::vec;
use alloc::vec::Vec;

use super::fp_poly;
use super::{FieldCtx, FieldError, PrimePower};

/// Largest field for which Zech tables are built.
pub const ZECH_TABLE_CAP: u64 = 1 << 27;

/// Arithmetic used by the counting and exponential-sum kernels. Elements are
/// small `Copy` handles; `element(i)` for `i in 0..size()` is a bijection
/// onto the field and `slot` is its inverse.
pub trait KernelField: Sync {
    type E: Copy + Eq + core::fmt::Debug;

    fn size(&self) -> u64;
    fn element(&self, index: u64) -> Self::E;
    fn slot(&self, e: Self::E) -> usize;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, e: Self::E) -> bool;
    fn from_prime(&self, c: u32) -> Self::E;
    fn add(&self, a: Self::E, b: Self::E) -> Self::E;
    fn mul(&self, a: Self::E, b: Self::E) -> Self::E;
    fn neg(&self, a: Self::E) -> Self::E;
    fn pow(&self, a: Self::E, e: u32) -> Self::E;
    /// Absolute trace to `F_p`. Only available when requested at construction.
    fn trace(&self, a: Self::E) -> u32;
}

/// Walks the powers `1, x, x^2, ..` of `x` in `F_p[x]/(f)` for monic `f`,
/// keeping both the coefficient digits and the packed index `sum d_j p^j`.
struct PowerWalk {
    p: u32,
    digits: Vec<u32>,
    /// `p^j` for `j = 0..=k`.
    pw: Vec<u32>,
    /// `addend[t][j] = -t f_j mod p`: what reducing `t x^k` adds to digit `j`.
    addend: Vec<Vec<u32>>,
    /// Packed index of `addend[t]`.
    addend_index: Vec<u32>,
    index: u32,
}

impl PowerWalk {
    /// Requires `p^k <= 2^32`.
    fn new(f: &[u32], p: u32, k: usize) -> Self {
        let pw: Vec<u32> = (0..=k as u32).map(|j| p.pow(j)).collect();
        let addend: Vec<Vec<u32>> = (0..p as u64)
            .map(|t| (0..k).map(|j| ((p as u64 - f[j] as u64) * t % p as u64) as u32).collect())
            .collect();
        let addend_index = addend.iter().map(|a| a.iter().zip(&pw).map(|(&d, &w)| d * w).sum()).collect();
        let mut digits = vec![0u32; k];
        digits[0] = 1;
        PowerWalk { p, digits, pw, addend, addend_index, index: 1 }
    }

    #[inline]
    fn step(&mut self) {
        let k = self.digits.len();
        let top = self.digits[k - 1];
        self.digits.copy_within(0..k - 1, 1);
        self.digits[0] = 0;
        self.index = (self.index - top * self.pw[k - 1]) * self.p;
        if top != 0 {
            let p = self.p;
            self.index += self.addend_index[top as usize];
            for (j, (d, &a)) in self.digits.iter_mut().zip(&self.addend[top as usize]).enumerate() {
                let s = *d + a;
                *d = if s >= p {
                    self.index -= self.pw[j + 1];
                    s - p
                } else {
                    s
                };
            }
        }
    }
}

/// Traces of the basis `1, x, .., x^(k-1)` of `F_p[x]/(f)`.
fn basis_traces(pp: PrimePower, f: &[u32]) -> Vec<u32> {
    let ctx = FieldCtx::with_modulus(pp, f.to_vec());
    let mut power = ctx.one();
    let x = ctx.generator();
    (0..pp.k())
        .map(|_| {
            let t = ctx.trace_to_prime(&power);
            power = ctx.mul(&power, &x);
            t
        })
        .collect()
}

/// First primitive monic polynomial of degree `k` over `F_p` in the same
/// search order as [`FieldCtx::new`].
pub fn first_primitive_modulus(p: u32, k: u32) -> Vec<u32> {
    fp_poly::first_monic_where(p, k as usize, |f| fp_poly::is_primitive(f, p))
        .expect("a primitive polynomial of every degree exists")
}

/// Table-driven `F_{p^k}`; the zero element is encoded as `q - 1`.
#[derive(Clone, Debug)]
pub struct ZechField {
    pp: PrimePower,
    q: u64,
    order: u32,
    zech: Vec<u32>,
    prime_logs: Vec<u32>,
    traces: Option<Vec<u32>>,
}

impl ZechField {
    pub fn new(pp: PrimePower, with_trace: bool) -> Result<Self, FieldError> {
        let q = pp.q_u64().filter(|&q| q <= ZECH_TABLE_CAP).ok_or_else(|| {
            FieldError::BudgetExceeded { size: pp.q(), budget: ZECH_TABLE_CAP }
        })?;
        let (p, k) = (pp.p(), pp.k() as usize);
        let f = first_primitive_modulus(p, pp.k());
        let order = (q - 1) as u32;

        // First pass: logarithms, traces, and the index of each power g^i
        // parked in `zech[i]`; second pass: Z(i) = log(g^i + 1).
        let basis_tr = if with_trace { basis_traces(pp, &f) } else { Vec::new() };
        let mut log = vec![0u32; q as usize];
        let mut zech = vec![order; q as usize];
        let mut traces = if with_trace { vec![0u32; q as usize] } else { Vec::new() };
        let mut walk = PowerWalk::new(&f, p, k);
        for i in 0..order as usize {
            log[walk.index as usize] = i as u32;
            zech[i] = walk.index;
            if with_trace {
                let t: u64 = walk.digits.iter().zip(&basis_tr).map(|(&d, &t)| d as u64 * t as u64).sum();
                traces[i] = (t % p as u64) as u32;
            }
            walk.step();
        }
        log[0] = order;
        for z in zech.iter_mut().take(order as usize) {
            let idx = *z;
            let plus_one = if idx % p == p - 1 { idx - (p - 1) } else { idx + 1 };
            *z = log[plus_one as usize];
        }
        let prime_logs = (0..p as usize).map(|c| log[c]).collect();
        Ok(ZechField {
            pp,
            q,
            order,
            zech,
            prime_logs,
            traces: with_trace.then_some(traces),
        })
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    #[inline]
    fn reduce(&self, s: u64) -> u32 {
        (s % self.order as u64) as u32
    }
}

impl KernelField for ZechField {
    type E = u32;

    fn size(&self) -> u64 {
        self.q
    }

    #[inline]
    fn element(&self, index: u64) -> u32 {
        index as u32
    }

    #[inline]
    fn slot(&self, e: u32) -> usize {
        e as usize
    }

    #[inline]
    fn zero(&self) -> u32 {
        self.order
    }

    #[inline]
    fn is_zero(&self, e: u32) -> bool {
        e == self.order
    }

    fn from_prime(&self, c: u32) -> u32 {
        self.prime_logs[(c % self.pp.p()) as usize]
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let n = self.order;
        if a == n {
            return b;
        }
        if b == n {
            return a;
        }
        let d = if b >= a { b - a } else { b + (n - a) };
        let z = self.zech[d as usize];
        if z == n {
            return n;
        }
        let s = a as u64 + z as u64;
        if s >= n as u64 {
            (s - n as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        let n = self.order;
        if a == n || b == n {
            return n;
        }
        let s = a as u64 + b as u64;
        if s >= n as u64 {
            (s - n as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if self.pp.p() == 2 || a == self.order {
            return a;
        }
        self.reduce(a as u64 + (self.order / 2) as u64)
    }

    #[inline]
    fn pow(&self, a: u32, e: u32) -> u32 {
        if a == self.order {
            return if e == 0 { 0 } else { self.order };
        }
        self.reduce(a as u64 * e as u64)
    }

    #[inline]
    fn trace(&self, a: u32) -> u32 {
        if a == self.order {
            return 0;
        }
        self.traces.as_ref().expect("ZechField built without trace table")[a as usize]
    }
}

const MAX_DENSE_DEGREE: usize = 64;

/// Schoolbook arithmetic on packed indices `sum d_j p^j`; slow but unbounded
/// by memory.
#[derive(Clone, Debug)]
pub struct DenseField {
    pp: PrimePower,
    q: u64,
    modulus: Vec<u32>,
    pw: Vec<u64>,
    basis_tr: Vec<u32>,
}

impl DenseField {
    pub fn new(pp: PrimePower) -> Result<Self, FieldError> {
        let q = pp
            .q_u64()
            .filter(|&q| q < 1 << 63)
            .ok_or(FieldError::BudgetExceeded { size: pp.q(), budget: u64::MAX })?;
        let ctx = FieldCtx::new(pp.p() as u64, pp.k())?;
        let modulus = ctx.modulus().to_vec();
        let pw = (0..pp.k()).map(|j| (pp.p() as u64).pow(j)).collect();
        let basis_tr = basis_traces(pp, &modulus);
        Ok(DenseField { pp, q, modulus, pw, basis_tr })
    }

    fn k(&self) -> usize {
        self.pp.k() as usize
    }

    fn decode(&self, mut idx: u64) -> [u32; MAX_DENSE_DEGREE] {
        let p = self.pp.p() as u64;
        let mut d = [0u32; MAX_DENSE_DEGREE];
        for slot in d.iter_mut().take(self.k()) {
            *slot = (idx % p) as u32;
            idx /= p;
        }
        d
    }

    fn encode(&self, d: &[u32]) -> u64 {
        d[..self.k()].iter().zip(&self.pw).map(|(&d, &w)| d as u64 * w).sum()
    }
}

impl KernelField for DenseField {
    type E = u64;

    fn size(&self) -> u64 {
        self.q
    }

    fn element(&self, index: u64) -> u64 {
        index
    }

    fn slot(&self, e: u64) -> usize {
        e as usize
    }

    fn zero(&self) -> u64 {
        0
    }

    fn is_zero(&self, e: u64) -> bool {
        e == 0
    }

    fn from_prime(&self, c: u32) -> u64 {
        (c % self.pp.p()) as u64
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.pp.p();
        let (x, y) = (self.decode(a), self.decode(b));
        let mut s = [0u32; MAX_DENSE_DEGREE];
        for j in 0..self.k() {
            s[j] = ((x[j] as u64 + y[j] as u64) % p as u64) as u32;
        }
        self.encode(&s)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let (p, k) = (self.pp.p() as u64, self.k());
        let (x, y) = (self.decode(a), self.decode(b));
        let mut prod = [0u64; 2 * MAX_DENSE_DEGREE];
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] as u64 * y[j] as u64) % p;
            }
        }
        for deg in (k..2 * k - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                prod[deg - k + j] = (prod[deg - k + j] + (p - c) * self.modulus[j] as u64) % p;
            }
        }
        let mut out = [0u32; MAX_DENSE_DEGREE];
        for j in 0..k {
            out[j] = prod[j] as u32;
        }
        self.encode(&out)
    }

    fn neg(&self, a: u64) -> u64 {
        let p = self.pp.p();
        let mut x = self.decode(a);
        for d in x.iter_mut().take(self.k()) {
            if *d != 0 {
                *d = p - *d;
            }
        }
        self.encode(&x)
    }

    fn pow(&self, a: u64, mut e: u32) -> u64 {
        let mut result = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    fn trace(&self, a: u64) -> u32 {
        let p = self.pp.p() as u64;
        let x = self.decode(a);
        let t: u64 = (0..self.k()).map(|j| x[j] as u64 * self.basis_tr[j] as u64 % p).sum();
        (t % p) as u32
    }
}

/// Zech tables when the field is small enough, schoolbook otherwise.
#[derive(Clone, Debug)]
pub enum AnyKernelField {
    Zech(ZechField),
    Dense(DenseField),
}

impl AnyKernelField {
    pub fn new(pp: PrimePower, with_trace: bool) -> Result<Self, FieldError> {
        match pp.q_u64() {
            Some(q) if q <= ZECH_TABLE_CAP => Ok(Self::Zech(ZechField::new(pp, with_trace)?)),
            _ => Ok(Self::Dense(DenseField::new(pp)?)),
        }
    }

    pub fn size(&self) -> u64 {
        match self {
            Self::Zech(f) => f.size(),
            Self::Dense(f) => f.size(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_against_reference<F: KernelField>(field: &F, ctx: &FieldCtx) {
        // Both models are F_q, so the multiset of (x^3 + 2x + 1) values and of
        // traces must agree even though the element labels differ.
        let q = field.size();
        let mut hist_kernel = vec![0u32; q as usize];
        let mut tr_kernel = vec![0u32; ctx.p() as usize];
        let one = field.from_prime(1);
        let two = field.from_prime(2);
        for i in 0..q {
            let x = field.element(i);
            let v = field.add(field.add(field.pow(x, 3), field.mul(two, x)), one);
            hist_kernel[field.slot(v)] += 1;
            tr_kernel[field.trace(x) as usize] += 1;
        }
        let mut hist_ref = vec![0u32; q as usize];
        let mut tr_ref = vec![0u32; ctx.p() as usize];
        for x in ctx.elements(q).unwrap() {
            let x3 = ctx.pow_u64(&x, 3);
            let v = ctx.add(&ctx.add(&x3, &ctx.scale(&x, 2)), &ctx.one());
            hist_ref[ctx.index_of(&v) as usize] += 1;
            tr_ref[ctx.trace_to_prime(&x) as usize] += 1;
        }
        hist_kernel.sort_unstable();
        hist_ref.sort_unstable();
        assert_eq!(hist_kernel, hist_ref);
        assert_eq!(tr_kernel, tr_ref);
    }

    #[test]
    fn zech_matches_reference_model() {
        for (p, k) in [(2u64, 1u32), (2, 5), (3, 3), (5, 2), (7, 1), (13, 2)] {
            let pp = PrimePower::new(p, k).unwrap();
            let ctx = FieldCtx::new(p, k).unwrap();
            check_against_reference(&ZechField::new(pp, true).unwrap(), &ctx);
            check_against_reference(&DenseField::new(pp).unwrap(), &ctx);
        }
    }

    #[test]
    fn zech_field_axioms_exhaustive() {
        let f = ZechField::new(PrimePower::new(3, 2).unwrap(), false).unwrap();
        let all: Vec<u32> = (0..9).map(|i| f.element(i)).collect();
        for &a in &all {
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            for &b in &all {
                assert_eq!(f.add(a, b), f.add(b, a));
                for &c in &all {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                }
            }
        }
    }

    #[test]
    fn primitive_modulus_search() {
        // x^2 + x + 1 is the only irreducible quadratic over F_2 and is primitive.
        assert_eq!(first_primitive_modulus(2, 2), [1, 1, 1]);
        // Over F_7, x is not a generator of F_7 and x + 1 gives -1 of order 2;
        // the first primitive linear is x + 2 (root 5, a generator mod 7).
        assert_eq!(first_primitive_modulus(7, 1), [2, 1]);
    }
}
