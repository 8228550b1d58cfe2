//! Dense polynomials over a prime field `F_p`, coefficients in ascending order.
//!
//! Only what the field constructions need: modular multiplication and
//! exponentiation, gcd, and the irreducibility / primitivity tests.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` modulo the monic polynomial `f`.
pub(crate) fn rem_monic(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let k = f.len() - 1;
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    let p64 = p as u64;
    while r.len() > k {
        let top = r.len() - 1;
        let c = r[top] as u64;
        if c != 0 {
            let shift = top - k;
            for (j, &fj) in f.iter().enumerate().take(k) {
                let idx = shift + j;
                r[idx] = ((r[idx] as u64 + (p64 - c) * fj as u64) % p64) as u32;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    rem_monic(&mul(a, b, p), f, p)
}

pub(crate) fn powmod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut result = rem_monic(&[1], f, p);
    let mut b = rem_monic(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(&b, &b, f, p);
        }
    }
    result
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0) as u64;
        let y = b.get(i).copied().unwrap_or(0) as u64;
        out.push(((x + p as u64 - y) % p as u64) as u32);
    }
    trim(&mut out);
    out
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x: Vec<u32> = a.to_vec();
    let mut y: Vec<u32> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let lead_inv = inv_mod(*y.last().unwrap(), p);
        let monic: Vec<u32> = y
            .iter()
            .map(|&c| (c as u64 * lead_inv as u64 % p as u64) as u32)
            .collect();
        let r = rem_monic(&x, &monic, p);
        x = monic;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv_mod(lead, p);
        for c in x.iter_mut() {
            *c = (*c as u64 * li as u64 % p as u64) as u32;
        }
    }
    x
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^(p^j) mod f` for `j = 0..=k`.
fn frobenius_orbit_of_x(f: &[u32], p: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(k + 1);
    let mut h = rem_monic(&[0, 1], f, p);
    out.push(h.clone());
    for _ in 0..k {
        h = powmod(&h, p as u64, f, p);
        out.push(h.clone());
    }
    out
}

/// Rabin's test: `f` (monic, degree k) is irreducible iff `x^(p^k) = x mod f`
/// and `gcd(x^(p^(k/r)) - x, f) = 1` for every prime `r | k`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let orbit = frobenius_orbit_of_x(f, p, k);
    let x = rem_monic(&[0, 1], f, p);
    if orbit[k] != x {
        return false;
    }
    for r in prime_factors(k as u64) {
        let d = sub(&orbit[k / r as usize], &x, p);
        if gcd(&d, f, p).len() != 1 {
            return false;
        }
    }
    true
}

/// True iff `f` is irreducible and `x` generates the multiplicative group of
/// `F_p[x]/(f)`.
pub(crate) fn is_primitive(f: &[u32], p: u32) -> bool {
    if !is_irreducible(f, p) {
        return false;
    }
    let k = (f.len() - 1) as u32;
    let order = (p as u64).pow(k) - 1;
    let x = [0u32, 1];
    if rem_monic(&x, f, p).is_empty() {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|r| powmod(&x, order / r, f, p) != [1u32])
}

/// Visits monic degree-`k` polynomials in the fixed search order (fewest
/// nonzero terms first, then lexicographic on `[c_0, .., c_{k-1}]`) until
/// `accept` returns true. Returns the full coefficient list, leading 1 included.
pub(crate) fn first_monic_where(
    p: u32,
    k: usize,
    mut accept: impl FnMut(&[u32]) -> bool,
) -> Option<Vec<u32>> {
    fn walk(
        pos: usize,
        remaining: usize,
        p: u32,
        buf: &mut Vec<u32>,
        accept: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        let k = buf.len() - 1;
        if pos == k {
            return remaining == 0 && accept(buf);
        }
        let slots_left = k - pos;
        if remaining < slots_left {
            buf[pos] = 0;
            if walk(pos + 1, remaining, p, buf, accept) {
                return true;
            }
        }
        if remaining > 0 {
            for v in 1..p {
                buf[pos] = v;
                if walk(pos + 1, remaining - 1, p, buf, accept) {
                    return true;
                }
            }
            buf[pos] = 0;
        }
        false
    }
    let mut buf = vec![0u32; k + 1];
    buf[k] = 1;
    for lower_terms in 0..=k {
        if walk(0, lower_terms, p, &mut buf, &mut accept) {
            return Some(buf);
        }
    }
    None
}
