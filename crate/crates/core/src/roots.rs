//! Complex roots of exact polynomials by Aberth's simultaneous iteration.
//!
//! Polynomials are first split into squarefree parts exactly (Yun), so the
//! iteration only ever sees simple roots and converges cubically. The start
//! configuration is a fixed circle, which makes the result a deterministic
//! function of the input and the precision.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::bigfloat::{BigComplex, BigFloat};
use crate::poly::{self, Scalar, ZPoly};

/// Iteration cap per precision level.
const MAX_ITERATIONS: usize = 2000;

/// Precision ladder tried by [`roots_of`] until the iteration converges.
pub const PRECISION_LADDER: [u32; 3] = [128, 256, 512];

/// A root together with its relative residual
/// `|f(z)| / sum |c_i| |z|^i` measured on the squarefree factor it came from.
#[derive(Clone, Debug)]
pub struct Root {
    pub value: BigComplex,
    pub residual: f64,
}

impl Root {
    pub fn to_f64(&self) -> (f64, f64) {
        self.value.to_f64()
    }

    pub fn modulus(&self) -> f64 {
        self.value.abs(64).to_f64()
    }
}

fn horner(c: &[BigComplex], z: &BigComplex, prec: u32) -> (BigComplex, BigComplex) {
    let mut f = c[c.len() - 1].clone();
    let mut df = BigComplex::zero();
    for coeff in c[..c.len() - 1].iter().rev() {
        df = df.mul(z, prec).add(&f, prec);
        f = f.mul(z, prec).add(coeff, prec);
    }
    (f, df)
}

fn relative_residual(c: &[BigComplex], z: &BigComplex, prec: u32) -> f64 {
    let (f, _) = horner(c, z, prec);
    let az = z.abs(prec);
    let mut scale = BigFloat::zero();
    for coeff in c.iter().rev() {
        scale = scale.mul(&az, prec).add(&coeff.abs(prec), prec);
    }
    if scale.is_zero() {
        return 0.0;
    }
    f.abs(prec).div(&scale, prec).to_f64()
}

/// Aberth iteration on a polynomial with simple roots (coefficients
/// ascending, leading coefficient nonzero). `None` if it fails to converge.
pub fn aberth(c: &[BigComplex], prec: u32) -> Option<Vec<Root>> {
    let d = c.len().checked_sub(1)?;
    if d == 0 {
        return Some(Vec::new());
    }
    let w = prec + 32;
    if d == 1 {
        let z = c[0].neg().div(&c[1], w);
        let residual = relative_residual(c, &z, w);
        return Some(alloc::vec![Root { value: z, residual }]);
    }
    let c0 = c[0].abs(64).to_f64();
    let cn = c[d].abs(64).to_f64();
    let radius = if c0 > 0.0 && cn > 0.0 { libm::pow(c0 / cn, 1.0 / d as f64) } else { 1.0 };
    let mut z: Vec<BigComplex> = (0..d)
        .map(|k| {
            let phase = 2.0 * core::f64::consts::PI * k as f64 / d as f64 + 0.4;
            BigComplex::from_f64(radius * libm::cos(phase), radius * libm::sin(phase))
        })
        .collect();
    let one = BigComplex::from_real(BigFloat::from_i64(1));
    let tol_bits = 2 * prec as i64 - 8;
    for _ in 0..MAX_ITERATIONS {
        let mut done = true;
        let mut next = Vec::with_capacity(d);
        for k in 0..d {
            let (f, df) = horner(c, &z[k], w);
            if f.is_zero() {
                next.push(z[k].clone());
                continue;
            }
            let mut s = BigComplex::zero();
            for j in 0..d {
                if j != k {
                    let diff = z[k].sub(&z[j], w);
                    if !diff.is_zero() {
                        s = s.add(&one.div(&diff, w), w);
                    }
                }
            }
            let step = if df.is_zero() {
                // Stationary point: nudge by a fixed relative amount.
                z[k].scale(&BigFloat::from_f64(1e-3), w).add(&BigComplex::from_f64(1e-3, 1e-3), w)
            } else {
                let n = f.div(&df, w);
                let denom = one.sub(&n.mul(&s, w), w);
                if denom.is_zero() {
                    n
                } else {
                    n.div(&denom, w)
                }
            };
            let step_sq = step.norm_sqr(w);
            let z_sq = z[k].norm_sqr(w);
            let small = step_sq.is_zero()
                || (!z_sq.is_zero() && step_sq.log2_floor() < z_sq.log2_floor() - tol_bits)
                || (z_sq.is_zero() && step_sq.log2_floor() < -tol_bits);
            if !small {
                done = false;
            }
            next.push(z[k].sub(&step, w));
        }
        z = next;
        if done {
            return Some(
                z.into_iter()
                    .map(|value| {
                        let residual = relative_residual(c, &value, w);
                        Root { value, residual }
                    })
                    .collect(),
            );
        }
    }
    None
}

/// All complex roots of `f`, repeated by multiplicity, at the given
/// precision. `embed` maps exact coefficients to complex numbers.
pub fn roots_with<F: Scalar>(
    f: &[F],
    embed: impl Fn(&F, u32) -> BigComplex,
    prec: u32,
) -> Option<Vec<Root>> {
    let mut out = Vec::new();
    for (factor, mult) in poly::squarefree_decomposition(f) {
        let c: Vec<BigComplex> = factor.iter().map(|x| embed(x, prec + 32)).collect();
        let roots = aberth(&c, prec)?;
        for r in roots {
            for _ in 0..mult {
                out.push(r.clone());
            }
        }
    }
    Some(out)
}

pub fn embed_rational(r: &BigRational, prec: u32) -> BigComplex {
    BigComplex::from_real(BigFloat::from_rational(r, prec))
}

/// Roots of an integer polynomial at precision `prec`.
pub fn roots_of_zpoly(f: &ZPoly, prec: u32) -> Option<Vec<Root>> {
    roots_with(&f.to_rationals(), embed_rational, prec)
}

/// Roots of an integer polynomial, escalating through [`PRECISION_LADDER`]
/// until the iteration converges. Returns the precision used.
pub fn roots_of(f: &ZPoly) -> Option<(Vec<Root>, u32)> {
    PRECISION_LADDER.iter().find_map(|&p| roots_of_zpoly(f, p).map(|r| (r, p)))
}

/// Reciprocal roots `alpha` of `f = c * prod (1 - alpha t)`: the roots of the
/// reversed polynomial.
pub fn reciprocal_roots(f: &ZPoly, prec: u32) -> Option<Vec<Root>> {
    let rev = f.reversed(f.degree());
    roots_of_zpoly(&rev, prec)
}

/// Rounds the coefficients of `prod (1 - alpha t)` to integers.
pub fn integer_poly_from_reciprocal_roots(alphas: &[BigComplex], prec: u32) -> ZPoly {
    let mut coeffs: Vec<BigComplex> = alloc::vec![BigComplex::from_real(BigFloat::from_i64(1))];
    for a in alphas {
        let mut next = coeffs.clone();
        next.push(BigComplex::zero());
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].sub(&c.mul(a, prec), prec);
        }
        coeffs = next;
    }
    ZPoly::new(coeffs.iter().map(|c| c.re.round()).collect::<Vec<BigInt>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_quadratic_with_complex_pair() {
        // 1 - 2t + 5t^2: reciprocal roots 1 +- 2i, modulus sqrt 5.
        let f = ZPoly::from_i64(&[1, -2, 5]);
        let r = reciprocal_roots(&f, 128).unwrap();
        assert_eq!(r.len(), 2);
        for root in &r {
            assert!((root.modulus() - libm::sqrt(5.0)).abs() < 1e-12);
            assert!(root.residual < 1e-30);
        }
        let back = integer_poly_from_reciprocal_roots(
            &r.iter().map(|x| x.value.clone()).collect::<Vec<_>>(),
            128,
        );
        assert_eq!(back, f);
    }

    #[test]
    fn repeated_roots_via_squarefree_split() {
        // (1 - 3t)^3 (1 + t)
        let f = ZPoly::from_i64(&[1, -3])
            .mul(&ZPoly::from_i64(&[1, -3]))
            .mul(&ZPoly::from_i64(&[1, -3]))
            .mul(&ZPoly::from_i64(&[1, 1]));
        let mut moduli: Vec<f64> = reciprocal_roots(&f, 128).unwrap().iter().map(|r| r.modulus()).collect();
        moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((moduli[0] - 1.0).abs() < 1e-20);
        for m in &moduli[1..] {
            assert!((m - 3.0).abs() < 1e-20);
        }
    }

    #[test]
    fn higher_degree_matches_known_roots() {
        // t^6 - 1: sixth roots of unity.
        let f = ZPoly::from_i64(&[-1, 0, 0, 0, 0, 0, 1]);
        let (r, _) = roots_of(&f).unwrap();
        assert_eq!(r.len(), 6);
        for root in &r {
            assert!((root.modulus() - 1.0).abs() < 1e-25);
        }
    }
}
