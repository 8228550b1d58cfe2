//! Sparse multivariate polynomials over `F_p`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::ffield::{FFElem, FieldCtx};

/// `coeff * prod x_i^{exps[i]}` with `coeff` a nonzero residue mod p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: u32,
    pub exps: Vec<u32>,
}

impl Term {
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }
}

/// Polynomial in `num_vars` variables with coefficients reduced mod `p`.
/// Terms are kept sorted by exponent vector, merged and nonzero, so equal
/// polynomials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    p: u32,
    num_vars: usize,
    terms: Vec<Term>,
}

impl MPoly {
    pub fn zero(p: u32, num_vars: usize) -> Self {
        MPoly { p, num_vars, terms: Vec::new() }
    }

    /// Builds from integer coefficients, reducing them mod `p`. Every
    /// exponent vector must have length `num_vars`.
    pub fn from_integer_terms(
        p: u32,
        num_vars: usize,
        terms: &[(BigInt, Vec<u32>)],
    ) -> Result<Self, usize> {
        let pb = BigInt::from(p);
        let mut out = Vec::with_capacity(terms.len());
        for (i, (c, e)) in terms.iter().enumerate() {
            if e.len() != num_vars {
                return Err(i);
            }
            let r = c.mod_floor(&pb).to_u32().expect("residue below p");
            out.push(Term { coeff: r, exps: e.clone() });
        }
        Ok(Self::normalize(p, num_vars, out))
    }

    /// Convenience constructor with small integer coefficients.
    pub fn from_terms(p: u32, num_vars: usize, terms: &[(i64, &[u32])]) -> Self {
        let t: Vec<(BigInt, Vec<u32>)> =
            terms.iter().map(|(c, e)| (BigInt::from(*c), e.to_vec())).collect();
        Self::from_integer_terms(p, num_vars, &t).expect("exponent vectors match num_vars")
    }

    fn normalize(p: u32, num_vars: usize, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| a.exps.cmp(&b.exps));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exps == t.exps => {
                    last.coeff = ((last.coeff as u64 + t.coeff as u64) % p as u64) as u32;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0);
        MPoly { p, num_vars, terms: merged }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant polynomial.
    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t0) => self.terms.iter().all(|t| t.degree() == t0.degree()),
        }
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.iter().any(|t| t.exps[v] > 0)
    }

    /// Formal partial derivative in variable `v`.
    pub fn derivative(&self, v: usize) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exps[v] > 0 && t.exps[v] % self.p != 0)
            .map(|t| {
                let mut exps = t.exps.clone();
                exps[v] -= 1;
                let c = (t.coeff as u64 * (t.exps[v] % self.p) as u64 % self.p as u64) as u32;
                Term { coeff: c, exps }
            })
            .collect();
        Self::normalize(self.p, self.num_vars, terms)
    }

    /// Fixes some variables: `assign[v]` is `Some(0)` or `Some(1)` to set a
    /// variable, `None` to keep it. Kept variables are renumbered in order.
    pub fn specialize_01(&self, assign: &[Option<u8>]) -> MPoly {
        let kept: Vec<usize> = (0..self.num_vars).filter(|&v| assign[v].is_none()).collect();
        let terms = self
            .terms
            .iter()
            .filter(|t| (0..self.num_vars).all(|v| assign[v] != Some(0) || t.exps[v] == 0))
            .map(|t| Term { coeff: t.coeff, exps: kept.iter().map(|&v| t.exps[v]).collect() })
            .collect();
        Self::normalize(self.p, kept.len(), terms)
    }

    /// Keeps only the listed variables (in the given order); every other
    /// variable must be absent from the polynomial.
    pub fn restrict_vars(&self, vars: &[usize]) -> MPoly {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: t.coeff, exps: vars.iter().map(|&v| t.exps[v]).collect() })
            .collect();
        Self::normalize(self.p, vars.len(), terms)
    }

    /// Evaluates at a point of `ctx^num_vars`; the field must have
    /// characteristic `p`.
    pub fn eval(&self, ctx: &FieldCtx, point: &[FFElem]) -> FFElem {
        let mut acc = ctx.zero();
        for t in &self.terms {
            let mut m = ctx.from_prime(t.coeff as u64);
            for (x, &e) in point.iter().zip(&t.exps) {
                if e > 0 {
                    m = ctx.mul(&m, &ctx.pow_u64(x, e as u64));
                }
            }
            acc = ctx.add(&acc, &m);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_merging() {
        let f = MPoly::from_terms(5, 2, &[(7, &[1, 0]), (-2, &[1, 0]), (3, &[0, 2])]);
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0], Term { coeff: 3, exps: alloc::vec![0, 2] });
        assert!(f.is_homogeneous());
    }

    #[test]
    fn derivative_drops_multiples_of_p() {
        // x^5 + 2 x^2 y over F_5: d/dx = 4 x y.
        let f = MPoly::from_terms(5, 2, &[(1, &[5, 0]), (2, &[2, 1])]);
        let dx = f.derivative(0);
        assert_eq!(dx, MPoly::from_terms(5, 2, &[(4, &[1, 1])]));
    }

    #[test]
    fn specialization() {
        // y^2 z - x^3 - x z^2 at z = 1, x kept, y kept.
        let f = MPoly::from_terms(5, 3, &[(1, &[0, 2, 1]), (-1, &[3, 0, 0]), (-1, &[1, 0, 2])]);
        let g = f.specialize_01(&[None, None, Some(1)]);
        assert_eq!(g, MPoly::from_terms(5, 2, &[(1, &[0, 2]), (-1, &[3, 0]), (-1, &[1, 0])]));
        let h = f.specialize_01(&[None, Some(1), Some(0)]);
        assert_eq!(h, MPoly::from_terms(5, 1, &[(-1, &[3])]));
    }
}
