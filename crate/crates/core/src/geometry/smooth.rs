//! Search for singular points with the Jacobian criterion.
//!
//! A point of `X(F_{q^m})` is reported singular when the Jacobian matrix of
//! the `r` nonzero defining polynomials has rank below `r` there. For a
//! projective hypersurface whose degree is divisible by `p` the Euler relation
//! no longer ties the partials to the polynomial; both are checked anyway.
//! Finding no singular point over small extensions is evidence, not proof.

use alloc::vec::Vec;

use super::{GeometryError, MPoly, Model, VarietySpec};
use crate::ffield::{FFElem, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothnessVerdict {
    NoSingularPointFound { searched_up_to: u32 },
    /// A point where the Jacobian drops rank, over `F_{q^m}`. Projective
    /// witnesses are normalized with first nonzero coordinate 1.
    SingularPoint { m: u32, point: Vec<FFElem> },
}

impl SmoothnessVerdict {
    pub fn is_singular(&self) -> bool {
        matches!(self, SmoothnessVerdict::SingularPoint { .. })
    }
}

fn rank(ctx: &FieldCtx, mut rows: Vec<Vec<FFElem>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = ctx.inv(&rows[rank][c]).expect("pivot is nonzero");
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = ctx.mul(&rows[r][c], &inv);
                for k in c..cols {
                    let t = ctx.mul(&factor, &rows[rank][k]);
                    rows[r][k] = ctx.sub(&rows[r][k], &t);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn is_singular_at(ctx: &FieldCtx, polys: &[MPoly], jac: &[Vec<MPoly>], point: &[FFElem]) -> bool {
    if !polys.iter().all(|f| f.eval(ctx, point).is_zero()) {
        return false;
    }
    let rows: Vec<Vec<FFElem>> =
        jac.iter().map(|row| row.iter().map(|d| d.eval(ctx, point)).collect()).collect();
    rank(ctx, rows) < polys.len()
}

/// Looks for a singular point over `F_{q^m}` for `m = 1..=max_m`, visiting
/// at most `budget` points per degree.
pub fn smoothness_probe(spec: &VarietySpec, max_m: u32, budget: u64) -> Result<SmoothnessVerdict, GeometryError> {
    let polys: Vec<MPoly> = spec.polys().iter().filter(|f| !f.is_zero()).cloned().collect();
    let n = spec.num_vars();
    let jac: Vec<Vec<MPoly>> = polys.iter().map(|f| (0..n).map(|v| f.derivative(v)).collect()).collect();
    for m in 1..=max_m {
        let ext = spec.base().extend(m);
        let q = ext.q_u64().map(u128::from).unwrap_or(u128::MAX);
        let pow = |e: usize| (0..e).fold(1u128, |a, _| a.saturating_mul(q));
        let planned = match spec.model() {
            Model::Affine => pow(n),
            Model::Projective => (0..n).fold(0u128, |a, i| a.saturating_add(pow(i))),
        };
        if planned > budget as u128 {
            return Err(GeometryError::BudgetExceeded { m, planned, budget });
        }
        if polys.is_empty() {
            continue;
        }
        let ctx = FieldCtx::new(ext.p() as u64, ext.k())?;
        let q = q as u64;
        let strata: Vec<(usize, Option<usize>)> = match spec.model() {
            Model::Affine => alloc::vec![(0, None)],
            Model::Projective => (0..n).map(|j| (j + 1, Some(j))).collect(),
        };
        for (first_free, one_at) in strata {
            let width = n - first_free;
            let mut point: Vec<FFElem> = (0..n).map(|_| ctx.zero()).collect();
            if let Some(j) = one_at {
                point[j] = ctx.one();
            }
            let total = pow(width);
            for idx in 0..total {
                let mut rest = idx;
                for v in (first_free..n).rev() {
                    point[v] = ctx.element_at((rest % q as u128) as u64);
                    rest /= q as u128;
                }
                if is_singular_at(&ctx, &polys, &jac, &point) {
                    return Ok(SmoothnessVerdict::SingularPoint { m, point });
                }
            }
        }
    }
    Ok(SmoothnessVerdict::NoSingularPointFound { searched_up_to: max_m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::PrimePower;
    use alloc::string::ToString;

    fn plane(p: u64, f: MPoly) -> VarietySpec {
        let vars = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        VarietySpec::new(PrimePower::new(p, 1).unwrap(), Model::Projective, vars, alloc::vec![f]).unwrap()
    }

    #[test]
    fn smooth_conic_has_no_singular_point() {
        let f = MPoly::from_terms(7, 3, &[(1, &[2, 0, 0]), (1, &[0, 2, 0]), (-1, &[0, 0, 2])]);
        let v = smoothness_probe(&plane(7, f), 2, 1_000_000).unwrap();
        assert_eq!(v, SmoothnessVerdict::NoSingularPointFound { searched_up_to: 2 });
    }

    #[test]
    fn nodal_cubic_is_singular_at_origin() {
        // y^2 z - x^3 - x^2 z
        let f = MPoly::from_terms(5, 3, &[(1, &[0, 2, 1]), (-1, &[3, 0, 0]), (-1, &[2, 0, 1])]);
        let v = smoothness_probe(&plane(5, f), 1, 1_000_000).unwrap();
        let SmoothnessVerdict::SingularPoint { m, point } = v else { panic!("expected a node") };
        assert_eq!(m, 1);
        let coords: Vec<&[u32]> = point.iter().map(|e| e.coeffs()).collect();
        assert_eq!(coords, [&[0u32][..], &[0], &[1]]);
    }

    #[test]
    fn probe_respects_budget() {
        let f = MPoly::from_terms(5, 3, &[(1, &[0, 2, 1]), (-1, &[3, 0, 0])]);
        assert!(matches!(
            smoothness_probe(&plane(5, f), 3, 10),
            Err(GeometryError::BudgetExceeded { m: 1, .. })
        ));
    }
}
