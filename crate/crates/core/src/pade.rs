//! Padé reconstruction over an exact field via the extended Euclidean
//! algorithm on `(t^K, A mod t^K)`.
//!
//! Every intermediate pair `(r_i, u_i)` of the Euclidean remainder sequence
//! satisfies `u_i A = r_i (mod t^K)` and `deg u_i + deg r_i = K - drop_i`,
//! where `drop_i = deg r_{i-1} - deg r_i`. The rational function of smallest
//! total degree consistent with the first `K` coefficients is therefore the
//! candidate with the largest drop. A drop of one is what an arbitrary
//! sequence produces, so a fit is only accepted when the largest drop is at
//! least two and is attained exactly once.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::poly::{self, Scalar};

/// A rational function `num / den` with `den(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFit<F> {
    pub num: Vec<F>,
    pub den: Vec<F>,
    /// Number of leading coefficients the fit was computed from.
    pub terms_used: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PadeError {
    /// No candidate beats the generic remainder sequence; more terms needed.
    NoRationalFit { terms_used: usize },
    /// The fit disagrees with the held-out coefficient at `index`.
    HoldoutMismatch { index: usize },
}

impl fmt::Display for PadeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadeError::NoRationalFit { terms_used } => write!(
                f,
                "no rational function of low degree fits the first {terms_used} coefficients; supply more terms"
            ),
            PadeError::HoldoutMismatch { index } => write!(
                f,
                "reconstructed rational function mispredicts held-out coefficient {index}; supply more terms"
            ),
        }
    }
}

impl core::error::Error for PadeError {}

/// Minimal-degree rational function matching `series[0..k]`.
pub fn minimal_fit<F: Scalar>(series: &[F], k: usize) -> Result<RationalFit<F>, PadeError> {
    let no_fit = PadeError::NoRationalFit { terms_used: k };
    if k == 0 || series.len() < k {
        return Err(no_fit);
    }
    let zero = series[0].zero_like();
    let one = series[0].one_like();
    let mut r_prev: Vec<F> = vec![zero.clone(); k + 1];
    r_prev[k] = one.clone();
    let mut r_cur: Vec<F> = series[..k].to_vec();
    poly::trim(&mut r_cur);
    let mut u_prev: Vec<F> = Vec::new();
    let mut u_cur: Vec<F> = vec![one];

    let mut best: Option<(usize, Vec<F>, Vec<F>)> = None;
    let mut tied = false;
    while let Some(deg_cur) = poly::degree(&r_cur) {
        let deg_prev = poly::degree(&r_prev).expect("previous remainder is nonzero");
        let drop = deg_prev - deg_cur;
        match &best {
            Some((d, _, _)) if drop < *d => {}
            Some((d, _, _)) if drop == *d => tied = true,
            _ => {
                best = Some((drop, r_cur.clone(), u_cur.clone()));
                tied = false;
            }
        }
        let (quot, rem) = poly::divrem(&r_prev, &r_cur);
        let u_next = poly::sub(&u_prev, &poly::mul(&quot, &u_cur));
        r_prev = core::mem::replace(&mut r_cur, rem);
        u_prev = core::mem::replace(&mut u_cur, u_next);
    }
    let (drop, num, den) = best.ok_or(no_fit.clone())?;
    if drop < 2 || tied || den.is_empty() || den[0].is_zero() {
        return Err(no_fit);
    }
    let c = den[0].inv().expect("nonzero constant term");
    Ok(RationalFit { num: poly::scale(&num, &c), den: poly::scale(&den, &c), terms_used: k })
}

/// Fits on all but the last `holdout` coefficients and requires the fit to
/// predict the held-out ones exactly.
pub fn reconstruct<F: Scalar>(series: &[F], holdout: usize) -> Result<RationalFit<F>, PadeError> {
    let k = series.len().saturating_sub(holdout);
    let fit = minimal_fit(series, k)?;
    let predicted = poly::expand_ratio(&fit.num, &fit.den, series.len());
    if let Some(index) = (0..series.len()).find(|&i| predicted[i] != series[i]) {
        return Err(PadeError::HoldoutMismatch { index });
    }
    Ok(fit)
}
