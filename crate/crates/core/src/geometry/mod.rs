//! Polynomial systems over `F_q` and exact point counts over `F_{q^m}`.
//!
//! Counting goes through a [`plan::CountPlan`]: projective space is cut into
//! strata on which the first nonzero coordinate is 1, every stratum becomes
//! an affine problem, and each affine problem is simplified (free variables,
//! a separated variable counted through a value histogram) before anything is
//! enumerated. The plan's tuple count is compared against the budget up
//! front, so an oversized request fails before doing any work.

mod mpoly;
pub mod plan;
pub mod smooth;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

pub use mpoly::{MPoly, Term};
pub use plan::{plan_count, CountPlan, PreparedCount};
pub use smooth::{smoothness_probe, SmoothnessVerdict};

use crate::ffield::{FieldError, PrimePower};

pub use crate::ffield::projective_space_count;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Affine,
    Projective,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Affine => "affine",
            Model::Projective => "projective",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometryError {
    Field(FieldError),
    NoVariables,
    /// Polynomial `index` has an exponent vector of the wrong length.
    ArityMismatch { index: usize },
    /// Projective model with an inhomogeneous polynomial.
    NonHomogeneous { index: usize },
    /// The counting plan for degree `m` visits more tuples than allowed.
    BudgetExceeded { m: u32, planned: u128, budget: u64 },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::Field(e) => write!(f, "{e}"),
            GeometryError::NoVariables => write!(f, "a variety needs at least one variable"),
            GeometryError::ArityMismatch { index } => {
                write!(f, "polynomial {index}: exponent vector length differs from the number of variables")
            }
            GeometryError::NonHomogeneous { index } => {
                write!(f, "polynomial {index} is not homogeneous but the model is projective")
            }
            GeometryError::BudgetExceeded { m, planned, budget } => write!(
                f,
                "counting over the degree-{m} extension needs {planned} tuples, budget is {budget}"
            ),
        }
    }
}

impl core::error::Error for GeometryError {}

impl From<FieldError> for GeometryError {
    fn from(e: FieldError) -> Self {
        GeometryError::Field(e)
    }
}

/// A system of polynomials with `F_p` coefficients, viewed over `F_q`,
/// `q = p^a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    base: PrimePower,
    model: Model,
    vars: Vec<String>,
    polys: Vec<MPoly>,
    declared_dim: Option<u32>,
    declared_multidegree: Option<Vec<u32>>,
}

impl VarietySpec {
    pub fn new(
        base: PrimePower,
        model: Model,
        vars: Vec<String>,
        polys: Vec<MPoly>,
    ) -> Result<Self, GeometryError> {
        if vars.is_empty() {
            return Err(GeometryError::NoVariables);
        }
        for (index, f) in polys.iter().enumerate() {
            if f.num_vars() != vars.len() || f.p() != base.p() {
                return Err(GeometryError::ArityMismatch { index });
            }
            if model == Model::Projective && !f.is_homogeneous() {
                return Err(GeometryError::NonHomogeneous { index });
            }
        }
        Ok(VarietySpec { base, model, vars, polys, declared_dim: None, declared_multidegree: None })
    }

    pub fn with_dim(mut self, dim: u32) -> Self {
        self.declared_dim = Some(dim);
        self
    }

    pub fn with_multidegree(mut self, degrees: Vec<u32>) -> Self {
        self.declared_multidegree = Some(degrees);
        self
    }

    /// Whole affine or projective space with `num_vars` coordinates.
    pub fn full_space(base: PrimePower, model: Model, num_vars: usize) -> Self {
        let vars = (0..num_vars).map(|i| alloc::format!("x{i}")).collect();
        VarietySpec::new(base, model, vars, Vec::new()).expect("no polynomials to validate")
    }

    pub fn base(&self) -> PrimePower {
        self.base
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    pub fn declared_dim(&self) -> Option<u32> {
        self.declared_dim
    }

    pub fn declared_multidegree(&self) -> Option<&[u32]> {
        self.declared_multidegree.as_deref()
    }

    /// Largest total degree among the polynomials (0 if there are none).
    pub fn max_degree(&self) -> u32 {
        self.polys.iter().map(MPoly::total_degree).max().unwrap_or(0)
    }

    /// Disjoint-variable product `self x other` (affine models only).
    pub fn product(&self, other: &VarietySpec) -> VarietySpec {
        assert!(self.model == Model::Affine && other.model == Model::Affine);
        assert_eq!(self.base, other.base);
        let (n1, n2) = (self.num_vars(), other.num_vars());
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().map(|v| alloc::format!("{v}'")));
        let widen = |f: &MPoly, offset: usize| {
            let terms: Vec<(num_bigint::BigInt, Vec<u32>)> = f
                .terms()
                .iter()
                .map(|t| {
                    let mut e = alloc::vec![0u32; n1 + n2];
                    e[offset..offset + t.exps.len()].copy_from_slice(&t.exps);
                    (t.coeff.into(), e)
                })
                .collect();
            MPoly::from_integer_terms(f.p(), n1 + n2, &terms).expect("arity is consistent")
        };
        let polys = self
            .polys
            .iter()
            .map(|f| widen(f, 0))
            .chain(other.polys.iter().map(|f| widen(f, n1)))
            .collect();
        VarietySpec::new(self.base, Model::Affine, vars, polys).expect("valid product")
    }
}

/// Knobs shared by every counting entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    /// Maximal number of planned tuples per extension degree.
    pub budget: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { budget: crate::DEFAULT_BUDGET }
    }
}

/// `N_1, .., N_max` for one variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    pub q: PrimePower,
    /// Entry `m - 1` is the number of `F_{q^m}`-points.
    pub counts: Vec<BigUint>,
}

impl CountSeries {
    pub fn max_m(&self) -> usize {
        self.counts.len()
    }

    /// `N_m`, 1-based.
    pub fn get(&self, m: usize) -> &BigUint {
        &self.counts[m - 1]
    }
}

/// `#X(F_{q^m})`, single-threaded.
pub fn count_points(spec: &VarietySpec, m: u32, opts: &CountOptions) -> Result<BigUint, GeometryError> {
    let plan = plan_count(spec, m);
    let prepared = plan.prepare(opts.budget)?;
    let partials: Vec<u128> = (0..prepared.num_chunks()).map(|c| prepared.count_chunk(c)).collect();
    Ok(prepared.combine(&partials))
}

/// `N_1, .., N_max_m`; fails with the first degree whose plan is too large.
pub fn count_series(spec: &VarietySpec, max_m: u32, opts: &CountOptions) -> Result<CountSeries, GeometryError> {
    let counts = (1..=max_m).map(|m| count_points(spec, m, opts)).collect::<Result<_, _>>()?;
    Ok(CountSeries { q: spec.base(), counts })
}
