//! Exact zeta functions of varieties over finite fields.
//!
//! The crate counts points of polynomial systems over `F_{q^m}`, assembles the
//! zeta series `exp(sum N_m t^m / m)`, reconstructs it as a rational function
//! `P/Q` with integer coefficients and then checks the quantitative statements
//! that follow from the Weil conjectures: weight purity of the reciprocal
//! roots, the functional equation, Poincaré duality, the point-count bound for
//! complete intersections, the exponential-sum bound and the Ramanujan bound
//! for the discriminant form.
//!
//! Everything that can be decided in integer arithmetic is decided exactly.
//! Floating point (arbitrary precision, see [`bigfloat`]) is only used for
//! complex root moduli and is always reported together with its tolerance.
//!
//! The crate is `no_std` and only needs `alloc`. Threading, file formats and
//! the command line live in the `weillab` companion crate.

#![no_std]

extern crate alloc;

pub mod bigfloat;
pub mod cyclo;
pub mod expsum;
pub mod ffield;
pub mod geometry;
pub mod modulartau;
pub mod pade;
pub mod poly;
pub mod positivity;
pub mod roots;
pub mod weilverify;
pub mod zetarec;

pub use ffield::{FieldCtx, FieldError, PrimePower};
pub use geometry::{CountOptions, CountSeries, Model, MPoly, VarietySpec};
pub use zetarec::{PowerSeriesZ, ZetaFunction};

/// Default enumeration budget, in tuples visited per extension degree.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Default number of held-out coefficients used to validate a reconstruction.
pub const DEFAULT_HOLDOUT: usize = 2;
