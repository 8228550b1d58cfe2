//! Command-line front end for `weillab-core`: file formats, parallel
//! drivers, the verification batteries and their JSON reports.

pub mod cli;
pub mod error;
pub mod json;
pub mod parallel;
pub mod pipeline;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use report::{Check, Mode, Report, Verdict};
