use std::path::PathBuf;

use weillab_core::expsum::ExpSumError;
use weillab_core::geometry::GeometryError;
use weillab_core::modulartau::TauError;
use weillab_core::positivity::PositivityError;
use weillab_core::zetarec::ZetaError;
use weillab_core::FieldError;

/// Failures that stop a command before a verdict can be reached. Failed
/// mathematical checks are not errors; they are recorded in the report.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    ExpSum(#[from] ExpSumError),
    #[error(transparent)]
    Positivity(#[from] PositivityError),
    #[error(transparent)]
    Tau(#[from] TauError),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
