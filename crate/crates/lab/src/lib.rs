//! Experiment runner: configuration, the five studies, and report writing.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod report;

use thiserror::Error;

pub use config::{Experiment, ExperimentConfig};
pub use report::{Check, Outcome, Table};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] invgauss::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl LabError {
    /// 3 for configuration problems, 4 for capability limits, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        use invgauss::Error as E;
        match self {
            LabError::Config(_) | LabError::Core(E::Argument(_)) => 3,
            LabError::Core(E::Capability(_)) | LabError::Core(E::Integrability(_)) => 4,
            LabError::Core(E::Evaluation { .. }) | LabError::Core(E::Sampling(_)) => 2,
            LabError::Io(_) => 1,
        }
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;
