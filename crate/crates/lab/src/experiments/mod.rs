//! The five studies. Each returns an [`Outcome`]; tables depend only on the
//! configuration and seed.

mod bounds;
mod gfun;
mod spectral;
mod teuwen;
mod weak;

use invgauss::spectral::Semigroup;

use crate::config::{Experiment, ExperimentConfig};
use crate::report::Outcome;
use crate::{LabError, LabResult};

pub fn run(experiment: Experiment, config: &ExperimentConfig) -> LabResult<Outcome> {
    config.validate(experiment)?;
    match experiment {
        Experiment::TeuwenVerify => teuwen::run(&config.teuwen, config.seed),
        Experiment::GfunConstants => gfun::run(&config.gfun, config.seed),
        Experiment::Weak11Growth => weak::run(&config.weak),
        Experiment::BoundSample => bounds::run(&config.bounds, config.seed),
        Experiment::SpectralIdentities => spectral::run(&config.spectral, config.seed),
    }
}

pub fn parse_semigroup(name: &str) -> LabResult<Semigroup> {
    serde_json::from_value(serde_json::Value::String(name.to_string()))
        .map_err(|_| LabError::Config(format!("unknown semigroup {name:?}")))
}

/// Per-case seed derived from the run seed.
pub(crate) fn case_seed(seed: u64, case: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(case)
}
