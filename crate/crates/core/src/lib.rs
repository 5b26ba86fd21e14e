//! Steady states, gains and lasing conditions of a double-Λ four-level atom
//! driven by two strong pumps and two weak probes.
//!
//! Units: ħ = 1, rates and frequencies in units of Γ₃ unless a name ends in `_si`.
//! Levels are labelled 1..4 in documentation and indexed 0..3 in matrices.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adiabatic;
pub mod cavity;
pub mod config;
pub mod density;
pub mod effective;
pub mod engine;
pub mod liouville;
pub mod medium;
pub mod model;
pub mod presets;
pub mod sweep;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Liouville(#[from] liouville::LiouvilleError),
    #[error(transparent)]
    Effective(#[from] effective::EffectiveError),
    #[error(transparent)]
    Medium(#[from] medium::MediumError),
    #[error(transparent)]
    Cavity(#[from] cavity::CavityError),
    #[error(transparent)]
    Sweep(#[from] sweep::SweepError),
}

impl Error {
    /// True when the input was at fault rather than the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Model(_)
                | Error::Config(_)
                | Error::Sweep(_)
                | Error::Medium(medium::MediumError::InvalidParameter { .. })
                | Error::Cavity(cavity::CavityError::InvalidSpec(_))
        )
    }
}

pub use config::{load_scenario, parse_scenario, Scenario};
pub use engine::{solve_point, Engine, PointSolution};
pub use model::{validate_config, DoubleLambdaConfig, ValidatedConfig};
