//! Flat `key = value` scenario files.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cavity::{CavityError, CavitySpec};
use crate::liouville::{DecayModel, LiouvilleError};
use crate::medium::{MediumError, MediumParams, Xi24Phase};
use crate::model::{validate_config, AtomLevels, DoubleLambdaConfig, DriveField, ModelError, ValidatedConfig};

pub const SCHEMA: &str = "\
Scenario file: flat `key = value` lines (TOML syntax, `#` comments).
Rates, Rabi frequencies and detunings are in units of Γ₃ unless the key ends in _hz or _si.

  atom
    gamma3               Γ₃ in the file's rate unit (default 1)
    gamma4               Γ₄ (default 1.05)
    gamma3_hz            Γ₃/2π in Hz (default 5.746e6)
    ground_splitting_hz  (E₂ − E₁)/2πħ (default 6.834682610904e9)
    transition13_hz      (E₃ − E₁)/2πħ (default 377.107463380e12)
    transition14_hz      (E₄ − E₁)/2πħ (default 384.2304844685e12)
  drives (mn = 13, 23, 14, 24)
    omegamn_rabi         Rabi frequency Ω_mn ≥ 0 (default 0)
    deltamn              detuning δ_mn = ω_laser − ω_atom (default 0)
    phi0_mn              constant phase φ⁰_mn in rad (default 0)
    kmn_si               wavevector in rad/m (optional)
    closed_loop_phase    sets φ⁰₂₄ so that Φ₀ has this value (optional, excludes phi0_24)
  decay
    ground_decoherence   |1⟩–|2⟩ dephasing rate (default 0)
    branching3           fraction of Γ₃ into |1⟩ (default 0.5)
    branching4           fraction of Γ₄ into |1⟩ (default 0.5)
  medium (optional; enabled by density_si)
    density_si           atomic density N in m^-3
    dipole14_si          |M₁₄| in C·m
    dipole24_si          |M₂₄| in C·m
    coupling_prefactor_si  common μ₀|M|²c²/ħ per atom in m³/s (instead of dipoles)
    xi24_phase           \"loop\" (default) or \"conjugate\"
  cavity (optional; enabled by transmittivity)
    transmittivity       output coupler T in [0, 1)
    mode_index           m ≥ 1 (default 1)
";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed scenario file: {0}")]
    Parse(String),
    #[error("{key}: {msg}")]
    Invalid { key: &'static str, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Decay(#[from] LiouvilleError),
    #[error(transparent)]
    Medium(#[from] MediumError),
    #[error(transparent)]
    Cavity(#[from] CavityError),
}

/// The file as written, before any derived quantity is filled in.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub gamma3: Option<f64>,
    pub gamma4: Option<f64>,
    pub gamma3_hz: Option<f64>,
    pub ground_splitting_hz: Option<f64>,
    pub transition13_hz: Option<f64>,
    pub transition14_hz: Option<f64>,

    pub omega13_rabi: Option<f64>,
    pub omega23_rabi: Option<f64>,
    pub omega14_rabi: Option<f64>,
    pub omega24_rabi: Option<f64>,
    pub delta13: Option<f64>,
    pub delta23: Option<f64>,
    pub delta14: Option<f64>,
    pub delta24: Option<f64>,
    pub phi0_13: Option<f64>,
    pub phi0_23: Option<f64>,
    pub phi0_14: Option<f64>,
    pub phi0_24: Option<f64>,
    pub k13_si: Option<f64>,
    pub k23_si: Option<f64>,
    pub k14_si: Option<f64>,
    pub k24_si: Option<f64>,
    pub closed_loop_phase: Option<f64>,

    pub ground_decoherence: Option<f64>,
    pub branching3: Option<f64>,
    pub branching4: Option<f64>,

    pub density_si: Option<f64>,
    pub dipole14_si: Option<f64>,
    pub dipole24_si: Option<f64>,
    pub coupling_prefactor_si: Option<f64>,
    pub xi24_phase: Option<Xi24Phase>,

    pub transmittivity: Option<f64>,
    pub mode_index: Option<u32>,
}

/// A complete, validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub config: ValidatedConfig,
    pub decay: DecayModel,
    pub medium: Option<MediumParams>,
    pub cavity: Option<CavitySpec>,
}

impl Scenario {
    pub fn new(config: ValidatedConfig) -> Self {
        Self { config, decay: DecayModel::default(), medium: None, cavity: None }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ConfigError> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    file.build()
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_scenario(&text)
}

impl ScenarioFile {
    pub fn build(&self) -> Result<Scenario, ConfigError> {
        let gamma3 = self.gamma3.unwrap_or(1.0);
        let gamma3_hz = self.gamma3_hz.unwrap_or(5.746e6);
        let levels = AtomLevels {
            omega: [
                0.0,
                TAU * self.ground_splitting_hz.unwrap_or(6.834_682_610_904e9),
                TAU * self.transition13_hz.unwrap_or(377.107_463_380e12),
                TAU * self.transition14_hz.unwrap_or(384.230_484_468_5e12),
            ],
            gamma3,
            gamma4: self.gamma4.unwrap_or(1.05),
            gamma3_si: TAU * gamma3_hz,
        };
        let drive = |rabi: Option<f64>, delta: Option<f64>, phase: Option<f64>, k: Option<f64>| DriveField {
            rabi: rabi.unwrap_or(0.0),
            detuning: delta.unwrap_or(0.0),
            phase0: phase.unwrap_or(0.0),
            wavevector: k,
        };
        let mut raw = DoubleLambdaConfig {
            levels,
            d13: drive(self.omega13_rabi, self.delta13, self.phi0_13, self.k13_si),
            d23: drive(self.omega23_rabi, self.delta23, self.phi0_23, self.k23_si),
            d14: drive(self.omega14_rabi, self.delta14, self.phi0_14, self.k14_si),
            d24: drive(self.omega24_rabi, self.delta24, self.phi0_24, self.k24_si),
            ground_decoherence: self.ground_decoherence.unwrap_or(0.0),
        };
        if let Some(phi) = self.closed_loop_phase {
            if self.phi0_24.is_some() {
                return Err(ConfigError::Invalid {
                    key: "closed_loop_phase",
                    msg: "cannot be combined with phi0_24".into(),
                });
            }
            raw = raw.with_closed_loop_phase(phi);
        }
        let config = validate_config(raw)?;

        let decay = DecayModel {
            branching3: self.branching3.unwrap_or(0.5),
            branching4: self.branching4.unwrap_or(0.5),
        };
        decay.validate()?;

        let medium = match self.density_si {
            None => {
                if self.dipole14_si.is_some() || self.dipole24_si.is_some() || self.coupling_prefactor_si.is_some() {
                    return Err(ConfigError::Invalid { key: "density_si", msg: "required when medium keys are set".into() });
                }
                None
            }
            Some(density) => {
                let m = match (self.dipole14_si, self.dipole24_si, self.coupling_prefactor_si) {
                    (Some(d14), Some(d24), None) => MediumParams::from_dipoles(density, d14, d24),
                    (None, None, Some(k)) => MediumParams::from_common_prefactor(density, k),
                    (None, None, None) => MediumParams::from_common_prefactor(density, 1.0),
                    _ => {
                        return Err(ConfigError::Invalid {
                            key: "dipole14_si",
                            msg: "give both dipole14_si and dipole24_si, or coupling_prefactor_si alone".into(),
                        })
                    }
                }
                .with_xi24_phase(self.xi24_phase.unwrap_or_default());
                m.validate()?;
                Some(m)
            }
        };

        let cavity = match (self.transmittivity, self.mode_index) {
            (None, None) => None,
            (None, Some(_)) => {
                return Err(ConfigError::Invalid { key: "transmittivity", msg: "required when mode_index is set".into() })
            }
            (Some(t), m) => Some(CavitySpec::new(config.levels().ground_splitting(), m.unwrap_or(1), t)?),
        };

        Ok(Scenario { config, decay, medium, cavity })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::closed_loop_phase;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_file_gives_defaults() {
        let s = parse_scenario("").unwrap();
        assert_eq!(s.decay, DecayModel::default());
        assert!(s.medium.is_none() && s.cavity.is_none());
        assert_eq!(s.config.levels().gamma4, 1.05);
    }

    #[test]
    fn full_file() {
        let s = parse_scenario(
            "omega13_rabi = 10\nomega23_rabi = 7\nomega14_rabi = 0.2\nomega24_rabi = 0.5\n\
             delta13 = 1\ndelta23 = 1\ndelta14 = 20\ndelta24 = 20\nclosed_loop_phase = 1.5\n\
             density_si = 1e15\ndipole14_si = 3.584e-29\ndipole24_si = 3.584e-29\n\
             transmittivity = 0.16\nmode_index = 2\nbranching3 = 0.3\n",
        )
        .unwrap();
        assert_abs_diff_eq!(closed_loop_phase(&s.config), 1.5, epsilon = 1e-15);
        assert_eq!(s.config.delta4, 20.0);
        assert_eq!(s.decay.branching3, 0.3);
        assert_eq!(s.cavity.unwrap().mode_index, 2);
        assert!(s.medium.unwrap().coupling14 > 0.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_scenario("nonsense_key = 1"), Err(ConfigError::Parse(_))));
        assert!(matches!(parse_scenario("omega13_rabi = \"x\""), Err(ConfigError::Parse(_))));
        assert!(matches!(
            parse_scenario("delta13 = 1"),
            Err(ConfigError::Model(ModelError::NonMatchingTwoPhotonDetuning { .. }))
        ));
        assert!(matches!(parse_scenario("omega14_rabi = -1"), Err(ConfigError::Model(ModelError::NegativeRate { .. }))));
        assert!(matches!(parse_scenario("phi0_24 = 1\nclosed_loop_phase = 2"), Err(ConfigError::Invalid { .. })));
        assert!(matches!(parse_scenario("dipole14_si = 1e-29"), Err(ConfigError::Invalid { .. })));
        assert!(matches!(parse_scenario("mode_index = 1"), Err(ConfigError::Invalid { .. })));
        assert!(matches!(parse_scenario("branching4 = 2"), Err(ConfigError::Decay(_))));
        assert!(matches!(parse_scenario("transmittivity = 1.5"), Err(ConfigError::Cavity(_))));
    }
}
