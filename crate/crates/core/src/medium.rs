//! Probe propagation quantities in SI units.
//!
//! ξ₁₄ = κ₁₄ ρ̃₁₄ / Ω₁₄ and ξ₂₄ = κ₂₄ ρ̃₂₄ e^{iΦ₀} / Ω₂₄ with κ = μ₀N|M|²c²/ħ,
//! and α = Im(ξ) ω/c, positive for gain.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liouville::OpticalCoherences;
use crate::model::ValidatedConfig;

pub const MU0: f64 = 1.256_637_062_12e-6;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const C_LIGHT: f64 = 299_792_458.0;

/// Default residual tolerance (rad/m) for the phase-matching check.
pub const PHASE_MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MediumError {
    #[error("probe {0} has zero Rabi frequency; susceptibility undefined")]
    ZeroProbe(&'static str),
    #[error("invalid medium parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("cannot calibrate: mean raw gain {0:e} m^-1 is not positive")]
    NonPositiveGain(f64),
}

/// Phase factor applied to ρ̃₂₄ before forming ξ₂₄.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Xi24Phase {
    /// e^{+iΦ₀}: the 2–4 field measured against its own rotating-frame phase.
    #[default]
    Loop,
    /// e^{−iΦ₀}; kept for comparison studies.
    Conjugate,
}

impl Xi24Phase {
    pub fn factor(self, phi0: f64) -> Complex64 {
        match self {
            Xi24Phase::Loop => Complex64::from_polar(1.0, phi0),
            Xi24Phase::Conjugate => Complex64::from_polar(1.0, -phi0),
        }
    }
}

/// Atomic density and per-atom couplings μ₀|M|²c²/ħ (m³/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    pub density: f64,
    pub coupling14: f64,
    pub coupling24: f64,
    #[serde(default)]
    pub xi24_phase: Xi24Phase,
}

pub fn coupling_from_dipole(dipole: f64) -> f64 {
    MU0 * dipole * dipole * C_LIGHT * C_LIGHT / HBAR
}

impl MediumParams {
    pub fn from_dipoles(density: f64, dipole14: f64, dipole24: f64) -> Self {
        Self {
            density,
            coupling14: coupling_from_dipole(dipole14),
            coupling24: coupling_from_dipole(dipole24),
            xi24_phase: Xi24Phase::Loop,
        }
    }

    pub fn from_common_prefactor(density: f64, coupling: f64) -> Self {
        Self { density, coupling14: coupling, coupling24: coupling, xi24_phase: Xi24Phase::Loop }
    }

    pub fn with_xi24_phase(mut self, phase: Xi24Phase) -> Self {
        self.xi24_phase = phase;
        self
    }

    pub fn validate(&self) -> Result<(), MediumError> {
        if !(self.density > 0.0 && self.density.is_finite()) {
            return Err(MediumError::InvalidParameter { name: "density", value: self.density });
        }
        for (name, value) in [("coupling14", self.coupling14), ("coupling24", self.coupling24)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(MediumError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    /// κ₁₄ = N μ₀|M₁₄|²c²/ħ.
    pub fn kappa14(&self) -> f64 {
        self.density * self.coupling14
    }

    pub fn kappa24(&self) -> f64 {
        self.density * self.coupling24
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediumResponse {
    pub xi14: Complex64,
    pub xi24: Complex64,
    /// m⁻¹, positive for gain.
    pub alpha14: f64,
    pub alpha24: f64,
    /// Probe angular frequencies (rad/s).
    pub omega14: f64,
    pub omega24: f64,
}

impl MediumResponse {
    pub fn mean_gain(&self) -> f64 {
        0.5 * (self.alpha14 + self.alpha24)
    }
}

/// Laser angular frequencies (ω₁₃, ω₂₃, ω₁₄, ω₂₄) in rad/s.
pub fn laser_frequencies(cfg: &ValidatedConfig) -> [f64; 4] {
    let lv = cfg.levels();
    let k = cfg.config();
    let [e1, e2, e3, e4] = lv.omega;
    [
        e3 - e1 + lv.to_si(k.d13.detuning),
        e3 - e2 + lv.to_si(k.d23.detuning),
        e4 - e1 + lv.to_si(k.d14.detuning),
        e4 - e2 + lv.to_si(k.d24.detuning),
    ]
}

pub fn susceptibility(
    cfg: &ValidatedConfig,
    coherences: &OpticalCoherences,
    medium: &MediumParams,
) -> Result<MediumResponse, MediumError> {
    medium.validate()?;
    let k = cfg.config();
    if k.d14.rabi == 0.0 {
        return Err(MediumError::ZeroProbe("1-4"));
    }
    if k.d24.rabi == 0.0 {
        return Err(MediumError::ZeroProbe("2-4"));
    }
    let lv = cfg.levels();
    let xi14 = coherences.r14 * (medium.kappa14() / lv.to_si(k.d14.rabi));
    let xi24 = coherences.r24 * medium.xi24_phase.factor(cfg.closed_loop_phase())
        * (medium.kappa24() / lv.to_si(k.d24.rabi));
    let [_, _, omega14, omega24] = laser_frequencies(cfg);
    Ok(MediumResponse {
        xi14,
        xi24,
        alpha14: xi14.im * omega14 / C_LIGHT,
        alpha24: xi24.im * omega24 / C_LIGHT,
        omega14,
        omega24,
    })
}

/// k = (ω/c)(1 + ξ) for both probes.
pub fn modified_wavevectors(response: &MediumResponse) -> (Complex64, Complex64) {
    (
        (response.xi14 + 1.0) * (response.omega14 / C_LIGHT),
        (response.xi24 + 1.0) * (response.omega24 / C_LIGHT),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseMatching {
    pub residual: f64,
    pub matched: bool,
}

/// |(k₂₄ − k₁₄) − (k₂₃ − k₁₃)| against `tol` (rad/m).
pub fn phase_matching_check(k13: f64, k23: f64, k14: f64, k24: f64, tol: f64) -> PhaseMatching {
    let residual = ((k24 - k14) - (k23 - k13)).abs();
    PhaseMatching { residual, matched: residual <= tol }
}

/// ω₁₄ξ₁₄ − ω₂₄ξ₂₄; its imaginary part vanishes at an equal-gain point.
pub fn self_consistency_check(response: &MediumResponse) -> Complex64 {
    response.xi14 * response.omega14 - response.xi24 * response.omega24
}

/// Chooses one common per-atom coupling so that the mean of α₁₄ and α₂₄ at
/// the given coherences equals `target` (m⁻¹).
pub fn calibrate_common_prefactor(
    cfg: &ValidatedConfig,
    coherences: &OpticalCoherences,
    density: f64,
    target: f64,
    phase: Xi24Phase,
) -> Result<MediumParams, MediumError> {
    let unit = MediumParams::from_common_prefactor(density, 1.0).with_xi24_phase(phase);
    let raw = susceptibility(cfg, coherences, &unit)?.mean_gain();
    if !(raw > 0.0) {
        return Err(MediumError::NonPositiveGain(raw));
    }
    Ok(MediumParams::from_common_prefactor(density, target / raw).with_xi24_phase(phase))
}
