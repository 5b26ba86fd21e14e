//! Ring-cavity design around an equal-gain operating point.

use std::f64::consts::TAU;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{solve_point, Engine};
use crate::liouville::DecayModel;
use crate::medium::{laser_frequencies, susceptibility, MediumParams, MediumResponse, C_LIGHT};
use crate::model::{closed_loop_phase, validate_config, DoubleLambdaConfig, ValidatedConfig};
use crate::Error as CrateError;

#[derive(Debug, Error)]
pub enum CavityError {
    #[error("invalid cavity: {0}")]
    InvalidSpec(String),
    #[error("α₁₄ − α₂₄ never changes sign (sampled range [{min:e}, {max:e}] m^-1)")]
    NoCrossings { min: f64, max: f64 },
    #[error("no gain or absorption anywhere on the Φ₀ grid (max |α| = {0:e} m^-1)")]
    NoGain(f64),
    #[error("evaluation at Φ₀ = {phi0}: {source}")]
    Evaluation { phi0: f64, source: Box<CrateError> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavitySpec {
    /// Ground splitting E₂ − E₁ as an angular frequency (rad/s).
    pub splitting: f64,
    pub mode_index: u32,
    pub transmittivity: f64,
    /// L_c in metres.
    pub length: f64,
}

impl CavitySpec {
    pub fn new(splitting: f64, mode_index: u32, transmittivity: f64) -> Result<Self, CavityError> {
        if !(splitting > 0.0 && splitting.is_finite()) {
            return Err(CavityError::InvalidSpec(format!("splitting must be positive, got {splitting}")));
        }
        if mode_index == 0 {
            return Err(CavityError::InvalidSpec("mode index must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&transmittivity) {
            return Err(CavityError::InvalidSpec(format!("transmittivity must lie in [0, 1), got {transmittivity}")));
        }
        Ok(Self { splitting, mode_index, transmittivity, length: cavity_length(splitting, mode_index) })
    }
}

/// L_c = 2πmc / (E₂ − E₁), splitting in rad/s.
pub fn cavity_length(splitting: f64, mode_index: u32) -> f64 {
    TAU * f64::from(mode_index) * C_LIGHT / splitting
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    /// α at which gain balances output coupling, T/(2L_c) (m⁻¹).
    pub alpha: f64,
    /// α·L_c at threshold, T/2.
    pub per_pass: f64,
}

pub fn threshold_gain(spec: &CavitySpec) -> Threshold {
    Threshold { alpha: spec.transmittivity / (2.0 * spec.length), per_pass: spec.transmittivity / 2.0 }
}

/// Everything needed to evaluate α₁₄(Φ₀), α₂₄(Φ₀).
#[derive(Debug, Clone)]
pub struct GainModel {
    pub base: ValidatedConfig,
    pub decay: DecayModel,
    pub medium: MediumParams,
    pub engine: Engine,
}

impl GainModel {
    pub fn config_at(&self, phi0: f64) -> Result<ValidatedConfig, CrateError> {
        Ok(validate_config(self.base.config().clone().with_closed_loop_phase(phi0))?)
    }

    pub fn response_at(&self, phi0: f64) -> Result<MediumResponse, CrateError> {
        let cfg = self.config_at(phi0)?;
        let sol = solve_point(&cfg, &self.decay, self.engine)?;
        Ok(susceptibility(&cfg, &sol.coherences, &self.medium)?)
    }

    fn mismatch(&self, phi0: f64) -> Result<f64, CavityError> {
        self.response_at(phi0)
            .map(|r| r.alpha14 - r.alpha24)
            .map_err(|e| CavityError::Evaluation { phi0, source: Box::new(e) })
    }

    pub fn with_probe_detuning(&self, delta4: f64) -> Result<Self, CrateError> {
        let base = validate_config(self.base.config().clone().with_probe_detuning(delta4))?;
        Ok(Self { base, ..self.clone() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchSettings {
    pub samples: usize,
    pub phi_lo: f64,
    pub phi_hi: f64,
    /// Convergence in g = α₁₄ − α₂₄ (m⁻¹).
    pub g_tol: f64,
    /// Convergence in Φ₀ (rad).
    pub phi_tol: f64,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self { samples: 720, phi_lo: 0.0, phi_hi: TAU, g_tol: 1e-6, phi_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LasingPoint {
    pub phi0: f64,
    /// Probe common detuning in rad/s.
    pub delta4: f64,
    pub alpha14: f64,
    pub alpha24: f64,
    /// Common gain (α₁₄ + α₂₄)/2 (m⁻¹).
    pub gain: f64,
    pub margin: f64,
    pub per_pass: f64,
    pub pump_context: DoubleLambdaConfig,
}

fn bisect(model: &GainModel, mut a: f64, mut ga: f64, mut b: f64, settings: &SearchSettings) -> Result<f64, CavityError> {
    let mut best = (a, ga);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let gm = model.mismatch(mid)?;
        if gm.abs() < best.1.abs() {
            best = (mid, gm);
        }
        if gm == 0.0 || (gm.abs() <= settings.g_tol && (b - a) <= settings.phi_tol) {
            return Ok(mid);
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
        if b - a <= f64::EPSILON * b.abs().max(1.0) {
            break;
        }
    }
    Ok(best.0)
}

/// All roots of α₁₄(Φ₀) − α₂₄(Φ₀) on the configured Φ₀ range at probe detuning `delta4` (Γ₃ units).
pub fn find_equal_gain_points(
    model: &GainModel,
    delta4: f64,
    settings: &SearchSettings,
    cavity: &CavitySpec,
) -> Result<Vec<LasingPoint>, CavityError> {
    let model = model.with_probe_detuning(delta4).map_err(|e| CavityError::Evaluation { phi0: f64::NAN, source: Box::new(e) })?;
    let n = settings.samples.max(2);
    let span = settings.phi_hi - settings.phi_lo;
    let periodic = (span - TAU).abs() < 1e-12;
    let count = if periodic { n } else { n + 1 };
    let grid: Vec<f64> = (0..count).map(|i| settings.phi_lo + span * i as f64 / n as f64).collect();

    let responses: Vec<(f64, MediumResponse)> = grid
        .par_iter()
        .map(|&phi| {
            model
                .response_at(phi)
                .map(|r| (phi, r))
                .map_err(|e| CavityError::Evaluation { phi0: phi, source: Box::new(e) })
        })
        .collect::<Result<_, _>>()?;

    let max_alpha = responses.iter().map(|(_, r)| r.alpha14.abs().max(r.alpha24.abs())).fold(0.0, f64::max);
    if max_alpha <= settings.g_tol {
        return Err(CavityError::NoGain(max_alpha));
    }

    let g: Vec<f64> = responses.iter().map(|(_, r)| r.alpha14 - r.alpha24).collect();
    let sign = |x: f64| if x.abs() <= settings.g_tol { 0 } else if x > 0.0 { 1 } else { -1 };

    let mut roots = Vec::new();
    let mut i = 0;
    while i < count {
        if sign(g[i]) == 0 {
            // a run of grid points inside the tolerance band counts once
            let mut j = i;
            let mut best = i;
            while j + 1 < count && sign(g[j + 1]) == 0 {
                j += 1;
                if g[j].abs() < g[best].abs() {
                    best = j;
                }
            }
            roots.push(grid[best]);
            i = j + 1;
            continue;
        }
        i += 1;
    }
    let mut pairs: Vec<(usize, usize)> = (0..count - 1).map(|k| (k, k + 1)).collect();
    if periodic {
        pairs.push((count - 1, 0));
    }
    for (a, b) in pairs {
        if sign(g[a]) * sign(g[b]) < 0 {
            let hi = if b == 0 { grid[0] + TAU } else { grid[b] };
            roots.push(bisect(&model, grid[a], g[a], hi, settings)?);
        }
    }
    if periodic && roots.len() > 1 {
        // merge a tolerance-band run that wraps through Φ₀ = 2π
        if sign(g[0]) == 0 && sign(g[count - 1]) == 0 {
            roots.remove(0);
        }
    }
    if roots.is_empty() {
        let min = g.iter().copied().fold(f64::INFINITY, f64::min);
        let max = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        return Err(CavityError::NoCrossings { min, max });
    }

    let threshold = threshold_gain(cavity);
    let mut points = roots
        .into_iter()
        .map(|phi| {
            let phi = if periodic { phi.rem_euclid(TAU) } else { phi };
            let r = model.response_at(phi).map_err(|e| CavityError::Evaluation { phi0: phi, source: Box::new(e) })?;
            let gain = r.mean_gain();
            let cfg = model.config_at(phi).map_err(|e| CavityError::Evaluation { phi0: phi, source: Box::new(e) })?;
            Ok(LasingPoint {
                phi0: phi,
                delta4: cfg.levels().to_si(cfg.delta4),
                alpha14: r.alpha14,
                alpha24: r.alpha24,
                gain,
                margin: gain - threshold.alpha,
                per_pass: gain * cavity.length,
                pump_context: cfg.into_config(),
            })
        })
        .collect::<Result<Vec<_>, CavityError>>()?;
    points.sort_by(|a, b| a.phi0.total_cmp(&b.phi0));
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseLock {
    pub phi0: f64,
    /// φ₂₄ − φ₁₄ the outputs must hold given the pump phases, in [0, 2π).
    pub probe_phase_difference: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceCheck {
    pub probe_beat: f64,
    pub pump_beat: f64,
    pub atom_splitting: f64,
    pub cavity_splitting: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub phi0: f64,
    #[serde(rename = "gain_m^-1")]
    pub gain: f64,
    #[serde(rename = "threshold_m^-1")]
    pub threshold: f64,
    pub margin: f64,
    pub per_pass: f64,
    #[serde(rename = "max_T")]
    pub max_transmittivity: f64,
    pub transmittivity: f64,
    pub cavity_length_m: f64,
    pub mode_index: u32,
    pub alpha14: f64,
    pub alpha24: f64,
    pub feasible: bool,
    pub phase_lock: PhaseLock,
    pub resonance: ResonanceCheck,
}

/// Relative tolerance for the beat/splitting consistency check.
pub const RESONANCE_RTOL: f64 = 1e-6;

pub fn lasing_feasibility(point: &LasingPoint, spec: &CavitySpec) -> Result<FeasibilityReport, CrateError> {
    let cfg = validate_config(point.pump_context.clone())?;
    let threshold = threshold_gain(spec);
    let [w13, w23, w14, w24] = laser_frequencies(&cfg);
    let atom_splitting = cfg.levels().ground_splitting();
    let probe_beat = w14 - w24;
    let pump_beat = w13 - w23;
    let tol = RESONANCE_RTOL * atom_splitting;
    let consistent = (probe_beat - pump_beat).abs() <= tol && (spec.splitting - atom_splitting).abs() <= tol;
    let k = cfg.config();
    let phi0 = closed_loop_phase(&cfg);
    Ok(FeasibilityReport {
        phi0,
        gain: point.gain,
        threshold: threshold.alpha,
        margin: point.gain - threshold.alpha,
        per_pass: point.gain * spec.length,
        max_transmittivity: 2.0 * point.gain * spec.length,
        transmittivity: spec.transmittivity,
        cavity_length_m: spec.length,
        mode_index: spec.mode_index,
        alpha14: point.alpha14,
        alpha24: point.alpha24,
        feasible: point.alpha14 > 0.0 && point.alpha24 > 0.0 && point.gain >= threshold.alpha,
        phase_lock: PhaseLock {
            phi0,
            probe_phase_difference: (phi0 + k.d23.phase0 - k.d13.phase0).rem_euclid(TAU),
        },
        resonance: ResonanceCheck {
            probe_beat,
            pump_beat,
            atom_splitting,
            cavity_splitting: spec.splitting,
            consistent,
        },
    })
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operating point   Φ₀ = {:.6} rad ({:.4}π)", self.phi0, self.phi0 / std::f64::consts::PI)?;
        writeln!(f, "gain              α₁₄ = {:.6e} m^-1, α₂₄ = {:.6e} m^-1, common {:.6e} m^-1", self.alpha14, self.alpha24, self.gain)?;
        writeln!(f, "threshold         {:.6e} m^-1 (T = {:.4}, L_c = {:.6} m, m = {})", self.threshold, self.transmittivity, self.cavity_length_m, self.mode_index)?;
        writeln!(f, "margin            {:+.6e} m^-1", self.margin)?;
        writeln!(f, "per-pass gain     {:.6e}", self.per_pass)?;
        writeln!(f, "max output T      {:.6e}", self.max_transmittivity)?;
        if self.feasible {
            writeln!(f, "verdict           feasible")?;
        } else if self.alpha14 <= 0.0 || self.alpha24 <= 0.0 {
            writeln!(f, "verdict           infeasible: at least one probe is absorbed")?;
        } else {
            writeln!(f, "verdict           infeasible: short of threshold by {:.6e} m^-1", -self.margin)?;
        }
        writeln!(
            f,
            "phase lock        φ₂₄ − φ₁₄ = Φ₀ + φ₂₃ − φ₁₃ = {:.6} rad (mod 2π)",
            self.phase_lock.probe_phase_difference
        )?;
        write!(
            f,
            "resonance         probe beat {:.9e} rad/s, pump beat {:.9e} rad/s, splitting {:.9e} rad/s: {}",
            self.resonance.probe_beat,
            self.resonance.pump_beat,
            self.resonance.atom_splitting,
            if self.resonance.consistent { "consistent" } else { "INCONSISTENT" }
        )
    }
}
