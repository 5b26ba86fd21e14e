//! Physical scenario description for the double-Λ atom.
//!
//! Levels |1⟩, |2⟩ are the ground pair, |3⟩ is driven by the pump Λ (legs
//! 1–3, 2–3) and |4⟩ by the probe Λ (legs 1–4, 2–4). Every rate, Rabi
//! frequency and detuning is stored in units of Γ₃; only the level
//! frequencies and `gamma3_si` carry SI values (rad/s) and are used at the
//! medium/cavity boundary.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance (in units of Γ₃) for the Δ₃ = Δ₄ condition.
pub const TWO_PHOTON_TOLERANCE: f64 = 1e-9;

/// Probe-to-pump intensity ratio below which the probe Λ is treated as a perturbation.
pub const PERTURBATIVE_RATIO: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("two-photon detunings differ: Δ₃ = {diff3}, Δ₄ = {diff4} (no stationary rotating frame)")]
    NonMatchingTwoPhotonDetuning { diff3: f64, diff4: f64 },
    #[error("{name} must be non-negative, got {value}")]
    NegativeRate { name: &'static str, value: f64 },
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("invalid level structure: {0}")]
    InvalidLevels(String),
}

/// Level frequencies (SI) and excited-state decay rates (Γ₃ units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomLevels {
    /// Angular frequencies of |1⟩..|4⟩ in rad/s.
    pub omega: [f64; 4],
    pub gamma3: f64,
    pub gamma4: f64,
    /// Γ₃ in rad/s; converts internal rates to SI.
    pub gamma3_si: f64,
}

impl AtomLevels {
    /// ⁸⁷Rb-like defaults: |3⟩ on D1, |4⟩ on D2, ground hyperfine splitting.
    pub fn rubidium87() -> Self {
        let two_pi = TAU;
        let splitting_hz = 6.834_682_610_904e9;
        Self {
            omega: [
                0.0,
                two_pi * splitting_hz,
                two_pi * 377.107_463_380e12,
                two_pi * 384.230_484_468_5e12,
            ],
            gamma3: 1.0,
            gamma4: 1.05,
            gamma3_si: two_pi * 5.746e6,
        }
    }

    pub fn ground_splitting(&self) -> f64 {
        self.omega[1] - self.omega[0]
    }

    /// Converts a rate in internal (Γ₃) units to rad/s.
    pub fn to_si(&self, rate: f64) -> f64 {
        rate * self.gamma3_si / self.gamma3
    }
}

/// One planewave drive on a single transition.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DriveField {
    pub rabi: f64,
    /// δ = ω_laser − ω_atom.
    pub detuning: f64,
    pub phase0: f64,
    /// Wavevector magnitude in rad/m; only used for phase-matching checks.
    pub wavevector: Option<f64>,
}

impl DriveField {
    pub fn new(rabi: f64, detuning: f64, phase0: f64) -> Self {
        Self { rabi, detuning, phase0, wavevector: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleLambdaConfig {
    pub levels: AtomLevels,
    pub d13: DriveField,
    pub d23: DriveField,
    pub d14: DriveField,
    pub d24: DriveField,
    /// Dephasing rate of the |1⟩–|2⟩ coherence.
    pub ground_decoherence: f64,
}

impl DoubleLambdaConfig {
    /// Symmetric configuration: equal pumps with effective Rabi frequency
    /// `omega3`, equal probes with `omega4`, common detunings and Δ = 0.
    pub fn equal_beams(omega3: f64, omega4: f64, delta3: f64, delta4: f64, phi0: f64) -> Self {
        let pump = omega3 / 2f64.sqrt();
        let probe = omega4 / 2f64.sqrt();
        Self {
            levels: AtomLevels::rubidium87(),
            d13: DriveField::new(pump, delta3, 0.0),
            d23: DriveField::new(pump, delta3, 0.0),
            d14: DriveField::new(probe, delta4, 0.0),
            d24: DriveField::new(probe, delta4, phi0),
            ground_decoherence: 0.0,
        }
    }

    /// Sets Φ₀ by adjusting the 2–4 phase while leaving the other three fields alone.
    pub fn with_closed_loop_phase(mut self, phi0: f64) -> Self {
        self.d24.phase0 = self.d23.phase0 + self.d14.phase0 - self.d13.phase0 + phi0;
        self
    }

    /// Moves the probe common detuning δ₄, keeping Δ₄.
    pub fn with_probe_detuning(mut self, delta4: f64) -> Self {
        let diff = self.d14.detuning - self.d24.detuning;
        self.d14.detuning = delta4 + diff / 2.0;
        self.d24.detuning = delta4 - diff / 2.0;
        self
    }

    /// Moves the pump common detuning δ₃, keeping Δ₃.
    pub fn with_pump_detuning(mut self, delta3: f64) -> Self {
        let diff = self.d13.detuning - self.d23.detuning;
        self.d13.detuning = delta3 + diff / 2.0;
        self.d23.detuning = delta3 - diff / 2.0;
        self
    }

    /// Sets the common two-photon detuning Δ on both Λ systems.
    pub fn with_two_photon_detuning(mut self, diff: f64) -> Self {
        let d3 = 0.5 * (self.d13.detuning + self.d23.detuning);
        let d4 = 0.5 * (self.d14.detuning + self.d24.detuning);
        self.d13.detuning = d3 + diff / 2.0;
        self.d23.detuning = d3 - diff / 2.0;
        self.d14.detuning = d4 + diff / 2.0;
        self.d24.detuning = d4 - diff / 2.0;
        self
    }
}

/// A configuration whose derived detunings are populated and whose
/// two-photon detunings agree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidatedConfig {
    raw: DoubleLambdaConfig,
    pub delta3: f64,
    pub delta4: f64,
    pub diff3: f64,
    pub diff4: f64,
    /// (Ω₁₄² + Ω₂₄²)/(Ω₁₃² + Ω₂₃²); infinite when the pumps are off.
    pub probe_to_pump_ratio: f64,
    pub probe_perturbative: bool,
}

impl ValidatedConfig {
    pub fn config(&self) -> &DoubleLambdaConfig {
        &self.raw
    }

    pub fn into_config(self) -> DoubleLambdaConfig {
        self.raw
    }

    pub fn levels(&self) -> &AtomLevels {
        &self.raw.levels
    }

    /// Common two-photon detuning Δ (= Δ₃ = Δ₄ up to tolerance).
    pub fn two_photon_detuning(&self) -> f64 {
        self.diff3
    }

    pub fn pump_rabi(&self) -> f64 {
        self.raw.d13.rabi.hypot(self.raw.d23.rabi)
    }

    pub fn probe_rabi(&self) -> f64 {
        self.raw.d14.rabi.hypot(self.raw.d24.rabi)
    }

    pub fn closed_loop_phase(&self) -> f64 {
        closed_loop_phase(self)
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::NonFinite { name, value })
    }
}

fn check_non_negative(name: &'static str, value: f64) -> Result<(), ModelError> {
    check_finite(name, value)?;
    if value < 0.0 {
        return Err(ModelError::NegativeRate { name, value });
    }
    Ok(())
}

pub fn validate_config(raw: DoubleLambdaConfig) -> Result<ValidatedConfig, ModelError> {
    let lv = &raw.levels;
    for (name, value) in [
        ("gamma3", lv.gamma3),
        ("gamma4", lv.gamma4),
        ("gamma3_si", lv.gamma3_si),
    ] {
        check_non_negative(name, value)?;
        if value == 0.0 {
            return Err(ModelError::InvalidLevels(format!("{name} must be positive")));
        }
    }
    for (i, w) in lv.omega.iter().enumerate() {
        if !w.is_finite() {
            return Err(ModelError::InvalidLevels(format!("omega_{} is not finite", i + 1)));
        }
    }
    let [w1, w2, w3, w4] = lv.omega;
    if !(w1 <= w2 && w2 < w3 && w2 < w4) {
        return Err(ModelError::InvalidLevels(
            "expected omega_1 <= omega_2 < omega_3, omega_4".into(),
        ));
    }
    check_non_negative("ground_decoherence", raw.ground_decoherence)?;
    let fields = [
        ("omega13_rabi", &raw.d13),
        ("omega23_rabi", &raw.d23),
        ("omega14_rabi", &raw.d14),
        ("omega24_rabi", &raw.d24),
    ];
    for (name, f) in fields {
        check_non_negative(name, f.rabi)?;
        check_finite("detuning", f.detuning)?;
        check_finite("phase0", f.phase0)?;
        if let Some(k) = f.wavevector {
            check_finite("wavevector", k)?;
        }
    }

    let delta3 = 0.5 * (raw.d13.detuning + raw.d23.detuning);
    let delta4 = 0.5 * (raw.d14.detuning + raw.d24.detuning);
    let diff3 = raw.d13.detuning - raw.d23.detuning;
    let diff4 = raw.d14.detuning - raw.d24.detuning;
    if (diff3 - diff4).abs() > TWO_PHOTON_TOLERANCE * lv.gamma3 {
        return Err(ModelError::NonMatchingTwoPhotonDetuning { diff3, diff4 });
    }

    let pump = raw.d13.rabi.powi(2) + raw.d23.rabi.powi(2);
    let probe = raw.d14.rabi.powi(2) + raw.d24.rabi.powi(2);
    let probe_to_pump_ratio = if pump > 0.0 {
        probe / pump
    } else if probe > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };

    Ok(ValidatedConfig {
        raw,
        delta3,
        delta4,
        diff3,
        diff4,
        probe_to_pump_ratio,
        probe_perturbative: probe_to_pump_ratio <= PERTURBATIVE_RATIO,
    })
}

/// Φ₀ = (φ₂₄ − φ₂₃) − (φ₁₄ − φ₁₃), reduced to [0, 2π).
pub fn closed_loop_phase(cfg: &ValidatedConfig) -> f64 {
    let c = cfg.config();
    let raw = (c.d24.phase0 - c.d23.phase0) - (c.d14.phase0 - c.d13.phase0);
    let phi = raw.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if phi >= TAU {
        0.0
    } else {
        phi
    }
}

/// Shortest signed distance between two angles.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn zero_config() -> DoubleLambdaConfig {
        DoubleLambdaConfig {
            levels: AtomLevels::rubidium87(),
            d13: DriveField::default(),
            d23: DriveField::default(),
            d14: DriveField::default(),
            d24: DriveField::default(),
            ground_decoherence: 0.0,
        }
    }

    #[test]
    fn zero_detunings_are_valid() {
        let v = validate_config(zero_config()).unwrap();
        assert_eq!((v.delta3, v.delta4, v.diff3, v.diff4), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn common_and_difference_detunings() {
        let mut c = zero_config();
        c.d13.detuning = 1.0;
        c.d23.detuning = 1.0;
        c.d14.detuning = 20.0;
        c.d24.detuning = 20.0;
        let v = validate_config(c).unwrap();
        assert_eq!(v.delta3, 1.0);
        assert_eq!(v.delta4, 20.0);
        assert_eq!(v.diff3, 0.0);
        assert_eq!(v.diff4, 0.0);
    }

    #[test]
    fn mismatched_two_photon_detuning_is_rejected() {
        let mut c = zero_config();
        c.d13.detuning = 1.0;
        let err = validate_config(c).unwrap_err();
        assert!(matches!(err, ModelError::NonMatchingTwoPhotonDetuning { .. }));
    }

    #[test]
    fn negative_rates_are_rejected() {
        let mut c = zero_config();
        c.d14.rabi = -0.1;
        assert!(matches!(validate_config(c).unwrap_err(), ModelError::NegativeRate { .. }));
        let mut c = zero_config();
        c.levels.gamma4 = -1.0;
        assert!(matches!(validate_config(c).unwrap_err(), ModelError::NegativeRate { .. }));
    }

    #[test]
    fn closed_loop_phase_examples() {
        let v = validate_config(zero_config()).unwrap();
        assert_eq!(closed_loop_phase(&v), 0.0);

        let mut c = zero_config();
        c.d24.phase0 = PI;
        assert!((closed_loop_phase(&validate_config(c).unwrap()) - PI).abs() < 1e-15);

        let mut c = zero_config();
        c.d13.phase0 = 0.1;
        c.d23.phase0 = 0.4;
        c.d14.phase0 = 0.7;
        c.d24.phase0 = 1.5;
        assert!((closed_loop_phase(&validate_config(c).unwrap()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn validation_is_idempotent() {
        let c = DoubleLambdaConfig::equal_beams(10.0, 1.0, 10.0, 20.0, 1.0);
        let v = validate_config(c).unwrap();
        let again = validate_config(v.config().clone()).unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn detuning_setters_preserve_difference() {
        let c = DoubleLambdaConfig::equal_beams(10.0, 1.0, 10.0, 20.0, 0.0)
            .with_two_photon_detuning(0.3)
            .with_probe_detuning(-5.0)
            .with_pump_detuning(2.0);
        let v = validate_config(c).unwrap();
        assert!((v.delta4 + 5.0).abs() < 1e-12);
        assert!((v.delta3 - 2.0).abs() < 1e-12);
        assert!((v.diff3 - 0.3).abs() < 1e-12 && (v.diff4 - 0.3).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn phased(p: [f64; 4]) -> ValidatedConfig {
            let mut c = zero_config();
            c.d13.phase0 = p[0];
            c.d23.phase0 = p[1];
            c.d14.phase0 = p[2];
            c.d24.phase0 = p[3];
            validate_config(c).unwrap()
        }

        proptest! {
            #[test]
            fn phase_is_gauge_invariant(
                p in prop::array::uniform4(-10.0f64..10.0),
                global in -10.0f64..10.0,
                lambda_shift in -10.0f64..10.0,
            ) {
                let base = closed_loop_phase(&phased(p));
                prop_assert!((0.0..TAU).contains(&base));
                let shifted = phased([p[0] + global, p[1] + global, p[2] + global, p[3] + global]);
                prop_assert!(angle_distance(closed_loop_phase(&shifted), base).abs() < 1e-12);
                // both legs of the pump Λ
                let pump = phased([p[0] + lambda_shift, p[1] + lambda_shift, p[2], p[3]]);
                prop_assert!(angle_distance(closed_loop_phase(&pump), base).abs() < 1e-12);
                let probe = phased([p[0], p[1], p[2] + lambda_shift, p[3] + lambda_shift]);
                prop_assert!(angle_distance(closed_loop_phase(&probe), base).abs() < 1e-12);
            }

            #[test]
            fn setting_phase_round_trips(phi in 0.0f64..TAU, p in prop::array::uniform3(-5.0f64..5.0)) {
                let mut c = zero_config();
                c.d13.phase0 = p[0];
                c.d23.phase0 = p[1];
                c.d14.phase0 = p[2];
                let v = validate_config(c.with_closed_loop_phase(phi)).unwrap();
                prop_assert!(angle_distance(closed_loop_phase(&v), phi).abs() < 1e-12);
            }
        }
    }
}
