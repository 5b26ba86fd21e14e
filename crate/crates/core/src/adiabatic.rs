//! Checks that the excited-state coherences follow the ground manifold as the
//! adiabatic elimination assumes, by integrating the exact master equation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::density::DensityMatrix;
use crate::effective::{adiabatic_coefficients, dark_bright, DarkBrightBasis};
use crate::liouville::{build_liouvillian, evolve, DecayModel, Schedule};
use crate::model::ValidatedConfig;
use crate::Error;

/// Relative deviation above which a run is flagged as non-adiabatic.
pub const ADIABATIC_FLAG: f64 = 0.05;
/// Samples earlier than this many excited-state lifetimes are skipped.
pub const SETTLE_LIFETIMES: f64 = 10.0;
/// Spacing of recorded samples (Γ₃⁻¹).
const SAMPLE_INTERVAL: f64 = 0.05;
/// Step as a fraction of the fastest rate.
const STEP_FRACTION: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideReport {
    /// max_t ‖pred − exact‖ / max_t ‖exact‖ over the settled samples.
    pub max_deviation: f64,
    /// ‖pred − exact‖ / ‖exact‖ at t_final; absent if the exact coherence vanishes.
    pub final_deviation: Option<f64>,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdiabaticityReport {
    pub t_final: f64,
    pub dt: f64,
    pub settle_time: f64,
    pub samples: usize,
    /// ρ̃_g3 against −Ω₃ ρ_gB/(2δ₃ − iΓ₃).
    pub pump: Option<SideReport>,
    /// ρ̃_g4 against A_D* ρ_gD + A_B* ρ_gB.
    pub probe: Option<SideReport>,
    pub flagged: bool,
    pub threshold: f64,
}

fn ground_projections(rho: &DMatrix<Complex64>, basis: &DarkBrightBasis) -> ([Complex64; 2], [Complex64; 2]) {
    // ⟨g|ρ|D⟩ = Σ_k ρ_gk ⟨k|D⟩ with real basis vectors
    let t = &basis.transform;
    let mut gd = [Complex64::default(); 2];
    let mut gb = [Complex64::default(); 2];
    for g in 0..2 {
        gd[g] = rho[(g, 0)] * t[(0, 0)] + rho[(g, 1)] * t[(0, 1)];
        gb[g] = rho[(g, 0)] * t[(1, 0)] + rho[(g, 1)] * t[(1, 1)];
    }
    (gd, gb)
}

fn norm2(v: [Complex64; 2]) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

struct Accumulator {
    max_dev: f64,
    max_mag: f64,
    last: (f64, f64),
}

impl Accumulator {
    fn new() -> Self {
        Self { max_dev: 0.0, max_mag: 0.0, last: (0.0, 0.0) }
    }

    fn push(&mut self, exact: [Complex64; 2], pred: [Complex64; 2]) {
        let dev = norm2([exact[0] - pred[0], exact[1] - pred[1]]);
        let mag = norm2(exact);
        self.max_dev = self.max_dev.max(dev);
        self.max_mag = self.max_mag.max(mag);
        self.last = (dev, mag);
    }

    fn finish(&self) -> SideReport {
        let max_deviation = if self.max_mag > 0.0 { self.max_dev / self.max_mag } else { 0.0 };
        let final_deviation = (self.last.1 > 1e-300).then(|| self.last.0 / self.last.1);
        let flagged = final_deviation.unwrap_or(max_deviation) > ADIABATIC_FLAG;
        SideReport { max_deviation, final_deviation, flagged }
    }
}

/// Evolves from |1⟩⟨1| to `t_final` and compares the exact excited coherences
/// with the instantaneous adiabatic prediction built from the exact ground block.
pub fn verify_adiabaticity(cfg: &ValidatedConfig, decay: &DecayModel, t_final: f64) -> Result<AdiabaticityReport, Error> {
    let liou = build_liouvillian(cfg, decay)?;
    let mut schedule = Schedule::for_liouvillian(&liou, t_final, STEP_FRACTION, 1);
    schedule.sample_every = ((SAMPLE_INTERVAL / schedule.dt).round() as usize).max(1);
    let traj = evolve(&liou, &DensityMatrix::basis(4, 0), schedule)?;

    let lv = cfg.levels();
    let settle_time = SETTLE_LIFETIMES / lv.gamma3.min(lv.gamma4);
    let basis = dark_bright(cfg).ok();
    let probe_on = cfg.probe_rabi() > 0.0;
    let coeffs = match (&basis, probe_on) {
        (Some(_), true) => Some(adiabatic_coefficients(cfg)?),
        _ => None,
    };
    let pump_ratio = basis
        .as_ref()
        .map(|b| -b.omega3_eff / Complex64::new(2.0 * cfg.delta3, -lv.gamma3));

    let mut pump = Accumulator::new();
    let mut probe = Accumulator::new();
    let mut samples = 0;
    for (t, state) in traj.times.iter().zip(&traj.states) {
        if *t < settle_time {
            continue;
        }
        let Some(b) = basis.as_ref() else { break };
        samples += 1;
        let rho = state.matrix();
        let (gd, gb) = ground_projections(rho, b);
        if let Some(ratio) = pump_ratio {
            pump.push([rho[(0, 2)], rho[(1, 2)]], [gb[0] * ratio, gb[1] * ratio]);
        }
        if let Some(a) = coeffs {
            let (ad, ab) = (a.a_d.conj(), a.a_b.conj());
            probe.push([rho[(0, 3)], rho[(1, 3)]], [ad * gd[0] + ab * gb[0], ad * gd[1] + ab * gb[1]]);
        }
    }

    let pump = (basis.is_some() && samples > 0).then(|| pump.finish());
    let probe = (coeffs.is_some() && samples > 0).then(|| probe.finish());
    let flagged = pump.is_some_and(|s| s.flagged) || probe.is_some_and(|s| s.flagged);
    Ok(AdiabaticityReport {
        t_final,
        dt: schedule.dt,
        settle_time,
        samples,
        pump,
        probe,
        flagged,
        threshold: ADIABATIC_FLAG,
    })
}
