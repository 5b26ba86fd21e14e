//! Reduced model: the pump Λ is folded into a dark/bright pair, the probe
//! excited state is adiabatically eliminated, and the remaining two-level
//! problem is solved and mapped back onto the optical coherences.
//!
//! Conventions match [`crate::liouville`]: ħ = 1, rates in Γ₃, and the
//! ground pair rotated as |D⟩ = c|1̃⟩ − s|2̃⟩, |B⟩ = s|1̃⟩ + c|2̃⟩ with
//! c = cos θ₃ = Ω₂₃/Ω₃, s = sin θ₃ = Ω₁₃/Ω₃.

use nalgebra::{DMatrix, Matrix2, Matrix3};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::density::{hermitian_part, DensityMatrix};
use crate::liouville::{steady_state, CollapseOp, LiouvilleError, Liouvillian};
use crate::model::ValidatedConfig;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// |δ₄| below this (Γ₃ units) is treated as the singular point of the reduction.
pub const PROBE_DETUNING_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EffectiveError {
    #[error("pump Λ is not driven (Ω₃ = 0); dark/bright basis undefined")]
    ZeroPump,
    #[error("probe common detuning δ₄ = {0} makes the two-level reduction singular")]
    ZeroProbeDetuning(f64),
    #[error("|2δ₄ + iΓ₄| = {0:e} is too small for adiabatic elimination")]
    ProbeResonanceSingularity(f64),
    #[error("effective decay rate Γ_eq = {0} gives no relaxation")]
    NoRelaxation(f64),
    #[error("two-level solve failed: {0}")]
    Solve(#[from] LiouvilleError),
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DarkBrightBasis {
    pub theta3: f64,
    pub theta4: f64,
    pub omega3_eff: f64,
    pub omega4_eff: f64,
    /// Rows ⟨D|, ⟨B| in the {|1̃⟩, |2̃⟩} basis.
    #[serde(skip)]
    pub transform: Matrix2<Complex64>,
}

impl DarkBrightBasis {
    pub fn cos3(&self) -> f64 {
        self.theta3.cos()
    }

    pub fn sin3(&self) -> f64 {
        self.theta3.sin()
    }

    /// Maps a ground-manifold operator from {1̃, 2̃} into {D, B}.
    pub fn to_dark_bright(&self, m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
        self.transform * m * self.transform.adjoint()
    }

    pub fn from_dark_bright(&self, m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
        self.transform.adjoint() * m * self.transform
    }
}

pub fn dark_bright(cfg: &ValidatedConfig) -> Result<DarkBrightBasis, EffectiveError> {
    let k = cfg.config();
    let omega3_eff = k.d13.rabi.hypot(k.d23.rabi);
    if omega3_eff == 0.0 {
        return Err(EffectiveError::ZeroPump);
    }
    let omega4_eff = k.d14.rabi.hypot(k.d24.rabi);
    let theta3 = k.d13.rabi.atan2(k.d23.rabi);
    let theta4 = k.d14.rabi.atan2(k.d24.rabi);
    let (cs, sn) = (k.d23.rabi / omega3_eff, k.d13.rabi / omega3_eff);
    let transform = Matrix2::new(c(cs), c(-sn), c(sn), c(cs));
    Ok(DarkBrightBasis { theta3, theta4, omega3_eff, omega4_eff, transform })
}

/// Pump-Λ elimination: L₃ and the {D, B} Hamiltonian ½L₃(2δ₃ − iΓ₃)|B⟩⟨B|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpEffective {
    pub l3: f64,
    pub hamiltonian: Matrix2<Complex64>,
}

pub fn pump_effective(cfg: &ValidatedConfig) -> PumpEffective {
    let g3 = cfg.levels().gamma3;
    let d3 = cfg.delta3;
    let omega3_sq = cfg.config().d13.rabi.powi(2) + cfg.config().d23.rabi.powi(2);
    let l3 = omega3_sq / (g3 * g3 + 4.0 * d3 * d3);
    let mut hamiltonian = Matrix2::zeros();
    hamiltonian[(1, 1)] = Complex64::new(2.0 * d3, -g3) * (l3 / 2.0);
    PumpEffective { l3, hamiltonian }
}

/// h_D4 and h_B4: ⟨D|H|4̃⟩ = h_D4/2, ⟨B|H|4̃⟩ = h_B4/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeCouplings {
    pub h_d4: Complex64,
    pub h_b4: Complex64,
}

pub fn probe_couplings(cfg: &ValidatedConfig) -> Result<ProbeCouplings, EffectiveError> {
    let k = cfg.config();
    let omega3 = k.d13.rabi.hypot(k.d23.rabi);
    if omega3 == 0.0 {
        return Err(EffectiveError::ZeroPump);
    }
    let loop_24 = Complex64::from_polar(k.d24.rabi, -cfg.closed_loop_phase());
    let h_d4 = -(c(k.d23.rabi * k.d14.rabi) - loop_24 * k.d13.rabi) / omega3;
    let h_b4 = -(c(k.d13.rabi * k.d14.rabi) + loop_24 * k.d23.rabi) / omega3;
    Ok(ProbeCouplings { h_d4, h_b4 })
}

/// Free ground-pair energies ±Δ/2 expressed in {D, B}.
fn two_photon_block(cfg: &ValidatedConfig, basis: &DarkBrightBasis) -> Matrix2<Complex64> {
    let half = cfg.two_photon_detuning() / 2.0;
    basis.to_dark_bright(&Matrix2::new(c(half), ZERO, ZERO, c(-half)))
}

/// Hamiltonian on {D, B, 4̃} after the pump elimination.
pub fn three_state_hamiltonian(cfg: &ValidatedConfig) -> Result<Matrix3<Complex64>, EffectiveError> {
    let basis = dark_bright(cfg)?;
    let pump = pump_effective(cfg);
    let h = probe_couplings(cfg)?;
    let ground = two_photon_block(cfg, &basis) + pump.hamiltonian;
    let mut m = Matrix3::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&ground);
    m[(2, 2)] = -Complex64::new(2.0 * cfg.delta4, cfg.levels().gamma4) / 2.0;
    m[(0, 2)] = h.h_d4 / 2.0;
    m[(2, 0)] = h.h_d4.conj() / 2.0;
    m[(1, 2)] = h.h_b4 / 2.0;
    m[(2, 1)] = h.h_b4.conj() / 2.0;
    Ok(m)
}

/// c̃₄ = A_D c_D + A_B c_B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticCoefficients {
    pub a_d: Complex64,
    pub a_b: Complex64,
}

pub fn adiabatic_coefficients(cfg: &ValidatedConfig) -> Result<AdiabaticCoefficients, EffectiveError> {
    let h = probe_couplings(cfg)?;
    let den = Complex64::new(2.0 * cfg.delta4, cfg.levels().gamma4);
    if den.norm() < 1e-300 {
        return Err(EffectiveError::ProbeResonanceSingularity(den.norm()));
    }
    Ok(AdiabaticCoefficients { a_d: h.h_d4.conj() / den, a_b: h.h_b4.conj() / den })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveTwoLevel {
    pub l3: f64,
    pub gamma_eq: f64,
    pub h_d4: Complex64,
    pub h_b4: Complex64,
    /// −2i⟨D|H|B⟩; real and equal to (Ω₄²/4δ₄) sin Φ₀ for equal beams.
    pub omega_eq: Complex64,
    /// Re(H_BB − H_DD).
    pub level_splitting: f64,
    #[serde(skip)]
    pub hamiltonian2: Matrix2<Complex64>,
}

/// Two-level Hamiltonian on {D, B} with the probe level eliminated (Γ₄ dropped).
pub fn final_two_level(cfg: &ValidatedConfig) -> Result<EffectiveTwoLevel, EffectiveError> {
    let d4 = cfg.delta4;
    if d4.abs() <= PROBE_DETUNING_FLOOR * cfg.levels().gamma3 {
        return Err(EffectiveError::ZeroProbeDetuning(d4));
    }
    let basis = dark_bright(cfg)?;
    let pump = pump_effective(cfg);
    let ProbeCouplings { h_d4, h_b4 } = probe_couplings(cfg)?;
    let k = 1.0 / (4.0 * d4);
    let probe = Matrix2::new(
        c(h_d4.norm_sqr() * k),
        h_d4 * h_b4.conj() * k,
        h_b4 * h_d4.conj() * k,
        c(h_b4.norm_sqr() * k),
    );
    let hamiltonian2 = two_photon_block(cfg, &basis) + pump.hamiltonian + probe;
    Ok(EffectiveTwoLevel {
        l3: pump.l3,
        gamma_eq: pump.l3 * cfg.levels().gamma3,
        h_d4,
        h_b4,
        omega_eq: -2.0 * I * hamiltonian2[(0, 1)],
        level_splitting: (hamiltonian2[(1, 1)] - hamiltonian2[(0, 0)]).re,
        hamiltonian2,
    })
}

/// Symmetric drive: Ω₁₃ = Ω₂₃ = Ω₃/√2, Ω₁₄ = Ω₂₄ = Ω₄/√2, Δ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualBeams {
    pub omega3: f64,
    pub omega4: f64,
    pub delta3: f64,
    pub delta4: f64,
    pub gamma3: f64,
    pub phi0: f64,
}

impl EqualBeams {
    pub fn l3(&self) -> f64 {
        self.omega3.powi(2) / (self.gamma3.powi(2) + 4.0 * self.delta3.powi(2))
    }
}

/// Closed form with the dark-state energy as the zero:
/// [[0, iΩ₄² sin Φ₀/8δ₄], [c.c., Ω₄² cos Φ₀/4δ₄ + L₃δ₃ − iL₃Γ₃/2]].
pub fn equal_beams_hamiltonian(p: &EqualBeams) -> Matrix2<Complex64> {
    let l3 = p.l3();
    let w4 = p.omega4.powi(2) / (4.0 * p.delta4);
    let coupling = I * (w4 / 2.0) * p.phi0.sin();
    let bb = Complex64::new(w4 * p.phi0.cos() + l3 * p.delta3, -l3 * p.gamma3 / 2.0);
    Matrix2::new(ZERO, coupling, coupling.conj(), bb)
}

/// Closed-form steady state of the equal-beams two-level model, in {D, B}.
pub fn equal_beams_steady_state(p: &EqualBeams) -> DMatrix<Complex64> {
    let l3 = p.l3();
    let (w3, w4, d3, d4) = (p.omega3, p.omega4, p.delta3, p.delta4);
    let w4_4 = w4.powi(4);
    let den = 2.0 * w4_4 * (1.0 + p.phi0.cos().powi(2))
        + 16.0 * l3 * w3 * w3 * d4 * d4
        + 32.0 * l3 * w4 * w4 * d3 * d4 * p.phi0.cos();
    let bb = w4_4 * p.phi0.sin().powi(2) / den;
    let db = -(Complex64::new(p.gamma3, 2.0 * d3) * (4.0 * w4 * w4 * d4 * p.phi0.sin() * l3)
        + I * w4_4 * (2.0 * p.phi0).sin())
        / den;
    DMatrix::from_row_slice(2, 2, &[c(1.0 - bb), db, db.conj(), c(bb)])
}

/// Steady state of the {D, B} model: Hermitian part of the Hamiltonian plus
/// the jump |D⟩⟨B| at rate Γ_eq (which also supplies the anti-Hermitian B loss).
pub fn two_level_steady_state(eff: &EffectiveTwoLevel, gamma_eq: f64) -> Result<DensityMatrix, EffectiveError> {
    if !(gamma_eq > 0.0) {
        return Err(EffectiveError::NoRelaxation(gamma_eq));
    }
    let h = DMatrix::from_iterator(2, 2, eff.hamiltonian2.iter().copied());
    let jump = CollapseOp::transition(2, 0, 1, gamma_eq, "B->D");
    let liou = Liouvillian::from_parts(hermitian_part(&h), vec![jump]);
    Ok(steady_state(&liou)?)
}

/// Approximate four-level quantities rebuilt from the {D, B} state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reconstruction {
    pub r11: f64,
    pub r22: f64,
    pub r12: Complex64,
    pub r14: Complex64,
    pub r24: Complex64,
    pub r13: Complex64,
    pub r23: Complex64,
    pub r33: f64,
    pub r44: f64,
}

/// Maps ρ₂ (ordered D, B) back to ground populations, the ground coherence
/// and the optical coherences through the adiabatic amplitudes.
pub fn reconstruct_coherences(
    rho2: &DensityMatrix,
    basis: &DarkBrightBasis,
    coeffs: &AdiabaticCoefficients,
    pump: &PumpEffective,
    cfg: &ValidatedConfig,
) -> Reconstruction {
    let (cs, sn) = (basis.cos3(), basis.sin3());
    let dd = rho2.get(1, 1);
    let db = rho2.get(1, 2);
    let bd = rho2.get(2, 1);
    let bb = rho2.get(2, 2);

    let r11 = (dd * cs * cs + bb * sn * sn + (db + bd) * (sn * cs)).re;
    let r22 = (dd * sn * sn + bb * cs * cs - (db + bd) * (sn * cs)).re;
    let r12 = db * cs * cs + (bb - dd) * (sn * cs) - bd * sn * sn;

    // ⟨g|ρ|D⟩ and ⟨g|ρ|B⟩
    let r1d = dd * cs + bd * sn;
    let r1b = db * cs + bb * sn;
    let r2d = bd * cs - dd * sn;
    let r2b = bb * cs - db * sn;

    let (ad, ab) = (coeffs.a_d.conj(), coeffs.a_b.conj());
    let r14 = ad * r1d + ab * r1b;
    let r24 = ad * r2d + ab * r2b;
    let r44 = (coeffs.a_d * coeffs.a_d.conj() * dd
        + coeffs.a_b * coeffs.a_b.conj() * bb
        + coeffs.a_d * coeffs.a_b.conj() * db
        + coeffs.a_b * coeffs.a_d.conj() * bd)
        .re;

    let pump_ratio = -basis.omega3_eff / Complex64::new(2.0 * cfg.delta3, -cfg.levels().gamma3);
    Reconstruction {
        r11,
        r22,
        r12,
        r14,
        r24,
        r13: r1b * pump_ratio,
        r23: r2b * pump_ratio,
        r33: pump.l3 * bb.re,
        r44,
    }
}

#[derive(Debug, Clone)]
pub struct EffectiveSolution {
    pub basis: DarkBrightBasis,
    pub two_level: EffectiveTwoLevel,
    pub coefficients: AdiabaticCoefficients,
    pub rho2: DensityMatrix,
    pub coherences: Reconstruction,
}

pub fn solve_effective(cfg: &ValidatedConfig) -> Result<EffectiveSolution, EffectiveError> {
    let basis = dark_bright(cfg)?;
    let two_level = final_two_level(cfg)?;
    let coefficients = adiabatic_coefficients(cfg)?;
    let rho2 = two_level_steady_state(&two_level, two_level.gamma_eq)?;
    let coherences = reconstruct_coherences(&rho2, &basis, &coefficients, &pump_effective(cfg), cfg);
    Ok(EffectiveSolution { basis, two_level, coefficients, rho2, coherences })
}
