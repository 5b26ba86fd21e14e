//! Exact engine: rotating-frame Hamiltonian, Lindblad superoperator,
//! steady state and fixed-step time evolution.
//!
//! Frame convention (ħ = 1, Γ₃ units, basis 1̃, 2̃, 3̃, 4̃):
//!
//! ```text
//! H = diag(Δ/2, −Δ/2, −δ₃, −δ₄)
//!     − ½ (Ω₁₃|3⟩⟨1| + Ω₂₃|3⟩⟨2| + Ω₁₄|4⟩⟨1| + Ω₂₄ e^{iΦ₀}|4⟩⟨2| + h.c.)
//! ```
//!
//! Superoperators act on column-stacked density matrices, vec(ρ)[i + n·j] = ρ_ij.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::{hermitian_part, unvec, DensityError, DensityMatrix, StateDiagnostics};
use crate::model::ValidatedConfig;

/// Residual bound for an accepted steady state.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-9;
/// Relative singular-value threshold for counting null-space directions.
pub const NULL_SPACE_RTOL: f64 = 1e-10;
/// Largest permitted dt times the fastest rate.
pub const MAX_STEP_FRACTION: f64 = 0.05;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiouvilleError {
    #[error("steady state is not unique: null space has dimension {0}")]
    DegenerateSteadyState(usize),
    #[error("steady-state linear system is singular")]
    SingularSystem,
    #[error("steady-state residual {0:e} exceeds tolerance")]
    ResidualTooLarge(f64),
    #[error("step size too large: {0}")]
    StepSizeTooLarge(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("dimension mismatch: superoperator for dim {expected}, state has dim {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid steady state: {0}")]
    InvalidState(#[from] DensityError),
    #[error("branching ratio {name} = {value} outside [0, 1]")]
    BadBranching { name: &'static str, value: f64 },
}

/// Branching of each excited state's decay into |1⟩ (fraction b) and |2⟩ (1 − b).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayModel {
    pub branching3: f64,
    pub branching4: f64,
}

impl Default for DecayModel {
    fn default() -> Self {
        Self { branching3: 0.5, branching4: 0.5 }
    }
}

impl DecayModel {
    pub fn validate(&self) -> Result<(), LiouvilleError> {
        for (name, value) in [("branching3", self.branching3), ("branching4", self.branching4)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(LiouvilleError::BadBranching { name, value });
            }
        }
        Ok(())
    }
}

/// Jump operator C with rate γ, entering as γ(CρC† − ½{C†C, ρ}).
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseOp {
    pub label: String,
    pub rate: f64,
    pub op: DMatrix<Complex64>,
}

impl CollapseOp {
    /// |to⟩⟨from| with 0-based indices.
    pub fn transition(dim: usize, to: usize, from: usize, rate: f64, label: impl Into<String>) -> Self {
        let mut op = DMatrix::zeros(dim, dim);
        op[(to, from)] = ONE;
        Self { label: label.into(), rate, op }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    dim: usize,
    matrix: DMatrix<Complex64>,
    hamiltonian: DMatrix<Complex64>,
    collapse_ops: Vec<CollapseOp>,
}

impl Liouvillian {
    /// −i(I⊗H − Hᵀ⊗I) + Σ γ(C̄⊗C − ½ I⊗C†C − ½ (C†C)ᵀ⊗I).
    pub fn from_parts(hamiltonian: DMatrix<Complex64>, collapse_ops: Vec<CollapseOp>) -> Self {
        let n = hamiltonian.nrows();
        let id = DMatrix::<Complex64>::identity(n, n);
        let mut matrix = (id.kronecker(&hamiltonian) - hamiltonian.transpose().kronecker(&id)) * (-I);
        for c in &collapse_ops {
            if c.rate == 0.0 {
                continue;
            }
            let cdc = c.op.adjoint() * &c.op;
            let term = c.op.conjugate().kronecker(&c.op)
                - id.kronecker(&cdc).scale(0.5)
                - cdc.transpose().kronecker(&id).scale(0.5);
            matrix += term * Complex64::new(c.rate, 0.0);
        }
        Self { dim: n, matrix, hamiltonian, collapse_ops }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn hamiltonian(&self) -> &DMatrix<Complex64> {
        &self.hamiltonian
    }

    pub fn collapse_ops(&self) -> &[CollapseOp] {
        &self.collapse_ops
    }

    /// L(ρ) as a matrix.
    pub fn apply(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let v = DVector::from_column_slice(rho.as_slice());
        unvec(&(&self.matrix * v))
    }

    fn trace_row(&self) -> DVector<Complex64> {
        let n = self.dim;
        let mut row = DVector::zeros(n * n);
        for k in 0..n {
            row[k + n * k] = ONE;
        }
        row
    }

    /// ‖tr(·)ᵀ L‖, zero for a trace-preserving generator.
    pub fn trace_leak(&self) -> f64 {
        (self.trace_row().transpose() * &self.matrix).norm()
    }

    /// Largest rate scale appearing in H or the jump rates.
    pub fn fastest_rate(&self) -> f64 {
        let n = self.dim;
        let mut scale = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let h = self.hamiltonian[(i, j)].norm();
                scale = scale.max(if i == j { h } else { 2.0 * h });
            }
        }
        self.collapse_ops.iter().fold(scale, |s, c| s.max(c.rate))
    }

    /// Row-major complex pairs for cross-language inspection.
    pub fn to_json(&self) -> serde_json::Value {
        fn dump(m: &DMatrix<Complex64>) -> serde_json::Value {
            let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect();
            serde_json::json!(rows)
        }
        let ops: Vec<_> = self
            .collapse_ops
            .iter()
            .map(|c| serde_json::json!({ "label": c.label, "rate": c.rate, "op": dump(&c.op) }))
            .collect();
        serde_json::json!({
            "dim": self.dim,
            "vectorization": "column-stacked",
            "hamiltonian": dump(&self.hamiltonian),
            "collapse_ops": ops,
            "superoperator": dump(&self.matrix),
        })
    }
}

pub fn build_hamiltonian_rwa(cfg: &ValidatedConfig) -> DMatrix<Complex64> {
    let c = cfg.config();
    let phi = cfg.closed_loop_phase();
    let diff = cfg.two_photon_detuning();
    let mut h = DMatrix::<Complex64>::zeros(4, 4);
    h[(0, 0)] = Complex64::new(diff / 2.0, 0.0);
    h[(1, 1)] = Complex64::new(-diff / 2.0, 0.0);
    h[(2, 2)] = Complex64::new(-cfg.delta3, 0.0);
    h[(3, 3)] = Complex64::new(-cfg.delta4, 0.0);
    let couplings = [
        (2, 0, Complex64::new(-c.d13.rabi / 2.0, 0.0)),
        (2, 1, Complex64::new(-c.d23.rabi / 2.0, 0.0)),
        (3, 0, Complex64::new(-c.d14.rabi / 2.0, 0.0)),
        (3, 1, Complex64::from_polar(-c.d24.rabi / 2.0, phi)),
    ];
    for (i, j, v) in couplings {
        h[(i, j)] = v;
        h[(j, i)] = v.conj();
    }
    h
}

/// Spontaneous decay channels plus optional ground dephasing.
pub fn decay_operators(cfg: &ValidatedConfig, decay: &DecayModel) -> Vec<CollapseOp> {
    let lv = cfg.levels();
    let g = cfg.config().ground_decoherence;
    let mut ops = vec![
        CollapseOp::transition(4, 0, 2, decay.branching3 * lv.gamma3, "3->1"),
        CollapseOp::transition(4, 1, 2, (1.0 - decay.branching3) * lv.gamma3, "3->2"),
        CollapseOp::transition(4, 0, 3, decay.branching4 * lv.gamma4, "4->1"),
        CollapseOp::transition(4, 1, 3, (1.0 - decay.branching4) * lv.gamma4, "4->2"),
    ];
    if g > 0.0 {
        ops.push(CollapseOp::transition(4, 0, 0, g, "dephase-1"));
        ops.push(CollapseOp::transition(4, 1, 1, g, "dephase-2"));
    }
    ops
}

pub fn build_liouvillian(cfg: &ValidatedConfig, decay: &DecayModel) -> Result<Liouvillian, LiouvilleError> {
    decay.validate()?;
    Ok(Liouvillian::from_parts(build_hamiltonian_rwa(cfg), decay_operators(cfg, decay)))
}

/// Solves L ρ = 0 with tr ρ = 1 by replacing the first row with the trace row.
pub fn steady_state(liou: &Liouvillian) -> Result<DensityMatrix, LiouvilleError> {
    let n = liou.dim;
    let l = liou.matrix();

    let sv = l.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let null_dim = sv.iter().filter(|&&s| s <= NULL_SPACE_RTOL * smax).count();
    if null_dim > 1 {
        return Err(LiouvilleError::DegenerateSteadyState(null_dim));
    }

    let mut a = l.clone();
    a.set_row(0, &liou.trace_row().transpose());
    let mut b = DVector::zeros(n * n);
    b[0] = ONE;
    let x = a.lu().solve(&b).ok_or(LiouvilleError::SingularSystem)?;

    let rho = hermitian_part(&unvec(&x));
    let residual = liou.apply(&rho).norm();
    if !(residual <= STEADY_RESIDUAL_TOL) {
        return Err(LiouvilleError::ResidualTooLarge(residual));
    }
    Ok(DensityMatrix::new(rho)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub t_final: f64,
    pub dt: f64,
    /// Record every `sample_every`-th step (the initial state is always recorded).
    pub sample_every: usize,
}

impl Schedule {
    /// A step of `fraction` / fastest rate, rounded so that it tiles `t_final`.
    pub fn for_liouvillian(liou: &Liouvillian, t_final: f64, fraction: f64, sample_every: usize) -> Self {
        let rate = liou.fastest_rate().max(1e-12);
        let steps = (t_final * rate / fraction.min(MAX_STEP_FRACTION)).ceil().max(1.0);
        Self { t_final, dt: t_final / steps, sample_every: sample_every.max(1) }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory always holds the initial state")
    }
}

/// Fixed-step RK4 integration of dρ/dt = L ρ.
pub fn evolve(liou: &Liouvillian, rho0: &DensityMatrix, schedule: Schedule) -> Result<Trajectory, LiouvilleError> {
    let Schedule { t_final, dt, sample_every } = schedule;
    if !(t_final >= 0.0 && t_final.is_finite()) || !(dt > 0.0 && dt.is_finite()) || sample_every == 0 {
        return Err(LiouvilleError::InvalidSchedule(format!(
            "t_final = {t_final}, dt = {dt}, sample_every = {sample_every}"
        )));
    }
    if rho0.dim() != liou.dim {
        return Err(LiouvilleError::DimensionMismatch { expected: liou.dim, got: rho0.dim() });
    }
    let limit = MAX_STEP_FRACTION / liou.fastest_rate().max(f64::MIN_POSITIVE);
    if dt > limit * (1.0 + 1e-12) {
        return Err(LiouvilleError::StepSizeTooLarge(format!(
            "dt = {dt:e} exceeds {MAX_STEP_FRACTION}/fastest rate = {limit:e}"
        )));
    }

    let steps = (t_final / dt - 1e-9).ceil().max(0.0) as usize;
    let l = liou.matrix();
    let mut v = rho0.to_vec();
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let h = Complex64::new(dt, 0.0);
    let half = Complex64::new(dt / 2.0, 0.0);

    for step in 1..=steps {
        let k1 = l * &v;
        let k2 = l * (&v + &k1 * half);
        let k3 = l * (&v + &k2 * half);
        let k4 = l * (&v + &k3 * h);
        v += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4) * (h / 6.0);
        let sym = hermitian_part(&unvec(&v));
        v.copy_from_slice(sym.as_slice());

        if step % sample_every == 0 || step == steps {
            let t = step as f64 * dt;
            let diag = StateDiagnostics::of(&sym);
            diag.check().map_err(|e| {
                LiouvilleError::StepSizeTooLarge(format!("state invariant violated at t = {t}: {e}"))
            })?;
            times.push(t);
            states.push(DensityMatrix::from_checked(sym));
        }
    }
    Ok(Trajectory { times, states })
}

/// Probe and pump optical coherences ⟨m|ρ|n⟩ in the rotated frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpticalCoherences {
    pub r14: Complex64,
    pub r24: Complex64,
    pub r13: Complex64,
    pub r23: Complex64,
}

impl OpticalCoherences {
    pub const ZERO: Self = Self { r14: ZERO, r24: ZERO, r13: ZERO, r23: ZERO };
}

pub fn exact_coherences(rho: &DensityMatrix) -> OpticalCoherences {
    assert_eq!(rho.dim(), 4, "exact coherences need the four-level state");
    OpticalCoherences { r14: rho.get(1, 4), r24: rho.get(2, 4), r13: rho.get(1, 3), r23: rho.get(2, 3) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_config, AtomLevels, DoubleLambdaConfig, DriveField};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    pub(crate) fn fig2(delta4: f64, phi: f64) -> ValidatedConfig {
        let mut levels = AtomLevels::rubidium87();
        levels.gamma4 = 1.05;
        let c = DoubleLambdaConfig {
            levels,
            d13: DriveField::new(10.0, 1.0, 0.0),
            d23: DriveField::new(7.0, 1.0, 0.0),
            d14: DriveField::new(0.2, delta4, 0.0),
            d24: DriveField::new(0.5, delta4, 0.0),
            ground_decoherence: 0.0,
        };
        validate_config(c.with_closed_loop_phase(phi)).unwrap()
    }

    fn pumps_only(o13: f64, o23: f64, d3: f64) -> ValidatedConfig {
        let c = DoubleLambdaConfig {
            levels: AtomLevels::rubidium87(),
            d13: DriveField::new(o13, d3, 0.0),
            d23: DriveField::new(o23, d3, 0.0),
            d14: DriveField::new(0.0, 5.0, 0.0),
            d24: DriveField::new(0.0, 5.0, 0.0),
            ground_decoherence: 0.0,
        };
        validate_config(c).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_drive_gives_zero_hamiltonian() {
        let v = pumps_only(0.0, 0.0, 0.0);
        let h = build_hamiltonian_rwa(&v);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(h[(i, j)].norm(), 0.0);
                }
            }
        }
        assert_eq!(h[(3, 3)].re, -5.0);
    }

    #[test]
    fn hamiltonian_is_hermitian_and_carries_loop_phase_on_24() {
        let h = build_hamiltonian_rwa(&fig2(3.0, 1.1));
        assert_abs_diff_eq!((&h - h.adjoint()).norm(), 0.0);
        assert_abs_diff_eq!(h[(3, 1)].arg(), 1.1 - PI, epsilon = 1e-14);
        assert_eq!(h[(0, 1)], ZERO);
        assert_eq!(h[(2, 3)], ZERO);
    }

    #[test]
    fn pump_block_reproduces_light_shift() {
        // Far detuned, Γ-free block: the bright-state eigenvalue is Ω₃²/(4δ₃) + O(Ω₃⁴/δ₃³).
        let v = pumps_only(1.0, 0.7, 200.0);
        let h = build_hamiltonian_rwa(&v).view((0, 0), (3, 3)).into_owned();
        let eig = h.symmetric_eigenvalues();
        let omega3_sq: f64 = 1.0 + 0.49;
        let l3 = omega3_sq / (1.0 + 4.0 * 200.0f64.powi(2));
        let shift = eig.iter().copied().find(|e| e.abs() < 1.0 && e.abs() > 1e-12).unwrap();
        assert!((shift - l3 * 200.0).abs() < 1e-3 * l3 * 200.0, "{shift} vs {}", l3 * 200.0);
    }

    #[test]
    fn pure_decay_from_level3() {
        let v = pumps_only(0.0, 0.0, 0.0);
        let l = build_liouvillian(&v, &DecayModel::default()).unwrap();
        assert!(l.trace_leak() < 1e-12);
        let rho0 = DensityMatrix::basis(4, 2);
        let traj = evolve(&l, &rho0, Schedule { t_final: 5.0, dt: 0.01, sample_every: 10 }).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            assert!((s.get(3, 3).re - (-t).exp()).abs() < 1e-6);
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-12);
        }
        let last = traj.last();
        assert!((last.get(1, 1).re - last.get(2, 2).re).abs() < 1e-12);
    }

    #[test]
    fn zero_generator_keeps_state() {
        let l = Liouvillian::from_parts(DMatrix::zeros(2, 2), vec![]);
        let m = DMatrix::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.7, 0.0)]);
        let rho0 = DensityMatrix::new(m).unwrap();
        let traj = evolve(&l, &rho0, Schedule { t_final: 1.0, dt: 0.1, sample_every: 1 }).unwrap();
        assert!(traj.states.iter().all(|s| s.distance(&rho0) == 0.0));
    }

    #[test]
    fn step_size_guard() {
        let l = build_liouvillian(&fig2(5.0, 0.0), &DecayModel::default()).unwrap();
        let rho0 = DensityMatrix::basis(4, 0);
        let err = evolve(&l, &rho0, Schedule { t_final: 1.0, dt: 0.1, sample_every: 1 }).unwrap_err();
        assert!(matches!(err, LiouvilleError::StepSizeTooLarge(_)));
    }

    #[test]
    fn trace_preserving_for_any_branching() {
        for (b3, b4) in [(0.0, 1.0), (0.3, 0.7), (1.0, 0.0)] {
            let l = build_liouvillian(&fig2(-7.0, 2.0), &DecayModel { branching3: b3, branching4: b4 }).unwrap();
            assert!(l.trace_leak() < 1e-12);
        }
        let bad = DecayModel { branching3: 1.5, branching4: 0.5 };
        assert!(build_liouvillian(&fig2(1.0, 0.0), &bad).is_err());
    }

    #[test]
    fn pumps_only_traps_in_dark_state() {
        let v = pumps_only(10.0, 7.0, 1.0);
        let rho = steady_state(&build_liouvillian(&v, &DecayModel::default()).unwrap()).unwrap();
        let n = 149f64.sqrt();
        let dark = DVector::from_vec(vec![c(7.0 / n, 0.0), c(-10.0 / n, 0.0), ZERO, ZERO]);
        assert!(rho.expectation(&dark) > 1.0 - 1e-8);
    }

    #[test]
    fn undriven_atom_is_degenerate() {
        let v = pumps_only(0.0, 0.0, 0.0);
        // ρ11, ρ22 and the undamped ground coherence pair
        let err = steady_state(&build_liouvillian(&v, &DecayModel::default()).unwrap()).unwrap_err();
        assert!(matches!(err, LiouvilleError::DegenerateSteadyState(4)), "{err:?}");
        let mut raw = v.config().clone();
        raw.ground_decoherence = 0.1;
        let dephased = validate_config(raw).unwrap();
        let err = steady_state(&build_liouvillian(&dephased, &DecayModel::default()).unwrap()).unwrap_err();
        assert!(matches!(err, LiouvilleError::DegenerateSteadyState(2)), "{err:?}");
    }

    #[test]
    fn nonzero_two_photon_detuning_still_solves() {
        let v = validate_config(fig2(4.0, 0.3).into_config().with_two_photon_detuning(0.2)).unwrap();
        let rho = steady_state(&build_liouvillian(&v, &DecayModel::default()).unwrap()).unwrap();
        rho.diagnostics().check().unwrap();
    }

    #[test]
    fn ground_dephasing_damps_ground_coherence_at_gamma() {
        let mut cfg = pumps_only(0.0, 0.0, 0.0).into_config();
        cfg.ground_decoherence = 0.3;
        let v = validate_config(cfg).unwrap();
        let l = build_liouvillian(&v, &DecayModel::default()).unwrap();
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = c(1.0, 0.0);
        assert_abs_diff_eq!(l.apply(&m)[(0, 1)].re, -0.3, epsilon = 1e-15);
    }

    #[test]
    fn fig2_regression_fixture() {
        let rho = steady_state(&build_liouvillian(&fig2(0.0, PI / 4.0), &DecayModel::default()).unwrap()).unwrap();
        let co = exact_coherences(&rho);
        let tol = 1e-10;
        assert_abs_diff_eq!(co.r14.re, 0.11039014545457823, epsilon = tol);
        assert_abs_diff_eq!(co.r14.im, 0.06668781944072355, epsilon = tol);
        assert_abs_diff_eq!(co.r24.re, -0.1584181075620979, epsilon = tol);
        assert_abs_diff_eq!(co.r24.im, -0.09495901603954607, epsilon = tol);
        assert_abs_diff_eq!(co.r13.re, -0.012418390784043986, epsilon = tol);
        assert_abs_diff_eq!(co.r13.im, -0.00895638947734253, epsilon = tol);
        assert_abs_diff_eq!(co.r23.re, -0.003979400843687736, epsilon = tol);
        assert_abs_diff_eq!(co.r23.im, 0.0019080014661216533, epsilon = tol);
        let pops = rho.populations();
        let expected = [0.3079848202388781, 0.5431932216696074, 0.076207884510574, 0.07261407358094049];
        for (p, e) in pops.iter().zip(expected) {
            assert_abs_diff_eq!(*p, e, epsilon = tol);
        }
        assert_eq!(rho.get(4, 1), co.r14.conj());
    }

    #[test]
    fn ground_state_has_no_coherences() {
        let co = exact_coherences(&DensityMatrix::basis(4, 0));
        assert_eq!(co, OpticalCoherences::ZERO);
    }

    #[test]
    fn evolution_converges_to_steady_state() {
        let l = build_liouvillian(&fig2(0.0, PI / 4.0), &DecayModel::default()).unwrap();
        let ss = steady_state(&l).unwrap();
        let sched = Schedule::for_liouvillian(&l, 150.0, 0.04, 1000);
        let traj = evolve(&l, &DensityMatrix::basis(4, 0), sched).unwrap();
        assert!((traj.times.last().unwrap() - 150.0).abs() < 1e-9);
        assert!(traj.last().distance(&ss) < 1e-6);
    }

    #[test]
    fn json_dump_has_expected_shape() {
        let l = build_liouvillian(&fig2(2.0, 0.0), &DecayModel::default()).unwrap();
        let j = l.to_json();
        assert_eq!(j["superoperator"].as_array().unwrap().len(), 16);
        assert_eq!(j["hamiltonian"][3][1][0].as_f64().unwrap(), -0.25);
    }
}
