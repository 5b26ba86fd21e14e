use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::effective::{dark_bright, solve_effective};
use crate::liouville::{build_liouvillian, exact_coherences, steady_state, DecayModel, OpticalCoherences};
use crate::model::ValidatedConfig;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Exact,
    Effective,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Effective => "effective",
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Engine::Exact),
            "effective" => Ok(Engine::Effective),
            other => Err(format!("unknown engine '{other}' (expected exact or effective)")),
        }
    }
}

/// Steady-state observables shared by both engines.
///
/// For the effective engine the excited populations and pump coherences are
/// the adiabatic estimates, and the ground block comes from the two-level
/// solution, so the four populations sum to 1 only to leading order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointSolution {
    pub engine: Engine,
    pub coherences: OpticalCoherences,
    pub rho12: Complex64,
    pub populations: [f64; 4],
    /// ⟨D|ρ|D⟩ and ⟨B|ρ|B⟩; absent when the pump Λ is undriven.
    pub pop_d: Option<f64>,
    pub pop_b: Option<f64>,
}

pub fn solve_point(cfg: &ValidatedConfig, decay: &DecayModel, engine: Engine) -> Result<PointSolution, Error> {
    match engine {
        Engine::Exact => {
            let rho = steady_state(&build_liouvillian(cfg, decay)?)?;
            let p = rho.populations();
            let (pop_d, pop_b) = match dark_bright(cfg) {
                Ok(basis) => {
                    let row = |r: usize| {
                        let mut v = DVector::zeros(4);
                        v[0] = basis.transform[(r, 0)].conj();
                        v[1] = basis.transform[(r, 1)].conj();
                        rho.expectation(&v)
                    };
                    (Some(row(0)), Some(row(1)))
                }
                Err(_) => (None, None),
            };
            Ok(PointSolution {
                engine,
                coherences: exact_coherences(&rho),
                rho12: rho.get(1, 2),
                populations: [p[0], p[1], p[2], p[3]],
                pop_d,
                pop_b,
            })
        }
        Engine::Effective => {
            let sol = solve_effective(cfg)?;
            let r = sol.coherences;
            Ok(PointSolution {
                engine,
                coherences: OpticalCoherences { r14: r.r14, r24: r.r24, r13: r.r13, r23: r.r23 },
                rho12: r.r12,
                populations: [r.r11, r.r22, r.r33, r.r44],
                pop_d: Some(sol.rho2.get(1, 1).re),
                pop_b: Some(sol.rho2.get(2, 2).re),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_config, DoubleLambdaConfig};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn engines_agree_far_from_probe_resonance() {
        let v = validate_config(DoubleLambdaConfig::equal_beams(10.0, 0.5, 10.0, 25.0, FRAC_PI_4)).unwrap();
        let ex = solve_point(&v, &DecayModel::default(), Engine::Exact).unwrap();
        let ef = solve_point(&v, &DecayModel::default(), Engine::Effective).unwrap();
        let peak = ex.coherences.r14.norm().max(ex.coherences.r24.norm());
        assert!((ex.coherences.r14 - ef.coherences.r14).norm() < 0.05 * peak);
        assert!((ex.coherences.r24 - ef.coherences.r24).norm() < 0.05 * peak);
        assert!((ex.pop_d.unwrap() - ef.pop_d.unwrap()).abs() < 1e-3);
    }

    #[test]
    fn engine_names_round_trip() {
        for e in [Engine::Exact, Engine::Effective] {
            assert_eq!(e.name().parse::<Engine>().unwrap(), e);
        }
        assert!("both".parse::<Engine>().is_err());
    }
}
