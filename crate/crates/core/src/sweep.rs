//! 1-D and 2-D parameter grids over the steady-state engines.
//!
//! CSV layout:
//!
//! ```text
//! # config-hash=<sha256 of the scenario and sweep spec>
//! index,<axis1>[,<axis2>],engine,<obs>_<engine>...,[<obs>_dev...],error
//! ```
//!
//! Floats carry 17 significant digits; a cell that could not be computed holds
//! `ERR` and the reason is written to the `error` column.

use std::f64::consts::TAU;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::config::Scenario;
use crate::engine::{solve_point, Engine, PointSolution};
use crate::medium::{susceptibility, MediumResponse};
use crate::model::{validate_config, DoubleLambdaConfig};

pub const ERR_MARKER: &str = "ERR";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("bad axis '{0}': expected name:lo:hi:points")]
    AxisSyntax(String),
    #[error("unknown sweep parameter '{0}'")]
    UnknownParameter(String),
    #[error("unknown observable '{0}'")]
    UnknownObservable(String),
    #[error("axis {0}: {1}")]
    BadRange(String, String),
    #[error("observable {0} needs medium parameters (density_si) in the scenario")]
    MissingMedium(&'static str),
    #[error("both axes sweep {0}")]
    DuplicateAxis(&'static str),
    #[error("no observables requested")]
    NoOutputs,
}

macro_rules! named_enum {
    ($(#[$m:meta])* $name:ident, $err:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl FromStr for $name {
            type Err = SweepError;
            fn from_str(s: &str) -> Result<Self, SweepError> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(SweepError::$err(other.to_string())),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.name())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

named_enum!(
    /// Scenario quantity varied along a sweep axis.
    SweepParam, UnknownParameter {
        Delta4 => "delta4",
        Delta3 => "delta3",
        TwoPhoton => "delta",
        Phi0 => "phi0",
        Omega3 => "omega3",
        Omega4 => "omega4",
        Omega13 => "omega13",
        Omega23 => "omega23",
        Omega14 => "omega14",
        Omega24 => "omega24",
        Gamma4 => "gamma4",
        GroundDecoherence => "ground_decoherence",
    }
);

named_enum!(
    Observable, UnknownObservable {
        Rho14Re => "rho14_re",
        Rho14Im => "rho14_im",
        Rho24Re => "rho24_re",
        Rho24Im => "rho24_im",
        Rho13Re => "rho13_re",
        Rho13Im => "rho13_im",
        Rho23Re => "rho23_re",
        Rho23Im => "rho23_im",
        Rho12Re => "rho12_re",
        Rho12Im => "rho12_im",
        Pop1 => "pop1",
        Pop2 => "pop2",
        Pop3 => "pop3",
        Pop4 => "pop4",
        PopD => "pop_D",
        PopB => "pop_B",
        Alpha14 => "alpha14",
        Alpha24 => "alpha24",
        Xi14Re => "xi14_re",
        Xi14Im => "xi14_im",
        Xi24Re => "xi24_re",
        Xi24Im => "xi24_im",
    }
);

/// Scales a pair of Rabi frequencies to a new effective magnitude, keeping their ratio.
fn scale_pair(a: &mut f64, b: &mut f64, target: f64) {
    let now = a.hypot(*b);
    if now > 0.0 {
        *a *= target / now;
        *b *= target / now;
    } else {
        *a = target / 2f64.sqrt();
        *b = target / 2f64.sqrt();
    }
}

impl SweepParam {
    pub fn apply(self, mut cfg: DoubleLambdaConfig, value: f64) -> DoubleLambdaConfig {
        match self {
            SweepParam::Delta4 => return cfg.with_probe_detuning(value),
            SweepParam::Delta3 => return cfg.with_pump_detuning(value),
            SweepParam::TwoPhoton => return cfg.with_two_photon_detuning(value),
            SweepParam::Phi0 => return cfg.with_closed_loop_phase(value),
            SweepParam::Omega3 => scale_pair(&mut cfg.d13.rabi, &mut cfg.d23.rabi, value),
            SweepParam::Omega4 => scale_pair(&mut cfg.d14.rabi, &mut cfg.d24.rabi, value),
            SweepParam::Omega13 => cfg.d13.rabi = value,
            SweepParam::Omega23 => cfg.d23.rabi = value,
            SweepParam::Omega14 => cfg.d14.rabi = value,
            SweepParam::Omega24 => cfg.d24.rabi = value,
            SweepParam::Gamma4 => cfg.levels.gamma4 = value,
            SweepParam::GroundDecoherence => cfg.ground_decoherence = value,
        }
        cfg
    }
}

impl Observable {
    pub fn needs_medium(self) -> bool {
        matches!(
            self,
            Observable::Alpha14
                | Observable::Alpha24
                | Observable::Xi14Re
                | Observable::Xi14Im
                | Observable::Xi24Re
                | Observable::Xi24Im
        )
    }

    pub fn evaluate(self, sol: &PointSolution, medium: Option<&Result<MediumResponse, String>>) -> Result<f64, String> {
        let co = &sol.coherences;
        let from_medium = |f: fn(&MediumResponse) -> f64| match medium {
            Some(Ok(r)) => Ok(f(r)),
            Some(Err(e)) => Err(e.clone()),
            None => Err("no medium".to_string()),
        };
        Ok(match self {
            Observable::Rho14Re => co.r14.re,
            Observable::Rho14Im => co.r14.im,
            Observable::Rho24Re => co.r24.re,
            Observable::Rho24Im => co.r24.im,
            Observable::Rho13Re => co.r13.re,
            Observable::Rho13Im => co.r13.im,
            Observable::Rho23Re => co.r23.re,
            Observable::Rho23Im => co.r23.im,
            Observable::Rho12Re => sol.rho12.re,
            Observable::Rho12Im => sol.rho12.im,
            Observable::Pop1 => sol.populations[0],
            Observable::Pop2 => sol.populations[1],
            Observable::Pop3 => sol.populations[2],
            Observable::Pop4 => sol.populations[3],
            Observable::PopD => sol.pop_d.ok_or("pop_D undefined without pump")?,
            Observable::PopB => sol.pop_b.ok_or("pop_B undefined without pump")?,
            Observable::Alpha14 => from_medium(|r| r.alpha14)?,
            Observable::Alpha24 => from_medium(|r| r.alpha24)?,
            Observable::Xi14Re => from_medium(|r| r.xi14.re)?,
            Observable::Xi14Im => from_medium(|r| r.xi14.im)?,
            Observable::Xi24Re => from_medium(|r| r.xi24.re)?,
            Observable::Xi24Im => from_medium(|r| r.xi24.im)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(param: SweepParam, lo: f64, hi: f64, points: usize) -> Result<Self, SweepError> {
        let axis = Self { param, lo, hi, points };
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(SweepError::BadRange(param.name().into(), "range must be finite".into()));
        }
        if points == 0 {
            return Err(SweepError::BadRange(param.name().into(), "needs at least one point".into()));
        }
        Ok(axis)
    }

    /// Evenly spaced values including both ends; a single point sits at `lo`.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let last = (self.points - 1) as f64;
        (0..self.points).map(|i| self.lo + (self.hi - self.lo) * (i as f64) / last).collect()
    }
}

impl FromStr for Axis {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, SweepError> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, lo, hi, n] = parts.as_slice() else {
            return Err(SweepError::AxisSyntax(s.into()));
        };
        let num = |t: &str| -> Result<f64, SweepError> {
            match t.trim() {
                "pi" => Ok(std::f64::consts::PI),
                "2pi" => Ok(TAU),
                other => other.parse().map_err(|_| SweepError::AxisSyntax(s.into())),
            }
        };
        let points = n.trim().parse().map_err(|_| SweepError::AxisSyntax(s.into()))?;
        Axis::new(name.trim().parse()?, num(lo)?, num(hi)?, points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Exact,
    Effective,
    Both,
}

impl EngineChoice {
    pub fn engines(self) -> Vec<Engine> {
        match self {
            EngineChoice::Exact => vec![Engine::Exact],
            EngineChoice::Effective => vec![Engine::Effective],
            EngineChoice::Both => vec![Engine::Exact, Engine::Effective],
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            EngineChoice::Exact => "exact",
            EngineChoice::Effective => "effective",
            EngineChoice::Both => "exact+effective",
        }
    }
}

impl FromStr for EngineChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(EngineChoice::Exact),
            "effective" => Ok(EngineChoice::Effective),
            "both" => Ok(EngineChoice::Both),
            other => Err(format!("unknown engine '{other}' (expected exact, effective or both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub engine: EngineChoice,
    pub outputs: Vec<Observable>,
}

pub const DEFAULT_OUTPUTS: &[Observable] = &[
    Observable::Rho14Re,
    Observable::Rho14Im,
    Observable::Rho24Re,
    Observable::Rho24Im,
    Observable::PopD,
    Observable::PopB,
];

impl SweepSpec {
    pub fn validate(&self, scenario: &Scenario) -> Result<(), SweepError> {
        if self.outputs.is_empty() {
            return Err(SweepError::NoOutputs);
        }
        if let Some(a2) = &self.axis2 {
            if a2.param == self.axis1.param {
                return Err(SweepError::DuplicateAxis(a2.param.name()));
            }
        }
        if scenario.medium.is_none() {
            if let Some(o) = self.outputs.iter().find(|o| o.needs_medium()) {
                return Err(SweepError::MissingMedium(o.name()));
            }
        }
        Ok(())
    }

    pub fn grid_size(&self) -> usize {
        self.axis1.points * self.axis2.map_or(1, |a| a.points)
    }

    /// Grids matching the shipped presets.
    pub fn preset(name: &str) -> Option<Self> {
        let axis = |s: &str| s.parse::<Axis>().expect("preset axis");
        let alphas = vec![Observable::Alpha14, Observable::Alpha24];
        Some(match name {
            "fig2" => SweepSpec {
                axis1: axis("delta4:-50:50:501"),
                axis2: Some(Axis::new(SweepParam::Phi0, 0.0, std::f64::consts::FRAC_PI_4, 2).expect("preset axis")),
                engine: EngineChoice::Both,
                outputs: DEFAULT_OUTPUTS[..4].to_vec(),
            },
            "fig3" => SweepSpec {
                axis1: axis("delta4:-50:50:201"),
                axis2: Some(axis("phi0:0:2pi:181")),
                engine: EngineChoice::Exact,
                outputs: alphas,
            },
            "fig4" => SweepSpec { axis1: axis("phi0:0:2pi:721"), axis2: None, engine: EngineChoice::Exact, outputs: alphas },
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub coords: Vec<f64>,
    /// One entry per data column; `None` is written as the error marker.
    pub cells: Vec<Option<f64>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepMetadata {
    pub engine_version: &'static str,
    pub scenario: serde_json::Value,
    pub spec: SweepSpec,
    pub grid_size: usize,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub config_hash: String,
    pub axis_names: Vec<&'static str>,
    pub engine_tag: &'static str,
    pub data_columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

/// SHA-256 over the canonical JSON of the scenario and the sweep spec.
pub fn config_hash(scenario: &Scenario, spec: &SweepSpec) -> String {
    let canonical = serde_json::to_string(&(scenario, spec)).expect("scenario serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn data_columns(spec: &SweepSpec) -> Vec<String> {
    let mut cols = Vec::new();
    for e in spec.engine.engines() {
        cols.extend(spec.outputs.iter().map(|o| format!("{}_{}", o.name(), e.name())));
    }
    if spec.engine == EngineChoice::Both {
        cols.extend(spec.outputs.iter().map(|o| format!("{}_dev", o.name())));
    }
    cols
}

fn clean(msg: &str) -> String {
    msg.replace([',', '\n', '\r', '"'], ";")
}

fn evaluate_point(scenario: &Scenario, spec: &SweepSpec, index: usize, coords: Vec<f64>) -> SweepRow {
    let n_out = spec.outputs.len();
    let engines = spec.engine.engines();
    let width = n_out * engines.len() + if spec.engine == EngineChoice::Both { n_out } else { 0 };

    let mut raw = scenario.config.config().clone();
    raw = spec.axis1.param.apply(raw, coords[0]);
    if let Some(a2) = &spec.axis2 {
        raw = a2.param.apply(raw, coords[1]);
    }
    let cfg = match validate_config(raw) {
        Ok(c) => c,
        Err(e) => {
            return SweepRow { index, coords, cells: vec![None; width], error: Some(clean(&format!("config: {e}"))) };
        }
    };

    let mut cells = Vec::with_capacity(width);
    let mut errors = Vec::new();
    let mut per_engine: Vec<Vec<Option<f64>>> = Vec::new();
    for engine in &engines {
        let values: Vec<Option<f64>> = match solve_point(&cfg, &scenario.decay, *engine) {
            Ok(sol) => {
                let resp = scenario
                    .medium
                    .as_ref()
                    .map(|m| susceptibility(&cfg, &sol.coherences, m).map_err(|e| e.to_string()));
                let mut first_err = None;
                let vals = spec
                    .outputs
                    .iter()
                    .map(|o| match o.evaluate(&sol, resp.as_ref()) {
                        Ok(v) => Some(v),
                        Err(e) => {
                            first_err.get_or_insert(e);
                            None
                        }
                    })
                    .collect();
                if let Some(e) = first_err {
                    errors.push(format!("{engine}: {e}"));
                }
                vals
            }
            Err(e) => {
                errors.push(format!("{engine}: {e}"));
                vec![None; n_out]
            }
        };
        per_engine.push(values);
    }
    for v in &per_engine {
        cells.extend_from_slice(v);
    }
    if spec.engine == EngineChoice::Both {
        cells.extend(per_engine[0].iter().zip(&per_engine[1]).map(|(a, b)| Some((a.as_ref()? - b.as_ref()?).abs())));
    }
    let error = (!errors.is_empty()).then(|| clean(&errors.join("; ")));
    SweepRow { index, coords, cells, error }
}

pub fn run_sweep(spec: &SweepSpec, scenario: &Scenario) -> Result<SweepResult, SweepError> {
    spec.validate(scenario)?;
    let start = Instant::now();
    let v1 = spec.axis1.values();
    let v2 = spec.axis2.map(|a| a.values());
    let n2 = v2.as_ref().map_or(1, Vec::len);

    let rows: Vec<SweepRow> = (0..spec.grid_size())
        .into_par_iter()
        .map(|index| {
            let mut coords = vec![v1[index / n2]];
            if let Some(v2) = &v2 {
                coords.push(v2[index % n2]);
            }
            evaluate_point(scenario, spec, index, coords)
        })
        .collect();

    let mut axis_names = vec![spec.axis1.param.name()];
    if let Some(a2) = &spec.axis2 {
        axis_names.push(a2.param.name());
    }
    Ok(SweepResult {
        config_hash: config_hash(scenario, spec),
        axis_names,
        engine_tag: spec.engine.tag(),
        data_columns: data_columns(spec),
        rows,
        metadata: SweepMetadata {
            engine_version: env!("CARGO_PKG_VERSION"),
            scenario: serde_json::to_value(scenario).expect("scenario serializes"),
            spec: spec.clone(),
            grid_size: spec.grid_size(),
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepResult {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["index".to_string()];
        h.extend(self.axis_names.iter().map(|s| s.to_string()));
        h.push("engine".into());
        h.extend(self.data_columns.iter().cloned());
        h.push("error".into());
        h
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# config-hash={}", self.config_hash).unwrap();
        writeln!(out, "{}", self.header().join(",")).unwrap();
        for row in &self.rows {
            let mut fields = vec![row.index.to_string()];
            fields.extend(row.coords.iter().map(|&x| fmt_float(x)));
            fields.push(self.engine_tag.into());
            fields.extend(row.cells.iter().map(|c| c.map_or_else(|| ERR_MARKER.to_string(), fmt_float)));
            fields.push(row.error.clone().unwrap_or_default());
            writeln!(out, "{}", fields.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<serde_json::Value> = r
                    .cells
                    .iter()
                    .map(|c| c.map_or_else(|| serde_json::Value::String(ERR_MARKER.into()), |x| serde_json::json!(x)))
                    .collect();
                serde_json::json!({
                    "index": r.index,
                    "coords": r.coords,
                    "engine": self.engine_tag,
                    "values": cells,
                    "error": r.error,
                })
            })
            .collect();
        serde_json::json!({
            "config_hash": self.config_hash,
            "axes": self.axis_names,
            "columns": self.data_columns,
            "rows": rows,
            "metadata": self.metadata,
        })
    }

    /// Column index into `cells` by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.data_columns.iter().position(|c| c == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_scenario;

    fn scenario() -> Scenario {
        parse_scenario(
            "omega13_rabi = 10\nomega23_rabi = 7\nomega14_rabi = 0.2\nomega24_rabi = 0.5\n\
             delta13 = 1\ndelta23 = 1\ndelta14 = 10\ndelta24 = 10\ngamma4 = 1.05\n\
             density_si = 1e15\ndipole14_si = 3.584e-29\ndipole24_si = 3.584e-29\n",
        )
        .unwrap()
    }

    #[test]
    fn axis_parsing() {
        let a: Axis = "delta4:-50:50:501".parse().unwrap();
        assert_eq!((a.param, a.lo, a.hi, a.points), (SweepParam::Delta4, -50.0, 50.0, 501));
        let v = a.values();
        assert_eq!(v[250], 0.0);
        assert_eq!(v[500], 50.0);
        let p: Axis = "phi0:0:2pi:4".parse().unwrap();
        assert_eq!(p.hi, TAU);
        assert!(matches!("delta4:-1:1".parse::<Axis>(), Err(SweepError::AxisSyntax(_))));
        assert!(matches!("warp:0:1:3".parse::<Axis>(), Err(SweepError::UnknownParameter(_))));
        assert!(matches!("delta4:0:inf:3".parse::<Axis>(), Err(SweepError::BadRange(..))));
        assert!(matches!("delta4:0:1:0".parse::<Axis>(), Err(SweepError::BadRange(..))));
    }

    #[test]
    fn one_point_sweep_equals_direct_call() {
        let s = scenario();
        let spec = SweepSpec {
            axis1: "delta4:10:10:1".parse().unwrap(),
            axis2: None,
            engine: EngineChoice::Exact,
            outputs: vec![Observable::Rho14Re, Observable::Rho14Im],
        };
        let r = run_sweep(&spec, &s).unwrap();
        assert_eq!(r.rows.len(), 1);
        let direct = solve_point(&s.config, &s.decay, Engine::Exact).unwrap();
        assert_eq!(r.rows[0].cells, vec![Some(direct.coherences.r14.re), Some(direct.coherences.r14.im)]);
    }

    #[test]
    fn both_engines_emit_deviation_and_error_markers() {
        let spec = SweepSpec {
            axis1: "delta4:-1:1:3".parse().unwrap(),
            axis2: None,
            engine: EngineChoice::Both,
            outputs: vec![Observable::Rho14Im, Observable::Alpha14],
        };
        let r = run_sweep(&spec, &scenario()).unwrap();
        assert_eq!(
            r.header(),
            ["index", "delta4", "engine", "rho14_im_exact", "alpha14_exact", "rho14_im_effective", "alpha14_effective", "rho14_im_dev", "alpha14_dev", "error"]
        );
        let mid = &r.rows[1];
        assert!(mid.cells[0].is_some() && mid.cells[2].is_none() && mid.cells[4].is_none());
        assert!(mid.error.as_deref().unwrap().starts_with("effective:"));
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# config-hash=") && lines[0].len() == 14 + 64);
        assert_eq!(lines.len(), 2 + 3);
        assert!(lines[3].contains(",ERR,"));
        assert!(lines[2].split(',').all(|f| f != "NaN"));
        assert_eq!(lines[2].split(',').count(), 10);
    }

    #[test]
    fn grid_order_and_determinism() {
        let spec = SweepSpec {
            axis1: "delta4:5:15:4".parse().unwrap(),
            axis2: Some("phi0:0:3:3".parse().unwrap()),
            engine: EngineChoice::Effective,
            outputs: vec![Observable::Alpha24],
        };
        let a = run_sweep(&spec, &scenario()).unwrap();
        assert_eq!(a.rows.len(), 12);
        assert_eq!(a.rows[3].coords, vec![5.0 + 10.0 / 3.0, 0.0]);
        assert_eq!(a.rows[4].coords, vec![5.0 + 10.0 / 3.0, 1.5]);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| run_sweep(&spec, &scenario()).unwrap());
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn spec_validation() {
        let mut s = scenario();
        s.medium = None;
        let spec = SweepSpec {
            axis1: "delta4:5:15:4".parse().unwrap(),
            axis2: None,
            engine: EngineChoice::Exact,
            outputs: vec![Observable::Alpha14],
        };
        assert_eq!(run_sweep(&spec, &s).unwrap_err(), SweepError::MissingMedium("alpha14"));
        let dup = SweepSpec { axis2: Some("delta4:0:1:2".parse().unwrap()), ..spec.clone() };
        assert!(matches!(dup.validate(&scenario()), Err(SweepError::DuplicateAxis(_))));
        assert!(SweepSpec::preset("fig3").unwrap().grid_size() == 201 * 181);
        assert!(SweepSpec::preset("nope").is_none());
    }

    #[test]
    fn hash_tracks_scenario() {
        let spec = SweepSpec::preset("fig4").unwrap();
        let a = config_hash(&scenario(), &spec);
        let mut other = scenario();
        other.decay.branching3 = 0.4;
        assert_ne!(a, config_hash(&other, &spec));
        assert_eq!(a, config_hash(&scenario(), &spec));
    }
}
