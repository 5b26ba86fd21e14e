use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dlambda::adiabatic::verify_adiabaticity;
use dlambda::cavity::{
    find_equal_gain_points, lasing_feasibility, threshold_gain, CavityError, CavitySpec, GainModel, LasingPoint,
    SearchSettings,
};
use dlambda::config::{load_scenario, ConfigError, Scenario, SCHEMA};
use dlambda::density::DensityMatrix;
use dlambda::engine::{solve_point, Engine};
use dlambda::liouville::{build_liouvillian, evolve, Schedule, MAX_STEP_FRACTION};
use dlambda::medium::{calibrate_common_prefactor, susceptibility};
use dlambda::model::validate_config;
use dlambda::presets;
use dlambda::sweep::{run_sweep, Axis, EngineChoice, Observable, SweepSpec, DEFAULT_OUTPUTS};
use dlambda::Error;

#[derive(Parser)]
#[command(name = "dlambda", version, about = "Double-lambda atom: steady states, probe gain and ring-cavity lasing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file (flat key = value)
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in scenario: fig2, fig3 or fig4
    #[arg(long)]
    preset: Option<String>,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for grid evaluation
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Steady state at one operating point
    Point {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "exact")]
        engine: EngineChoice,
        /// Override the probe common detuning δ₄
        #[arg(long, allow_hyphen_values = true)]
        delta4: Option<f64>,
        /// Override the closed-loop phase Φ₀
        #[arg(long, allow_hyphen_values = true)]
        phi0: Option<f64>,
        /// Include the Hamiltonian, collapse operators and Liouvillian
        #[arg(long)]
        dump_operators: bool,
    },
    /// 1-D or 2-D parameter grid
    Sweep {
        #[command(flatten)]
        common: Common,
        /// name:lo:hi:points, given once or twice
        #[arg(long, allow_hyphen_values = true)]
        axis: Vec<Axis>,
        #[arg(long)]
        engine: Option<EngineChoice>,
        /// Comma-separated observables
        #[arg(long, value_delimiter = ',')]
        outputs: Vec<Observable>,
    },
    /// Equal-gain operating points over Φ₀ and their lasing feasibility
    LasingSearch {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        delta4: Option<f64>,
        #[arg(long, default_value_t = 720)]
        samples: usize,
        #[arg(long, default_value = "exact")]
        engine: Engine,
        /// Rescale the common dipole prefactor so the best positive crossing has this gain (m^-1)
        #[arg(long)]
        calibrate: Option<f64>,
        /// Output-coupler transmittivity (overrides the scenario)
        #[arg(long)]
        transmittivity: Option<f64>,
    },
    /// Time evolution from |1⟩⟨1|
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 50.0)]
        t_final: f64,
        /// Step as a fraction of the inverse fastest rate
        #[arg(long, default_value_t = 0.04)]
        step_fraction: f64,
        #[arg(long, default_value_t = 10)]
        sample_every: usize,
    },
    /// Compare exact excited coherences with the adiabatic prediction over time
    VerifyAdiabatic {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 60.0)]
        t_final: f64,
    },
    /// Cavity length, threshold gain and per-pass gain
    Cavity {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        transmittivity: Option<f64>,
        #[arg(long)]
        mode_index: Option<u32>,
        /// Gain at which to report the per-pass gain (m^-1)
        #[arg(long)]
        alpha: Option<f64>,
    },
}

enum Failure {
    Usage(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Solver(e.to_string())
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load(common: &Common) -> Result<Scenario, Failure> {
    if let Some(threads) = common.parallel {
        if threads == 0 {
            return Err(usage("--parallel must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Solver(e.to_string()))?;
    }
    match (&common.config, &common.preset) {
        (Some(path), _) => Ok(load_scenario(path)?),
        (None, Some(name)) => presets::preset(name)
            .ok_or_else(|| usage(format!("unknown preset '{name}' (expected one of {})", presets::NAMES.join(", "))))?
            .map_err(Failure::from),
        (None, None) => Err(usage("give --config <file> or --preset <name>")),
    }
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Solver(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::Solver(e.to_string()))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn with_overrides(scenario: &mut Scenario, delta4: Option<f64>, phi0: Option<f64>) -> Result<(), Failure> {
    let mut raw = scenario.config.config().clone();
    if let Some(d4) = delta4 {
        raw = raw.with_probe_detuning(d4);
    }
    if let Some(phi) = phi0 {
        raw = raw.with_closed_loop_phase(phi);
    }
    scenario.config = validate_config(raw).map_err(Error::from)?;
    Ok(())
}

fn cmd_point(
    common: &Common,
    engine: EngineChoice,
    delta4: Option<f64>,
    phi0: Option<f64>,
    dump: bool,
) -> Result<(), Failure> {
    let mut scenario = load(common)?;
    with_overrides(&mut scenario, delta4, phi0)?;
    let cfg = &scenario.config;

    if common.format == Some(Format::Csv) {
        let spec = SweepSpec {
            axis1: Axis::new(dlambda::sweep::SweepParam::Delta4, cfg.delta4, cfg.delta4, 1).map_err(Error::from)?,
            axis2: None,
            engine,
            outputs: point_outputs(&scenario),
        };
        return emit(common, &run_sweep(&spec, &scenario).map_err(Error::from)?.to_csv());
    }

    let mut engines = serde_json::Map::new();
    for e in engine.engines() {
        let sol = solve_point(cfg, &scenario.decay, e)?;
        let mut entry = serde_json::to_value(sol).expect("solution serializes");
        if let Some(m) = &scenario.medium {
            entry["medium"] = serde_json::to_value(susceptibility(cfg, &sol.coherences, m).map_err(Error::from)?)
                .expect("response serializes");
        }
        engines.insert(e.name().to_string(), entry);
    }
    let mut out = json!({
        "config": cfg,
        "closed_loop_phase": cfg.closed_loop_phase(),
        "engines": engines,
    });
    if dump {
        let liou = build_liouvillian(cfg, &scenario.decay).map_err(Error::from)?;
        out["operators"] = liou.to_json();
    }
    emit(common, &pretty(&out))
}

fn point_outputs(scenario: &Scenario) -> Vec<Observable> {
    let mut v = DEFAULT_OUTPUTS.to_vec();
    if scenario.medium.is_some() {
        v.extend([Observable::Alpha14, Observable::Alpha24]);
    }
    v
}

fn cmd_sweep(
    common: &Common,
    axes: &[Axis],
    engine: Option<EngineChoice>,
    outputs: &[Observable],
) -> Result<(), Failure> {
    let scenario = load(common)?;
    let preset_spec = common.preset.as_deref().and_then(SweepSpec::preset);
    let spec = match (axes, preset_spec) {
        ([], Some(p)) => SweepSpec {
            engine: engine.unwrap_or(p.engine),
            outputs: if outputs.is_empty() { p.outputs } else { outputs.to_vec() },
            ..p
        },
        ([], None) => return Err(usage("give --axis name:lo:hi:points (once or twice)")),
        (axes, _) if axes.len() > 2 => return Err(usage("at most two --axis values")),
        (axes, _) => SweepSpec {
            axis1: axes[0],
            axis2: axes.get(1).copied(),
            engine: engine.unwrap_or(EngineChoice::Exact),
            outputs: if outputs.is_empty() { point_outputs(&scenario) } else { outputs.to_vec() },
        },
    };
    let result = run_sweep(&spec, &scenario).map_err(Error::from)?;
    let failed = result.rows.iter().filter(|r| r.error.is_some()).count();
    eprintln!(
        "sweep: {} points, {} with errors, {:.0} ms, config-hash {}",
        result.rows.len(),
        failed,
        result.metadata.elapsed_ms,
        result.config_hash
    );
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(common, &result.to_csv()),
        Format::Json => emit(common, &pretty(&result.to_json())),
    }
}

fn cavity_for(scenario: &Scenario, transmittivity: Option<f64>, mode_index: Option<u32>) -> Result<CavitySpec, Failure> {
    let base = scenario.cavity;
    let t = transmittivity
        .or(base.map(|c| c.transmittivity))
        .ok_or_else(|| usage("no transmittivity: set it in the scenario or pass --transmittivity"))?;
    let m = mode_index.or(base.map(|c| c.mode_index)).unwrap_or(1);
    CavitySpec::new(scenario.config.levels().ground_splitting(), m, t).map_err(|e| Error::from(e).into())
}

fn search(
    model: &GainModel,
    delta4: f64,
    settings: &SearchSettings,
    cavity: &CavitySpec,
) -> Result<Vec<LasingPoint>, Failure> {
    find_equal_gain_points(model, delta4, settings, cavity).map_err(|e| match e {
        CavityError::Evaluation { source, .. } => Failure::from(*source),
        other => Failure::Solver(other.to_string()),
    })
}

fn cmd_lasing(
    common: &Common,
    delta4: Option<f64>,
    samples: usize,
    engine: Engine,
    calibrate: Option<f64>,
    transmittivity: Option<f64>,
) -> Result<(), Failure> {
    let scenario = load(common)?;
    let medium = scenario.medium.ok_or_else(|| usage("lasing-search needs medium parameters (density_si)"))?;
    let cavity = cavity_for(&scenario, transmittivity, None)?;
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let settings = SearchSettings { samples, ..SearchSettings::default() };
    let delta4 = delta4.unwrap_or(scenario.config.delta4);
    let mut model = GainModel { base: scenario.config.clone(), decay: scenario.decay, medium, engine };
    let mut points = search(&model, delta4, &settings, &cavity)?;

    let mut calibration = Value::Null;
    if let Some(target) = calibrate {
        let best = points
            .iter()
            .filter(|p| p.alpha14 > 0.0 && p.alpha24 > 0.0)
            .max_by(|a, b| a.gain.total_cmp(&b.gain))
            .ok_or_else(|| Failure::Solver("calibration: no equal-gain crossing has both gains positive".into()))?;
        let cfg = validate_config(best.pump_context.clone()).map_err(Error::from)?;
        let sol = solve_point(&cfg, &model.decay, engine)?;
        let phase = model.medium.xi24_phase;
        let calibrated = calibrate_common_prefactor(&cfg, &sol.coherences, model.medium.density, target, phase)
            .map_err(|e| Failure::Solver(e.to_string()))?;
        calibration = json!({ "target": target, "phi0": best.phi0, "medium": calibrated });
        model.medium = calibrated;
        points = search(&model, delta4, &settings, &cavity)?;
    }

    let reports = points
        .iter()
        .map(|p| lasing_feasibility(p, &cavity).map_err(Failure::from))
        .collect::<Result<Vec<_>, _>>()?;
    for r in &reports {
        eprintln!("{r}");
    }
    let out = json!({
        "delta4": delta4,
        "crossings": points.len(),
        "points": points,
        "feasibility": reports,
        "threshold": threshold_gain(&cavity),
        "cavity": cavity,
        "calibration": calibration,
    });
    emit(common, &pretty(&out))
}

fn cmd_evolve(common: &Common, t_final: f64, step_fraction: f64, sample_every: usize) -> Result<(), Failure> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(usage("--t-final must be positive"));
    }
    if !(step_fraction > 0.0 && step_fraction <= MAX_STEP_FRACTION) {
        return Err(usage(format!("--step-fraction must lie in (0, {MAX_STEP_FRACTION}]")));
    }
    let scenario = load(common)?;
    let liou = build_liouvillian(&scenario.config, &scenario.decay).map_err(Error::from)?;
    let schedule = Schedule::for_liouvillian(&liou, t_final, step_fraction, sample_every);
    let traj = evolve(&liou, &DensityMatrix::basis(4, 0), schedule).map_err(Error::from)?;
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("t,pop1,pop2,pop3,pop4,rho14_re,rho14_im,rho24_re,rho24_im,rho12_re,rho12_im\n");
            for (t, rho) in traj.times.iter().zip(&traj.states) {
                let p = rho.populations();
                let (r14, r24, r12) = (rho.get(1, 4), rho.get(2, 4), rho.get(1, 2));
                let fields = [t, &p[0], &p[1], &p[2], &p[3], &r14.re, &r14.im, &r24.re, &r24.im, &r12.re, &r12.im];
                let line: Vec<String> = fields.iter().map(|x| format!("{x:.16e}")).collect();
                s.push_str(&line.join(","));
                s.push('\n');
            }
            emit(common, &s)
        }
        Format::Json => {
            let states: Vec<Value> = traj
                .times
                .iter()
                .zip(&traj.states)
                .map(|(t, rho)| {
                    let m: Vec<Vec<[f64; 2]>> =
                        (0..4).map(|i| (0..4).map(|j| [rho.get(i + 1, j + 1).re, rho.get(i + 1, j + 1).im]).collect()).collect();
                    json!({ "t": t, "rho": m })
                })
                .collect();
            emit(common, &pretty(&json!({ "dt": schedule.dt, "samples": states })))
        }
    }
}

fn cmd_verify(common: &Common, t_final: f64) -> Result<(), Failure> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(usage("--t-final must be positive"));
    }
    let scenario = load(common)?;
    let report = verify_adiabaticity(&scenario.config, &scenario.decay, t_final)?;
    if report.flagged {
        eprintln!("adiabatic following violated (threshold {})", report.threshold);
    }
    emit(common, &pretty(&serde_json::to_value(report).expect("report serializes")))
}

fn cmd_cavity(common: &Common, transmittivity: Option<f64>, mode_index: Option<u32>, alpha: Option<f64>) -> Result<(), Failure> {
    let scenario = load(common)?;
    let spec = cavity_for(&scenario, transmittivity, mode_index)?;
    let th = threshold_gain(&spec);
    let mut out = json!({
        "splitting_rad_per_s": spec.splitting,
        "mode_index": spec.mode_index,
        "length_m": spec.length,
        "transmittivity": spec.transmittivity,
        "threshold_m^-1": th.alpha,
        "threshold_per_pass": th.per_pass,
    });
    if let Some(a) = alpha {
        out["alpha_m^-1"] = json!(a);
        out["per_pass"] = json!(a * spec.length);
        out["above_threshold"] = json!(a >= th.alpha);
    }
    emit(common, &pretty(&out))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Point { common, engine, delta4, phi0, dump_operators } => {
            cmd_point(&common, engine, delta4, phi0, dump_operators)
        }
        Command::Sweep { common, axis, engine, outputs } => cmd_sweep(&common, &axis, engine, &outputs),
        Command::LasingSearch { common, delta4, samples, engine, calibrate, transmittivity } => {
            cmd_lasing(&common, delta4, samples, engine, calibrate, transmittivity)
        }
        Command::Evolve { common, t_final, step_fraction, sample_every } => {
            cmd_evolve(&common, t_final, step_fraction, sample_every)
        }
        Command::VerifyAdiabatic { common, t_final } => cmd_verify(&common, t_final),
        Command::Cavity { common, transmittivity, mode_index, alpha } => cmd_cavity(&common, transmittivity, mode_index, alpha),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            eprintln!("\n{SCHEMA}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{SCHEMA}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
