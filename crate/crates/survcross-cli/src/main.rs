//! Command-line surface for crossing-point analysis: locate crossings,
//! tabulate sensitivity grids, fit censored data, simulate two-arm trials,
//! and run the sample-size sweep.
//!
//! Exit codes: 0 success, 1 validation error, 2 runtime or convergence
//! failure (results are still written where the spec of the verb allows).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use survcross::crossing::{
    crossing_point, sensitivity_grid, write_sensitivity_csv, CrossingResult, CurvePair, GridRow,
    PerturbationTarget, SensitivitySweep,
};
use survcross::dataset_io::{read_two_arm_csv, write_two_arm_csv};
use survcross::inference::{
    mh_sample, FitReport, GammaPrior, PointEstimate, PriorConfig, SamplerConfig,
};
use survcross::simulation::{
    build_scenario, run_sweep_with_estimate, simulate_trial, summarize_sweep, write_summary_csv,
    write_sweep_csv, ScenarioSpec, SweepConfig, VariedParameter,
};
use survcross::weibull::WeibullParams;
use survcross::Error as LibError;

#[derive(Parser)]
#[command(
    name = "survcross",
    version,
    about = "Weibull survival-curve crossing analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate the crossing of two Weibull survival curves
    Cross(CrossArgs),
    /// Tabulate exact vs closed-form crossing-error scaling
    Sensitivity(SensitivityArgs),
    /// Fit one arm of a dataset by posterior sampling
    Fit(FitArgs),
    /// Build a fixed-crossing scenario and simulate a two-arm trial
    Simulate(SimulateArgs),
    /// Run a sample-size sweep from a JSON config
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct PairArgs {
    /// Control failure rate (1/day)
    #[arg(long)]
    l0: f64,
    /// Control shape
    #[arg(long)]
    k0: f64,
    /// Treatment failure rate (1/day)
    #[arg(long)]
    l1: f64,
    /// Treatment shape
    #[arg(long)]
    k1: f64,
}

impl PairArgs {
    fn pair(&self) -> Result<CurvePair, LibError> {
        Ok(CurvePair::new(
            WeibullParams::new(self.l0, self.k0)?,
            WeibullParams::new(self.l1, self.k1)?,
        ))
    }
}

#[derive(Args)]
struct CrossArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Follow-up window in days; reports whether t_chi falls inside (0, window]
    #[arg(long)]
    window: Option<f64>,
    /// Write the result to this file
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    Gamma,
    Z,
}

#[derive(Args)]
struct SensitivityArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Perturbation target
    #[arg(long, value_enum)]
    target: TargetArg,
    /// Single perturbation (overrides the phi range)
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long, default_value_t = -0.10)]
    phi_min: f64,
    #[arg(long, default_value_t = 0.10)]
    phi_max: f64,
    #[arg(long, default_value_t = 0.01)]
    phi_step: f64,
    /// Sweep the shape ratio (gamma) or failure ratio (z) instead of phi,
    /// holding the control curve and crossing time fixed
    #[arg(long, value_enum)]
    sweep: Option<SweepKind>,
    #[arg(long, requires = "sweep")]
    sweep_min: Option<f64>,
    #[arg(long, requires = "sweep")]
    sweep_max: Option<f64>,
    #[arg(long, requires = "sweep")]
    sweep_step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    Lambda0,
    Lambda1,
    K0,
    K1,
}

impl From<TargetArg> for PerturbationTarget {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Lambda0 => PerturbationTarget::Lambda0,
            TargetArg::Lambda1 => PerturbationTarget::Lambda1,
            TargetArg::K0 => PerturbationTarget::K0,
            TargetArg::K1 => PerturbationTarget::K1,
        }
    }
}

#[derive(Args)]
struct FitArgs {
    /// Dataset CSV (arm,time,event)
    data: PathBuf,
    /// Arm to fit: 0 = control, 1 = treatment
    #[arg(long)]
    arm: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    burn_in: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 4)]
    chains: usize,
    /// Initial proposal scale on the log parameters
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    #[arg(long, default_value_t = 0.30)]
    target_accept: f64,
    #[arg(long, default_value_t = 1.0)]
    k_prior_shape: f64,
    #[arg(long, default_value_t = 0.001)]
    k_prior_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda_prior_shape: f64,
    #[arg(long, default_value_t = 0.001)]
    lambda_prior_rate: f64,
    /// Write the JSON summary to this file (also printed to stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the pooled draws as CSV chain,iter,lambda,k
    #[arg(long)]
    chain_out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Which treatment parameter differs from control
    #[arg(long, value_enum)]
    varied: VariedArg,
    /// Signed relative difference of the varied parameter
    #[arg(long)]
    rel_diff: f64,
    /// Crossing time to solve for (days)
    #[arg(long, default_value_t = 365.0)]
    t_chi: f64,
    #[arg(long, default_value_t = 3.43e-4)]
    control_lambda: f64,
    #[arg(long, default_value_t = 1.08)]
    control_k: f64,
    /// Subjects per arm
    #[arg(long)]
    n: usize,
    /// Administrative censoring time (days)
    #[arg(long, default_value_t = 730.0)]
    censor: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output dataset CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariedArg {
    Failure,
    Shape,
}

impl From<VariedArg> for VariedParameter {
    fn from(v: VariedArg) -> Self {
        match v {
            VariedArg::Failure => VariedParameter::Failure,
            VariedArg::Shape => VariedParameter::Shape,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep configuration JSON
    #[arg(long)]
    config: PathBuf,
    /// Override the config's base_seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's replications
    #[arg(long)]
    replications: Option<usize>,
    /// Override the config's censor_time
    #[arg(long)]
    censor: Option<f64>,
    /// Point estimate pushed through the crossing formula
    #[arg(long, value_enum, default_value_t = EstimateArg::Mean)]
    point_estimate: EstimateArg,
    /// Row-level output CSV
    #[arg(long, default_value = "sweep_rows.csv")]
    out: PathBuf,
    /// Summary output CSV
    #[arg(long, default_value = "sweep_summary.csv")]
    summary_out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EstimateArg {
    Mean,
    Median,
}

impl From<EstimateArg> for PointEstimate {
    fn from(e: EstimateArg) -> Self {
        match e {
            EstimateArg::Mean => PointEstimate::Mean,
            EstimateArg::Median => PointEstimate::Median,
        }
    }
}

/// Validation failures exit 1; runtime and convergence failures exit 2.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::Validation(_) | LibError::Degenerate(_) | LibError::Csv { .. } => {
                CliError::Validation(e.to_string())
            }
            LibError::NonConvergence { .. } | LibError::Io(_) => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(format!("json: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // Usage problems are validation errors.
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.command {
        Command::Cross(args) => run_cross(args),
        Command::Sensitivity(args) => run_sensitivity(args),
        Command::Fit(args) => run_fit(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Sweep(args) => run_sweep_cmd(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// Four significant figures, for trend lines.
fn sig4(x: f64) -> String {
    format!("{x:.3e}")
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut f = BufWriter::new(
        File::create(path)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))?,
    );
    f.write_all(bytes)
        .and_then(|_| f.flush())
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct CrossOutput {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_chi_days: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    within_window: Option<bool>,
    settings: CrossSettings,
}

#[derive(Serialize)]
struct CrossSettings {
    l0: f64,
    k0: f64,
    l1: f64,
    k1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<f64>,
}

fn run_cross(args: CrossArgs) -> Result<u8, CliError> {
    if let Some(w) = args.window {
        if !w.is_finite() || w <= 0.0 {
            return Err(CliError::Validation(format!("window must be > 0, got {w}")));
        }
    }
    let pair = args.pair.pair()?;
    let result = crossing_point(&pair);
    let kind = match result {
        CrossingResult::Unique { .. } => "unique",
        CrossingResult::NoneEqualShapes => "no crossing (equal shapes)",
        CrossingResult::IdenticalCurves => "identical curves",
    };
    println!("crossing: {kind}");
    if let Some(t) = result.t_chi() {
        println!("t_chi_days: {t}");
    }
    let within = args.window.map(|w| result.within(w));
    if let (Some(w), Some(inside)) = (args.window, within) {
        println!("within_window_{w}: {inside}");
    }

    if let Some(out) = &args.out {
        let output = CrossOutput {
            kind,
            t_chi_days: result.t_chi(),
            within_window: within,
            settings: CrossSettings {
                l0: args.pair.l0,
                k0: args.pair.k0,
                l1: args.pair.l1,
                k1: args.pair.k1,
                window: args.window,
            },
        };
        let bytes = match args.format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&output)?;
                s.push('\n');
                s.into_bytes()
            }
            OutputFormat::Csv => {
                let mut s = String::from("kind,t_chi_days,within_window\n");
                s.push_str(&format!(
                    "{kind},{},{}\n",
                    output.t_chi_days.map(|t| t.to_string()).unwrap_or_default(),
                    output
                        .within_window
                        .map(|b| b.to_string())
                        .unwrap_or_default(),
                ));
                s.into_bytes()
            }
        };
        write_output(out, &bytes)?;
    }
    Ok(0)
}

fn phi_grid(args: &SensitivityArgs) -> Result<Vec<f64>, CliError> {
    if let Some(phi) = args.phi {
        return Ok(vec![phi]);
    }
    if args.phi_step <= 0.0 || !args.phi_step.is_finite() {
        return Err(CliError::Validation(format!(
            "phi-step must be > 0, got {}",
            args.phi_step
        )));
    }
    if args.phi_max < args.phi_min {
        return Err(CliError::Validation(
            "phi-max must be >= phi-min".to_string(),
        ));
    }
    Ok(range_grid(args.phi_min, args.phi_max, args.phi_step))
}

/// Inclusive grid `min, min+step, ...` with the count fixed up front so
/// accumulated rounding cannot drop the endpoint.
fn range_grid(min: f64, max: f64, step: f64) -> Vec<f64> {
    let n = ((max - min) / step).round() as usize;
    (0..=n).map(|i| min + i as f64 * step).collect()
}

#[derive(Serialize)]
struct GridRowJson {
    abscissa: f64,
    abscissa_kind: &'static str,
    phi: f64,
    target: &'static str,
    exact_ratio: Option<f64>,
    law_ratio: Option<f64>,
    exact_rel_err: Option<f64>,
    law_rel_err: Option<f64>,
}

fn rows_to_json(rows: &[GridRow]) -> Vec<GridRowJson> {
    rows.iter()
        .map(|r| GridRowJson {
            abscissa: r.abscissa,
            abscissa_kind: r.abscissa_kind.as_str(),
            phi: r.phi,
            target: r.target.as_str(),
            exact_ratio: r.exact_ratio,
            law_ratio: r.law_ratio,
            exact_rel_err: r.exact_rel_err(),
            law_rel_err: r.law_rel_err(),
        })
        .collect()
}

fn run_sensitivity(args: SensitivityArgs) -> Result<u8, CliError> {
    let pair = args.pair.pair()?;
    let phis = phi_grid(&args)?;
    let sweep = match args.sweep {
        None => None,
        Some(kind) => {
            let (min, max, step) = match (args.sweep_min, args.sweep_max, args.sweep_step) {
                (Some(a), Some(b), Some(s)) => (a, b, s),
                _ => {
                    return Err(CliError::Validation(
                        "--sweep requires --sweep-min, --sweep-max, --sweep-step".to_string(),
                    ))
                }
            };
            if step <= 0.0 || !step.is_finite() || max < min {
                return Err(CliError::Validation(
                    "sweep range must satisfy step > 0 and max >= min".to_string(),
                ));
            }
            let values = range_grid(min, max, step);
            Some(match kind {
                SweepKind::Gamma => SensitivitySweep::Gamma(values),
                SweepKind::Z => SensitivitySweep::Z(values),
            })
        }
    };

    let rows = sensitivity_grid(&pair, args.target.into(), &phis, sweep.as_ref())?;
    let bytes = match args.format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_sensitivity_csv(&rows, &mut buf).map_err(CliError::from)?;
            buf
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows_to_json(&rows))?;
            s.push('\n');
            s.into_bytes()
        }
    };
    match &args.out {
        Some(path) => write_output(path, &bytes)?,
        None => {
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct FitOutput {
    #[serde(flatten)]
    report: FitReport,
    settings: FitSettings,
}

#[derive(Serialize)]
struct FitSettings {
    arm: u8,
    n: usize,
    events: usize,
    priors: PriorConfig,
    sampler: SamplerConfig,
}

fn run_fit(args: FitArgs) -> Result<u8, CliError> {
    if args.arm > 1 {
        return Err(CliError::Validation(format!(
            "arm must be 0 or 1, got {}",
            args.arm
        )));
    }
    let file = File::open(&args.data)
        .map_err(|e| CliError::Validation(format!("cannot open {}: {e}", args.data.display())))?;
    let data = read_two_arm_csv(file)?;
    let arm_data = data.arm(args.arm).expect("arm validated above");
    if arm_data.is_empty() {
        return Err(CliError::Validation(format!(
            "arm {} has no records",
            args.arm
        )));
    }

    let priors = PriorConfig {
        k_prior: GammaPrior::new(args.k_prior_shape, args.k_prior_rate)?,
        lambda_prior: GammaPrior::new(args.lambda_prior_shape, args.lambda_prior_rate)?,
    };
    let sampler = SamplerConfig {
        burn_in: args.burn_in,
        samples: args.samples,
        chains: args.chains,
        initial_step: args.step,
        target_accept: args.target_accept,
        seed: args.seed,
    };
    sampler.validate()?;

    let chain = mh_sample(arm_data, &priors, &sampler)?;
    let output = FitOutput {
        report: FitReport::new(&chain)?,
        settings: FitSettings {
            arm: args.arm,
            n: arm_data.n(),
            events: arm_data.n_events(),
            priors,
            sampler,
        },
    };
    let mut json = serde_json::to_string_pretty(&output)?;
    json.push('\n');
    print!("{json}");
    if let Some(out) = &args.out {
        write_output(out, json.as_bytes())?;
    }
    if let Some(chain_out) = &args.chain_out {
        let mut buf = Vec::new();
        chain.write_csv(&mut buf)?;
        write_output(chain_out, &buf)?;
    }

    if chain.converged() {
        Ok(0)
    } else {
        eprintln!(
            "warning: chains look unconverged (rhat_lambda={}, rhat_k={}); results written anyway",
            chain.rhat_lambda(),
            chain.rhat_k()
        );
        Ok(2)
    }
}

fn run_simulate(args: SimulateArgs) -> Result<u8, CliError> {
    let spec = ScenarioSpec {
        varied: args.varied.into(),
        rel_diff: args.rel_diff,
        t_chi_target: args.t_chi,
        control: WeibullParams::new(args.control_lambda, args.control_k)?,
    };
    let scenario = build_scenario(&spec)?;
    let (control, treatment) = simulate_trial(&scenario, args.n, args.censor, args.seed)?;

    let mut buf = Vec::new();
    write_two_arm_csv(&control, &treatment, &mut buf)?;
    write_output(&args.out, &buf)?;

    let solved = scenario.pair.treatment;
    let t = crossing_point(&scenario.pair)
        .t_chi()
        .expect("built scenario always has a unique crossing");
    println!(
        "control: lambda={} k={}",
        args.control_lambda, args.control_k
    );
    println!("treatment: lambda={} k={}", solved.lambda(), solved.k());
    println!("t_chi_days: {t}");
    println!(
        "wrote {} ({} control + {} treatment records)",
        args.out.display(),
        control.n(),
        treatment.n()
    );
    Ok(0)
}

fn run_sweep_cmd(args: SweepArgs) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg: SweepConfig = serde_json::from_str(&text)?;
    if let Some(seed) = args.seed {
        cfg.base_seed = seed;
    }
    if let Some(reps) = args.replications {
        cfg.replications = reps;
    }
    if let Some(censor) = args.censor {
        cfg.censor_time = censor;
    }
    cfg.validate()?;

    let rows = run_sweep_with_estimate(&cfg, args.point_estimate.into())?;
    let summary = summarize_sweep(&rows)?;

    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf)?;
    write_output(&args.out, &buf)?;
    let mut buf = Vec::new();
    write_summary_csv(&summary, &mut buf)?;
    write_output(&args.summary_out, &buf)?;

    let n_min = *cfg.n_grid.first().expect("validated non-empty");
    let n_max = *cfg.n_grid.last().expect("validated non-empty");
    for (id, scenario) in cfg.scenarios.iter().enumerate() {
        let at = |n: usize, f: fn(&survcross::simulation::SweepSummaryRow) -> f64| {
            summary
                .iter()
                .find(|s| s.scenario_id == id && s.n == n)
                .map(f)
                .unwrap_or(f64::NAN)
        };
        println!(
            "scenario {id} ({} {:+}%): err_lambda {} (n={n_min}) -> {} (n={n_max}); err_k {} -> {}",
            scenario.varied.as_str(),
            scenario.rel_diff * 100.0,
            sig4(at(n_min, |s| s.err_lambda)),
            sig4(at(n_max, |s| s.err_lambda)),
            sig4(at(n_min, |s| s.err_k)),
            sig4(at(n_max, |s| s.err_k)),
        );
    }

    let unconverged = rows.iter().filter(|r| !r.converged).count();
    if unconverged > 0 {
        eprintln!(
            "warning: {unconverged} of {} replications did not converge (flagged in {})",
            rows.len(),
            args.out.display()
        );
        return Ok(2);
    }
    println!(
        "wrote {} and {}",
        args.out.display(),
        args.summary_out.display()
    );
    Ok(0)
}
