//! Scenario construction with a fixed crossing point, two-arm trial
//! simulation, and the sample-size sweep that tracks how estimation error in
//! the treatment parameters propagates into crossing-point error.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crossing::{crossing_point, solve_treatment_lambda, solve_treatment_shape, CurvePair};
use crate::error::{Error, Result};
use crate::inference::{mh_sample, point_estimate, PointEstimate, PriorConfig, SamplerConfig};
use crate::seed;
use crate::weibull::{apply_censoring, Dataset, WeibullParams};

/// Which treatment parameter a scenario varies relative to the control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariedParameter {
    Failure,
    Shape,
}

impl VariedParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            VariedParameter::Failure => "failure",
            VariedParameter::Shape => "shape",
        }
    }
}

/// A scenario: the varied treatment parameter is `(1 + rel_diff)` times its
/// control counterpart and the other treatment parameter is solved so the
/// survival curves cross at `t_chi_target` days.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub varied: VariedParameter,
    pub rel_diff: f64,
    pub t_chi_target: f64,
    pub control: WeibullParams,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.rel_diff.is_finite() || self.rel_diff == 0.0 || self.rel_diff <= -1.0 {
            return Err(Error::validation(format!(
                "rel_diff must be finite, nonzero and > -1, got {}",
                self.rel_diff
            )));
        }
        if !self.t_chi_target.is_finite() || self.t_chi_target <= 0.0 {
            return Err(Error::validation(format!(
                "t_chi_target must be finite and > 0, got {}",
                self.t_chi_target
            )));
        }
        Ok(())
    }
}

/// A built scenario whose pair provably crosses at the target time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub spec: ScenarioSpec,
    pub pair: CurvePair,
}

/// Solve the scenario's free treatment parameter from the crossing formula.
///
/// * `varied = failure`: `lambda1 = (1+d) lambda0`, then
///   `k1 = k0 ln(lambda0 t)/ln(lambda1 t)`.
/// * `varied = shape`: `k1 = (1+d) k0`, then
///   `ln lambda1 = (k0/k1) ln(lambda0 t) - ln t`.
pub fn build_scenario(spec: &ScenarioSpec) -> Result<Scenario> {
    spec.validate()?;
    let t = spec.t_chi_target;
    let treatment = match spec.varied {
        VariedParameter::Failure => {
            let lambda1 = (1.0 + spec.rel_diff) * spec.control.lambda();
            solve_treatment_shape(&spec.control, lambda1, t)?
        }
        VariedParameter::Shape => {
            let k1 = (1.0 + spec.rel_diff) * spec.control.k();
            solve_treatment_lambda(&spec.control, k1, t)?
        }
    };
    let pair = CurvePair::new(spec.control, treatment);
    match crossing_point(&pair).t_chi() {
        Some(t_chi) if ((t_chi - t) / t).abs() <= 1e-9 => Ok(Scenario { spec: *spec, pair }),
        Some(t_chi) => Err(Error::degenerate(format!(
            "solved crossing {t_chi} misses the target {t}"
        ))),
        None => Err(Error::degenerate(
            "solved pair has no unique crossing".to_string(),
        )),
    }
}

/// Simulate `n_per_arm` subjects per arm with administrative censoring.
/// Arm streams derive from `seed` (control: mix(seed, 0); treatment:
/// mix(seed, 1)), so results are deterministic.
pub fn simulate_trial(
    scenario: &Scenario,
    n_per_arm: usize,
    censor_time: f64,
    seed_value: u64,
) -> Result<(Dataset, Dataset)> {
    if n_per_arm == 0 {
        return Err(Error::validation("n_per_arm must be >= 1".to_string()));
    }
    let control_times = scenario
        .pair
        .control
        .sample_times(n_per_arm, seed::mix(&[seed_value, 0]));
    let treatment_times = scenario
        .pair
        .treatment
        .sample_times(n_per_arm, seed::mix(&[seed_value, 1]));
    Ok((
        apply_censoring(&control_times, censor_time)?,
        apply_censoring(&treatment_times, censor_time)?,
    ))
}

fn default_censor_time() -> f64 {
    730.0
}

/// Full sweep configuration; mirrors the JSON config document field for
/// field. `censor_time`, `sampler`, and `priors` default when omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_grid: Vec<usize>,
    pub replications: usize,
    #[serde(default = "default_censor_time")]
    pub censor_time: f64,
    pub scenarios: Vec<ScenarioSpec>,
    #[serde(default)]
    pub sampler: SamplerConfig,
    #[serde(default)]
    pub priors: PriorConfig,
    pub base_seed: u64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::validation("n_grid must be non-empty".to_string()));
        }
        if self.n_grid.windows(2).any(|w| w[1] <= w[0]) || self.n_grid[0] == 0 {
            return Err(Error::validation(
                "n_grid must be positive and ascending".to_string(),
            ));
        }
        if self.replications == 0 {
            return Err(Error::validation("replications must be >= 1".to_string()));
        }
        if !self.censor_time.is_finite() || self.censor_time <= 0.0 {
            return Err(Error::validation(format!(
                "censor_time must be finite and > 0, got {}",
                self.censor_time
            )));
        }
        if self.scenarios.is_empty() {
            return Err(Error::validation(
                "at least one scenario is required".to_string(),
            ));
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        self.sampler.validate()?;
        self.priors.validate()
    }
}

/// One sweep replication: treatment-arm estimates and the error columns.
///
/// `err_tchi_lambda` / `err_tchi_k` substitute only the named treatment
/// estimate into the crossing formula with every other parameter at truth;
/// `err_tchi_joint` substitutes the estimated parameters of both arms.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scenario_id: usize,
    pub varied: VariedParameter,
    pub rel_diff: f64,
    pub n: usize,
    pub rep: usize,
    pub lambda1_hat: f64,
    pub k1_hat: f64,
    pub err_lambda: f64,
    pub err_k: f64,
    pub err_tchi_lambda: f64,
    pub err_tchi_k: f64,
    pub err_tchi_joint: f64,
    pub converged: bool,
}

fn abs_rel_crossing_error(pair: &CurvePair, t_true: f64) -> f64 {
    match crossing_point(pair).t_chi() {
        Some(t) => (t / t_true - 1.0).abs(),
        None => f64::NAN,
    }
}

fn run_row(
    cfg: &SweepConfig,
    estimate: PointEstimate,
    scenario_id: usize,
    scenario: &Scenario,
    n: usize,
    rep: usize,
) -> Result<SweepRow> {
    let row_seed = seed::mix(&[cfg.base_seed, scenario_id as u64, n as u64, rep as u64]);
    let (control_data, treatment_data) = simulate_trial(scenario, n, cfg.censor_time, row_seed)?;

    let treatment_chain = mh_sample(
        &treatment_data,
        &cfg.priors,
        &cfg.sampler.with_seed(seed::mix(&[row_seed, 2])),
    )?;
    let control_chain = mh_sample(
        &control_data,
        &cfg.priors,
        &cfg.sampler.with_seed(seed::mix(&[row_seed, 3])),
    )?;
    let (lambda1_hat, k1_hat) = point_estimate(&treatment_chain, estimate)?;
    let (lambda0_hat, k0_hat) = point_estimate(&control_chain, estimate)?;

    let truth = scenario.pair;
    let (lambda1, k1) = (truth.treatment.lambda(), truth.treatment.k());
    let t_true = crossing_point(&truth)
        .t_chi()
        .ok_or_else(|| Error::degenerate("scenario lost its crossing".to_string()))?;

    let with_lambda1 = CurvePair::new(truth.control, WeibullParams::new(lambda1_hat, k1)?);
    let with_k1 = CurvePair::new(truth.control, WeibullParams::new(lambda1, k1_hat)?);
    let joint = CurvePair::new(
        WeibullParams::new(lambda0_hat, k0_hat)?,
        WeibullParams::new(lambda1_hat, k1_hat)?,
    );

    let err_tchi_lambda = abs_rel_crossing_error(&with_lambda1, t_true);
    let err_tchi_k = abs_rel_crossing_error(&with_k1, t_true);
    let err_tchi_joint = abs_rel_crossing_error(&joint, t_true);
    let degenerate_substitution =
        !(err_tchi_lambda.is_finite() && err_tchi_k.is_finite() && err_tchi_joint.is_finite());

    Ok(SweepRow {
        scenario_id,
        varied: scenario.spec.varied,
        rel_diff: scenario.spec.rel_diff,
        n,
        rep,
        lambda1_hat,
        k1_hat,
        err_lambda: (lambda1_hat - lambda1).abs() / lambda1,
        err_k: (k1_hat - k1).abs() / k1,
        err_tchi_lambda,
        err_tchi_k,
        err_tchi_joint,
        converged: treatment_chain.converged()
            && control_chain.converged()
            && !degenerate_substitution,
    })
}

/// Run the sweep with the default point estimate (posterior mean).
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_sweep_with_estimate(cfg, PointEstimate::default())
}

/// Run one row per (scenario, n, replication). Rows execute in parallel;
/// per-row seeds are `mix(base_seed, scenario index, n, rep)`, so the output
/// is bitwise deterministic and sorted by (scenario, n, rep).
pub fn run_sweep_with_estimate(
    cfg: &SweepConfig,
    estimate: PointEstimate,
) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let scenarios = cfg
        .scenarios
        .iter()
        .map(build_scenario)
        .collect::<Result<Vec<_>>>()?;

    let mut jobs = Vec::new();
    for (scenario_id, scenario) in scenarios.iter().enumerate() {
        for &n in &cfg.n_grid {
            for rep in 0..cfg.replications {
                jobs.push((scenario_id, scenario, n, rep));
            }
        }
    }

    let mut rows = jobs
        .into_par_iter()
        .map(|(scenario_id, scenario, n, rep)| {
            run_row(cfg, estimate, scenario_id, scenario, n, rep)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.scenario_id, r.n, r.rep));
    Ok(rows)
}

/// Per-(scenario, n) means over converged replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummaryRow {
    pub scenario_id: usize,
    pub varied: VariedParameter,
    pub rel_diff: f64,
    pub n: usize,
    pub reps_used: usize,
    pub reps_dropped: usize,
    pub err_lambda: f64,
    pub err_k: f64,
    pub err_tchi_lambda: f64,
    pub err_tchi_k: f64,
    pub err_tchi_joint: f64,
}

/// Average the error columns over replications, converged rows only; the
/// number of dropped rows is reported per group.
pub fn summarize_sweep(rows: &[SweepRow]) -> Result<Vec<SweepSummaryRow>> {
    if rows.is_empty() {
        return Err(Error::validation("no rows to summarize".to_string()));
    }
    let mut keys: Vec<(usize, usize)> = rows.iter().map(|r| (r.scenario_id, r.n)).collect();
    keys.sort_unstable();
    keys.dedup();

    let mut out = Vec::with_capacity(keys.len());
    for (scenario_id, n) in keys {
        let group: Vec<&SweepRow> = rows
            .iter()
            .filter(|r| r.scenario_id == scenario_id && r.n == n)
            .collect();
        let used: Vec<&&SweepRow> = group.iter().filter(|r| r.converged).collect();
        let denom = used.len() as f64;
        let mean = |f: fn(&SweepRow) -> f64| {
            if used.is_empty() {
                f64::NAN
            } else {
                used.iter().map(|r| f(r)).sum::<f64>() / denom
            }
        };
        out.push(SweepSummaryRow {
            scenario_id,
            varied: group[0].varied,
            rel_diff: group[0].rel_diff,
            n,
            reps_used: used.len(),
            reps_dropped: group.len() - used.len(),
            err_lambda: mean(|r| r.err_lambda),
            err_k: mean(|r| r.err_k),
            err_tchi_lambda: mean(|r| r.err_tchi_lambda),
            err_tchi_k: mean(|r| r.err_tchi_k),
            err_tchi_joint: mean(|r| r.err_tchi_joint),
        });
    }
    Ok(out)
}

/// Row-level CSV with header
/// `scenario_id,varied,rel_diff,n,rep,lambda1_hat,k1_hat,err_lambda,err_k,err_tchi_lambda,err_tchi_k,err_tchi_joint,converged`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "scenario_id",
        "varied",
        "rel_diff",
        "n",
        "rep",
        "lambda1_hat",
        "k1_hat",
        "err_lambda",
        "err_k",
        "err_tchi_lambda",
        "err_tchi_k",
        "err_tchi_joint",
        "converged",
    ])
    .map_err(csv_io)?;
    for r in rows {
        w.write_record([
            r.scenario_id.to_string(),
            r.varied.as_str().to_string(),
            r.rel_diff.to_string(),
            r.n.to_string(),
            r.rep.to_string(),
            r.lambda1_hat.to_string(),
            r.k1_hat.to_string(),
            fmt_err(r.err_lambda),
            fmt_err(r.err_k),
            fmt_err(r.err_tchi_lambda),
            fmt_err(r.err_tchi_k),
            fmt_err(r.err_tchi_joint),
            u8::from(r.converged).to_string(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Summary CSV, one row per (scenario_id, n), same error column names.
pub fn write_summary_csv<W: Write>(rows: &[SweepSummaryRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "scenario_id",
        "varied",
        "rel_diff",
        "n",
        "reps_used",
        "reps_dropped",
        "err_lambda",
        "err_k",
        "err_tchi_lambda",
        "err_tchi_k",
        "err_tchi_joint",
    ])
    .map_err(csv_io)?;
    for r in rows {
        w.write_record([
            r.scenario_id.to_string(),
            r.varied.as_str().to_string(),
            r.rel_diff.to_string(),
            r.n.to_string(),
            r.reps_used.to_string(),
            r.reps_dropped.to_string(),
            fmt_err(r.err_lambda),
            fmt_err(r.err_k),
            fmt_err(r.err_tchi_lambda),
            fmt_err(r.err_tchi_k),
            fmt_err(r.err_tchi_joint),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn fmt_err(v: f64) -> String {
    if v.is_finite() {
        v.to_string()
    } else {
        String::new()
    }
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn control() -> WeibullParams {
        WeibullParams::new(3.43e-4, 1.08).unwrap()
    }

    fn spec(varied: VariedParameter, rel_diff: f64) -> ScenarioSpec {
        ScenarioSpec {
            varied,
            rel_diff,
            t_chi_target: 365.0,
            control: control(),
        }
    }

    fn tiny_sweep_config() -> SweepConfig {
        SweepConfig {
            n_grid: vec![40, 80],
            replications: 2,
            censor_time: 730.0,
            scenarios: vec![spec(VariedParameter::Failure, 0.25)],
            sampler: SamplerConfig {
                burn_in: 100,
                samples: 200,
                chains: 2,
                ..SamplerConfig::default()
            },
            priors: PriorConfig::default(),
            base_seed: 7,
        }
    }

    #[test]
    fn failure_scenario_solution() {
        let s = build_scenario(&spec(VariedParameter::Failure, 0.25)).unwrap();
        assert!((s.pair.treatment.lambda() - 4.2875e-4).abs() < 1e-12);
        assert!(
            (s.pair.treatment.k() - 1.2099).abs() < 2e-4,
            "k1={}",
            s.pair.treatment.k()
        );
        let t = crossing_point(&s.pair).t_chi().unwrap();
        assert!((t - 365.0).abs() / 365.0 <= 1e-9);
    }

    #[test]
    fn shape_scenario_solution() {
        let s = build_scenario(&spec(VariedParameter::Shape, 0.25)).unwrap();
        assert_eq!(s.pair.treatment.k(), 1.35);
        assert!(
            (s.pair.treatment.lambda() - 5.198e-4).abs() < 1e-6,
            "l1={}",
            s.pair.treatment.lambda()
        );
        let t = crossing_point(&s.pair).t_chi().unwrap();
        assert!((t - 365.0).abs() / 365.0 <= 1e-9);
    }

    #[test]
    fn zero_rel_diff_is_rejected() {
        assert!(build_scenario(&spec(VariedParameter::Shape, 0.0)).is_err());
        assert!(build_scenario(&spec(VariedParameter::Failure, 0.0)).is_err());
    }

    #[test]
    fn singular_failure_solve_rejected() {
        // lambda1 * t_chi = 1 makes the shape solve singular.
        let control = WeibullParams::new(1.0 / (1.25 * 365.0), 1.08).unwrap();
        let s = ScenarioSpec {
            varied: VariedParameter::Failure,
            rel_diff: 0.25,
            t_chi_target: 365.0,
            control,
        };
        assert!(matches!(build_scenario(&s), Err(Error::Degenerate(_))));
    }

    #[test]
    fn trial_simulation_contracts() {
        let s = build_scenario(&spec(VariedParameter::Failure, 0.25)).unwrap();
        assert!(simulate_trial(&s, 0, 730.0, 1).is_err());
        assert!(simulate_trial(&s, 10, -1.0, 1).is_err());

        let (c1, t1) = simulate_trial(&s, 50, 730.0, 9).unwrap();
        let (c2, t2) = simulate_trial(&s, 50, 730.0, 9).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(t1, t2);
        let (c3, _) = simulate_trial(&s, 50, 730.0, 10).unwrap();
        assert_ne!(c1, c3);
    }

    #[test]
    fn control_event_fraction_near_fifth() {
        let s = build_scenario(&spec(VariedParameter::Failure, 0.25)).unwrap();
        let (control_data, _) = simulate_trial(&s, 1900, 730.0, 33).unwrap();
        let frac = control_data.n_events() as f64 / control_data.n() as f64;
        assert!((frac - 0.20).abs() < 0.03, "frac={frac}");
    }

    #[test]
    fn sweep_row_count_and_determinism() {
        let cfg = tiny_sweep_config();
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 2);
        let again = run_sweep(&cfg).unwrap();
        assert_eq!(rows, again);

        let sorted: Vec<_> = rows.iter().map(|r| (r.scenario_id, r.n, r.rep)).collect();
        let mut expect = sorted.clone();
        expect.sort_unstable();
        assert_eq!(sorted, expect);
    }

    #[test]
    fn sweep_rejects_bad_configs() {
        let mut cfg = tiny_sweep_config();
        cfg.replications = 0;
        assert!(run_sweep(&cfg).is_err());

        cfg = tiny_sweep_config();
        cfg.n_grid = vec![];
        assert!(run_sweep(&cfg).is_err());

        cfg = tiny_sweep_config();
        cfg.n_grid = vec![100, 50];
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn seed_isolation_between_reps_and_scenarios() {
        let s = build_scenario(&spec(VariedParameter::Failure, 0.25)).unwrap();
        let base = 11u64;
        let seed_a = seed::mix(&[base, 0, 100, 0]);
        let seed_b = seed::mix(&[base, 0, 100, 1]);
        let (da, _) = simulate_trial(&s, 100, 730.0, seed_a).unwrap();
        let (db, _) = simulate_trial(&s, 100, 730.0, seed_b).unwrap();
        assert_ne!(da, db);

        // Adding a scenario leaves existing scenarios' rows unchanged.
        let mut cfg = tiny_sweep_config();
        let rows_one = run_sweep(&cfg).unwrap();
        cfg.scenarios.push(spec(VariedParameter::Shape, 0.5));
        let rows_two = run_sweep(&cfg).unwrap();
        let first: Vec<_> = rows_two
            .iter()
            .filter(|r| r.scenario_id == 0)
            .cloned()
            .collect();
        assert_eq!(rows_one, first);
    }

    #[test]
    fn summary_arithmetic() {
        let row = |rep: usize, err: f64, converged: bool| SweepRow {
            scenario_id: 0,
            varied: VariedParameter::Failure,
            rel_diff: 0.25,
            n: 100,
            rep,
            lambda1_hat: 1.0,
            k1_hat: 1.0,
            err_lambda: err,
            err_k: err,
            err_tchi_lambda: err,
            err_tchi_k: err,
            err_tchi_joint: err,
            converged,
        };

        let single = summarize_sweep(&[row(0, 0.1, true)]).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].err_lambda, 0.1);
        assert_eq!(single[0].reps_used, 1);

        let two = summarize_sweep(&[row(0, 0.1, true), row(1, 0.3, true)]).unwrap();
        assert_eq!(two[0].err_lambda, 0.2);

        let dropped = summarize_sweep(&[row(0, 0.1, true), row(1, 0.9, false)]).unwrap();
        assert_eq!(dropped[0].err_lambda, 0.1);
        assert_eq!(dropped[0].reps_dropped, 1);

        assert!(summarize_sweep(&[]).is_err());
    }

    #[test]
    fn csv_outputs_have_expected_headers() {
        let cfg = tiny_sweep_config();
        let rows = run_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "scenario_id,varied,rel_diff,n,rep,lambda1_hat,k1_hat,err_lambda,err_k,err_tchi_lambda,err_tchi_k,err_tchi_joint,converged\n"
        ));
        assert_eq!(text.lines().count(), rows.len() + 1);

        let summary = summarize_sweep(&rows).unwrap();
        let mut buf = Vec::new();
        write_summary_csv(&summary, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "scenario_id,varied,rel_diff,n,reps_used,reps_dropped,err_lambda,err_k,err_tchi_lambda,err_tchi_k,err_tchi_joint\n"
        ));
    }

    #[test]
    fn config_json_round_trip() {
        let json = r#"{
            "n_grid": [200, 600],
            "replications": 2,
            "censor_time": 730.0,
            "scenarios": [
                {"varied": "failure", "rel_diff": 0.25, "t_chi_target": 365.0,
                 "control": {"lambda": 3.43e-4, "k": 1.08}}
            ],
            "sampler": {"burn_in": 100, "samples": 200, "chains": 2,
                        "initial_step": 0.1, "target_accept": 0.3, "seed": 0},
            "priors": {"k_prior": {"shape": 1.0, "rate": 0.001},
                       "lambda_prior": {"shape": 1.0, "rate": 0.001}},
            "base_seed": 42
        }"#;
        let cfg: SweepConfig = serde_json::from_str(json).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.n_grid, vec![200, 600]);
        assert_eq!(cfg.scenarios[0].varied, VariedParameter::Failure);
        assert_eq!(cfg.base_seed, 42);

        // Defaults fill in when sampler/priors/censor_time are omitted.
        let minimal = r#"{
            "n_grid": [100],
            "replications": 1,
            "scenarios": [
                {"varied": "shape", "rel_diff": 0.5, "t_chi_target": 365.0,
                 "control": {"lambda": 3.43e-4, "k": 1.08}}
            ],
            "base_seed": 1
        }"#;
        let cfg: SweepConfig = serde_json::from_str(minimal).unwrap();
        assert_eq!(cfg.censor_time, 730.0);
        assert_eq!(cfg.sampler.chains, 4);
    }
}
