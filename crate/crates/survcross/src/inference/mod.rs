//! Bayesian estimation of Weibull parameters from censored survival data:
//! gamma-prior log posterior, adaptive random-walk sampling on the log
//! parameters, posterior summaries, a maximum-likelihood cross-check, and
//! propagation of posterior draws through the crossing-point formula.

pub mod sampler;

mod mle;

pub use mle::mle_fit;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::crossing::{crossing_point, CrossingResult, CurvePair};
use crate::error::{Error, Result};
use crate::weibull::{Dataset, WeibullParams};

/// Gamma prior with the (shape, rate) parameterization; density proportional
/// to `x^(shape-1) exp(-rate*x)`. Rate 0 with shape 1 is the improper flat
/// prior, accepted so the likelihood-only limit is expressible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPrior {
    pub shape: f64,
    pub rate: f64,
}

impl GammaPrior {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !shape.is_finite() || shape <= 0.0 {
            return Err(Error::validation(format!(
                "prior shape must be > 0, got {shape}"
            )));
        }
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::validation(format!(
                "prior rate must be >= 0, got {rate}"
            )));
        }
        Ok(Self { shape, rate })
    }

    /// Improper flat prior (shape 1, rate 0).
    pub fn flat() -> Self {
        Self {
            shape: 1.0,
            rate: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.shape, self.rate).map(|_| ())
    }
}

impl Default for GammaPrior {
    /// Near-flat over the plausible parameter range.
    fn default() -> Self {
        Self {
            shape: 1.0,
            rate: 0.001,
        }
    }
}

/// Priors for the shape `k` and the failure rate `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PriorConfig {
    pub k_prior: GammaPrior,
    pub lambda_prior: GammaPrior,
}

impl PriorConfig {
    pub fn flat() -> Self {
        Self {
            k_prior: GammaPrior::flat(),
            lambda_prior: GammaPrior::flat(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.k_prior.validate()?;
        self.lambda_prior.validate()
    }
}

/// Random-walk sampler settings. `initial_step` is the proposal scale on the
/// log parameters before adaptation; `seed` drives every chain through a
/// deterministic per-chain stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub burn_in: usize,
    pub samples: usize,
    pub chains: usize,
    pub initial_step: f64,
    pub target_accept: f64,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            burn_in: 2000,
            samples: 10_000,
            chains: 4,
            initial_step: 0.1,
            target_accept: 0.30,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::validation("samples must be > 0".to_string()));
        }
        if self.chains < 2 {
            return Err(Error::validation(
                "at least 2 chains are required for convergence diagnostics".to_string(),
            ));
        }
        if !self.initial_step.is_finite() || self.initial_step <= 0.0 {
            return Err(Error::validation(format!(
                "initial_step must be finite and > 0, got {}",
                self.initial_step
            )));
        }
        if !self.target_accept.is_finite() || self.target_accept <= 0.0 || self.target_accept >= 1.0
        {
            return Err(Error::validation(format!(
                "target_accept must lie in (0, 1), got {}",
                self.target_accept
            )));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Sufficient statistics of a dataset for the Weibull likelihood.
///
/// Records are grouped by exact time value and sorted, which makes every
/// downstream sum independent of the record order: the likelihood depends on
/// the data only through `E`, the event log-time sum, and the power sums.
#[derive(Debug, Clone)]
pub(crate) struct WeibullSuffStats {
    pub e: f64,
    /// Sum of ln(t) over event records.
    pub sum_ln_t_events: f64,
    /// (ln t, multiplicity) over all records with t > 0, sorted by time.
    pub groups: Vec<(f64, f64)>,
}

impl WeibullSuffStats {
    pub fn from_dataset(data: &Dataset) -> Result<Self> {
        let mut event_times = Vec::new();
        let mut all_times = Vec::new();
        for rec in data.records() {
            if rec.event() {
                if rec.time() == 0.0 {
                    return Err(Error::validation(
                        "event at time 0 has undefined log density".to_string(),
                    ));
                }
                event_times.push(rec.time());
            }
            if rec.time() > 0.0 {
                all_times.push(rec.time());
            }
        }
        let sum_ln_t_events = group_times(&mut event_times)
            .into_iter()
            .map(|(ln_t, c)| c * ln_t)
            .sum();
        let groups = group_times(&mut all_times);
        Ok(Self {
            e: data.n_events() as f64,
            sum_ln_t_events,
            groups,
        })
    }

    /// `lambda^k * sum_j t_j^k`, evaluated as a single grouped exponential
    /// sum so intermediate terms cannot overflow separately.
    pub fn scaled_power_sum(&self, ln_lambda: f64, k: f64) -> f64 {
        self.groups
            .iter()
            .map(|&(ln_t, c)| c * (k * (ln_lambda + ln_t)).exp())
            .sum()
    }

    /// `(lambda^k * Σ t^k, lambda^k * Σ t^k ln t)` in one pass.
    pub fn scaled_power_sums_with_log(&self, ln_lambda: f64, k: f64) -> (f64, f64) {
        let mut a = 0.0;
        let mut b = 0.0;
        for &(ln_t, c) in &self.groups {
            let w = c * (k * (ln_lambda + ln_t)).exp();
            a += w;
            b += w * ln_t;
        }
        (a, b)
    }
}

fn group_times(times: &mut [f64]) -> Vec<(f64, f64)> {
    times.sort_by(|a, b| a.total_cmp(b));
    let mut groups: Vec<(f64, f64)> = Vec::new();
    for &t in times.iter() {
        match groups.last_mut() {
            Some((ln_t, c)) if *ln_t == t.ln() => *c += 1.0,
            _ => groups.push((t.ln(), 1.0)),
        }
    }
    groups
}

fn check_positive_params(lambda: f64, k: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::validation(format!(
            "lambda must be finite and > 0, got {lambda}"
        )));
    }
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::validation(format!(
            "k must be finite and > 0, got {k}"
        )));
    }
    Ok(())
}

fn log_posterior_from_stats(
    stats: &WeibullSuffStats,
    priors: &PriorConfig,
    lambda: f64,
    k: f64,
) -> f64 {
    let ln_lambda = lambda.ln();
    let ln_k = k.ln();
    let (a_k, b_k) = (priors.k_prior.shape, priors.k_prior.rate);
    let (a_l, b_l) = (priors.lambda_prior.shape, priors.lambda_prior.rate);
    (stats.e + a_k - 1.0) * ln_k
        + (k * stats.e + a_l - 1.0) * ln_lambda
        + (k - 1.0) * stats.sum_ln_t_events
        - (stats.scaled_power_sum(ln_lambda, k) + b_k * k + b_l * lambda)
}

/// Unnormalized log posterior density of `(lambda, k)` under gamma priors:
///
/// ```text
/// (E + a_k - 1) ln k + (kE + a_l - 1) ln lambda
///   + (k - 1) Σ_events ln t_i - (lambda^k Σ_all t_j^k + b_k k + b_l lambda)
/// ```
///
/// where `(a_k, b_k)` is the shape prior and `(a_l, b_l)` the rate prior.
/// The value depends on the dataset only through its sufficient statistics,
/// so record order is irrelevant.
pub fn log_posterior(lambda: f64, k: f64, data: &Dataset, priors: &PriorConfig) -> Result<f64> {
    check_positive_params(lambda, k)?;
    priors.validate()?;
    let stats = WeibullSuffStats::from_dataset(data)?;
    Ok(log_posterior_from_stats(&stats, priors, lambda, k))
}

/// Pooled posterior draws with sampler diagnostics.
#[derive(Debug, Clone)]
pub struct PosteriorChain {
    draws: Vec<(f64, f64)>,
    chains: usize,
    samples_per_chain: usize,
    accept_rate: f64,
    rhat_lambda: f64,
    rhat_k: f64,
    seed: u64,
}

impl PosteriorChain {
    /// Wrap externally produced draws (diagnostics unavailable).
    pub fn from_draws(draws: Vec<(f64, f64)>, seed: u64) -> Result<Self> {
        if draws.iter().any(|&(l, k)| !(l > 0.0 && k > 0.0)) {
            return Err(Error::validation("all draws must be positive".to_string()));
        }
        let samples_per_chain = draws.len();
        Ok(Self {
            draws,
            chains: 1,
            samples_per_chain,
            accept_rate: 1.0,
            rhat_lambda: f64::NAN,
            rhat_k: f64::NAN,
            seed,
        })
    }

    /// Draws pooled across chains in chain order, as `(lambda, k)`.
    pub fn draws(&self) -> &[(f64, f64)] {
        &self.draws
    }

    pub fn chains(&self) -> usize {
        self.chains
    }

    pub fn samples_per_chain(&self) -> usize {
        self.samples_per_chain
    }

    pub fn accept_rate(&self) -> f64 {
        self.accept_rate
    }

    pub fn rhat_lambda(&self) -> f64 {
        self.rhat_lambda
    }

    pub fn rhat_k(&self) -> f64 {
        self.rhat_k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// False when any split-chain rhat exceeds 1.1 (or is unavailable):
    /// results should be flagged, not discarded.
    pub fn converged(&self) -> bool {
        self.rhat_lambda.is_finite()
            && self.rhat_k.is_finite()
            && self.rhat_lambda <= 1.1
            && self.rhat_k <= 1.1
    }

    /// Write draws as CSV `chain,iter,lambda,k`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["chain", "iter", "lambda", "k"])
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        for (i, (lambda, k)) in self.draws.iter().enumerate() {
            let chain = i / self.samples_per_chain;
            let iter = i % self.samples_per_chain;
            w.write_record([
                chain.to_string(),
                iter.to_string(),
                lambda.to_string(),
                k.to_string(),
            ])
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sample the posterior with random-walk Metropolis on `(ln lambda, ln k)`
/// (the log-transformed density carries the Jacobian `+ln lambda + ln k`).
///
/// The proposal scale adapts toward `cfg.target_accept` during burn-in and
/// is then frozen. Chains run concurrently on seed-derived streams, so the
/// result is deterministic for a given `cfg.seed`.
pub fn mh_sample(
    data: &Dataset,
    priors: &PriorConfig,
    cfg: &SamplerConfig,
) -> Result<PosteriorChain> {
    cfg.validate()?;
    priors.validate()?;
    if data.is_empty() {
        return Err(Error::validation(
            "dataset must contain at least one record".to_string(),
        ));
    }
    let stats = WeibullSuffStats::from_dataset(data)?;

    // Moment-based start: exponential-rate guess with k = 1.
    let total_time: f64 = stats.groups.iter().map(|&(ln_t, c)| c * ln_t.exp()).sum();
    let init_lambda = if total_time > 0.0 {
        stats.e.max(1.0) / total_time
    } else {
        1.0
    };
    let init = [init_lambda.ln(), 0.0];

    let target = |x: &[f64]| {
        let (u, v) = (x[0], x[1]);
        let lambda = u.exp();
        let k = v.exp();
        if !(lambda > 0.0 && lambda.is_finite() && k > 0.0 && k.is_finite()) {
            return f64::NEG_INFINITY;
        }
        log_posterior_from_stats(&stats, priors, lambda, k) + u + v
    };

    let set = sampler::sample_chains(&target, &init, cfg);
    let lambda_series: Vec<Vec<f64>> = set
        .draws
        .iter()
        .map(|chain| chain.iter().map(|d| d[0].exp()).collect())
        .collect();
    let k_series: Vec<Vec<f64>> = set
        .draws
        .iter()
        .map(|chain| chain.iter().map(|d| d[1].exp()).collect())
        .collect();
    let rhat_lambda = sampler::split_rhat(&lambda_series);
    let rhat_k = sampler::split_rhat(&k_series);

    let mut draws = Vec::with_capacity(cfg.chains * cfg.samples);
    for (ls, ks) in lambda_series.iter().zip(&k_series) {
        draws.extend(ls.iter().zip(ks).map(|(&l, &k)| (l, k)));
    }

    Ok(PosteriorChain {
        draws,
        chains: cfg.chains,
        samples_per_chain: cfg.samples,
        accept_rate: set.accept_rate,
        rhat_lambda,
        rhat_k,
        seed: cfg.seed,
    })
}

/// Posterior means, standard deviations, and central 95% credible intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub mean_lambda: f64,
    pub mean_k: f64,
    pub sd_lambda: f64,
    pub sd_k: f64,
    pub ci_lambda: (f64, f64),
    pub ci_k: (f64, f64),
}

/// Empirical quantile with linear interpolation between order statistics.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= n {
        sorted[n - 1]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() < 2 {
        0.0
    } else {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (mean, sd)
}

/// Summarize a chain into means, SDs, and central 95% intervals.
pub fn summarize(chain: &PosteriorChain) -> Result<FitResult> {
    if chain.draws.is_empty() {
        return Err(Error::validation(
            "cannot summarize an empty chain".to_string(),
        ));
    }
    let mut lambdas: Vec<f64> = chain.draws.iter().map(|d| d.0).collect();
    let mut ks: Vec<f64> = chain.draws.iter().map(|d| d.1).collect();
    let (mean_lambda, sd_lambda) = mean_sd(&lambdas);
    let (mean_k, sd_k) = mean_sd(&ks);
    lambdas.sort_by(|a, b| a.total_cmp(b));
    ks.sort_by(|a, b| a.total_cmp(b));
    Ok(FitResult {
        mean_lambda,
        mean_k,
        sd_lambda,
        sd_k,
        ci_lambda: (quantile(&lambdas, 0.025), quantile(&lambdas, 0.975)),
        ci_k: (quantile(&ks, 0.025), quantile(&ks, 0.975)),
    })
}

/// Which posterior point estimate to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointEstimate {
    #[default]
    Mean,
    Median,
}

/// Extract `(lambda_hat, k_hat)` from a chain.
pub fn point_estimate(chain: &PosteriorChain, which: PointEstimate) -> Result<(f64, f64)> {
    if chain.draws.is_empty() {
        return Err(Error::validation(
            "cannot summarize an empty chain".to_string(),
        ));
    }
    match which {
        PointEstimate::Mean => {
            let (ml, _) = mean_sd(&chain.draws.iter().map(|d| d.0).collect::<Vec<_>>());
            let (mk, _) = mean_sd(&chain.draws.iter().map(|d| d.1).collect::<Vec<_>>());
            Ok((ml, mk))
        }
        PointEstimate::Median => {
            let mut ls: Vec<f64> = chain.draws.iter().map(|d| d.0).collect();
            let mut ks: Vec<f64> = chain.draws.iter().map(|d| d.1).collect();
            ls.sort_by(|a, b| a.total_cmp(b));
            ks.sort_by(|a, b| a.total_cmp(b));
            Ok((quantile(&ls, 0.5), quantile(&ks, 0.5)))
        }
    }
}

/// Summary plus diagnostics and seed, ready for JSON export. Non-finite
/// diagnostics (too few draws) serialize as null.
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    #[serde(flatten)]
    pub summary: FitResult,
    pub rhat_lambda: Option<f64>,
    pub rhat_k: Option<f64>,
    pub accept_rate: f64,
    pub seed: u64,
}

impl FitReport {
    pub fn new(chain: &PosteriorChain) -> Result<Self> {
        Ok(Self {
            summary: summarize(chain)?,
            rhat_lambda: finite_opt(chain.rhat_lambda),
            rhat_k: finite_opt(chain.rhat_k),
            accept_rate: chain.accept_rate,
            seed: chain.seed,
        })
    }
}

fn finite_opt(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Crossing-point uncertainty from two posterior chains paired draw by draw.
#[derive(Debug, Clone)]
pub struct CrossingPosterior {
    pub results: Vec<CrossingResult>,
    /// Central 95% interval of `t_chi` among unique crossings, when any.
    pub t_chi_interval: Option<(f64, f64)>,
    /// Fraction of paired draws without a unique crossing.
    pub non_unique_fraction: f64,
}

/// Push paired posterior draws through the crossing-point formula. Chains
/// are truncated to the shorter length; degenerate pairs are counted, not
/// errors.
pub fn crossing_posterior(
    control: &PosteriorChain,
    treatment: &PosteriorChain,
) -> Result<CrossingPosterior> {
    if control.draws.is_empty() || treatment.draws.is_empty() {
        return Err(Error::validation(
            "both chains must be non-empty".to_string(),
        ));
    }
    let len = control.draws.len().min(treatment.draws.len());
    let mut results = Vec::with_capacity(len);
    let mut t_chis = Vec::new();
    for i in 0..len {
        let (l0, k0) = control.draws[i];
        let (l1, k1) = treatment.draws[i];
        let pair = CurvePair::new(WeibullParams::new(l0, k0)?, WeibullParams::new(l1, k1)?);
        let result = crossing_point(&pair);
        if let Some(t) = result.t_chi() {
            t_chis.push(t);
        }
        results.push(result);
    }
    let non_unique_fraction = (len - t_chis.len()) as f64 / len as f64;
    t_chis.sort_by(|a, b| a.total_cmp(b));
    let t_chi_interval = if t_chis.is_empty() {
        None
    } else {
        Some((quantile(&t_chis, 0.025), quantile(&t_chis, 0.975)))
    };
    Ok(CrossingPosterior {
        results,
        t_chi_interval,
        non_unique_fraction,
    })
}
