//! Weibull survival mathematics: curve parameterization, closed-form fitting
//! from two cumulative failure rates, and survival-time generation with
//! administrative censoring.
//!
//! Convention: the survival curve is `S(t) = exp(-(lambda*t)^k)` and the
//! cumulative failure probability is its complement `F(t) = 1 - S(t)`. Time
//! is measured in days, `lambda` in 1/day.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One arm's Weibull parameters: failure rate `lambda` (1/day) and shape `k`.
///
/// Both fields are validated at construction: strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeibullParams", into = "RawWeibullParams")]
pub struct WeibullParams {
    lambda: f64,
    k: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawWeibullParams {
    lambda: f64,
    k: f64,
}

impl TryFrom<RawWeibullParams> for WeibullParams {
    type Error = Error;

    fn try_from(raw: RawWeibullParams) -> Result<Self> {
        WeibullParams::new(raw.lambda, raw.k)
    }
}

impl From<WeibullParams> for RawWeibullParams {
    fn from(p: WeibullParams) -> Self {
        RawWeibullParams {
            lambda: p.lambda,
            k: p.k,
        }
    }
}

impl WeibullParams {
    pub fn new(lambda: f64, k: f64) -> Result<Self> {
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
        Ok(Self { lambda, k })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Survival probability `S(t) = exp(-(lambda*t)^k)`.
    ///
    /// Equals 1 at `t = 0` and is strictly decreasing in `t`.
    pub fn survival_prob(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok((-self.cumulative_hazard(t)).exp())
    }

    /// Cumulative failure probability `F(t) = 1 - S(t)`.
    pub fn failure_prob(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        // -expm1(-H) keeps precision when F is tiny.
        Ok(-(-self.cumulative_hazard(t)).exp_m1())
    }

    /// Cumulative hazard `H(t) = (lambda*t)^k`.
    pub fn cumulative_hazard(&self, t: f64) -> f64 {
        let x = self.lambda * t;
        if x == 0.0 {
            0.0
        } else {
            (self.k * x.ln()).exp()
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::validation(format!(
                "time must be finite and >= 0, got {t}"
            )));
        }
        Ok(())
    }

    /// Draw `n` event times by inverse transform: `t = (-ln u)^(1/k) / lambda`
    /// with `u` uniform on (0, 1). Deterministic for a given `seed`.
    pub fn sample_times(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                (-u.ln()).powf(1.0 / self.k) / self.lambda
            })
            .collect()
    }
}

/// A point on the cumulative failure curve: failure probability `f` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailurePoint {
    t: f64,
    f: f64,
}

impl FailurePoint {
    pub fn new(t: f64, f: f64) -> Result<Self> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::validation(format!(
                "time must be finite and > 0, got {t}"
            )));
        }
        if !f.is_finite() || f <= 0.0 || f >= 1.0 {
            return Err(Error::validation(format!(
                "failure probability must lie strictly in (0, 1), got {f}"
            )));
        }
        Ok(Self { t, f })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    /// Cumulative hazard at this point, `H = -ln(1 - f)`.
    fn hazard(&self) -> f64 {
        -(-self.f).ln_1p()
    }
}

/// Recover the Weibull parameters passing through two failure points.
///
/// Closed form: with `H(f) = -ln(1-f)`,
/// `k = ln(H(b)/H(a)) / ln(b.t/a.t)` and `lambda = H(a)^(1/k) / a.t`.
///
/// Fails on equal times (degenerate) and on inputs inconsistent with a
/// monotone failure curve (later time with equal-or-lower failure).
pub fn fit_two_points(a: FailurePoint, b: FailurePoint) -> Result<WeibullParams> {
    if a.t == b.t {
        return Err(Error::degenerate(format!(
            "failure points share the time {}",
            a.t
        )));
    }
    let (lo, hi) = if a.t < b.t { (a, b) } else { (b, a) };
    if hi.f <= lo.f {
        return Err(Error::degenerate(format!(
            "failure must increase with time: f({}) = {} but f({}) = {}",
            lo.t, lo.f, hi.t, hi.f
        )));
    }
    let k = (hi.hazard() / lo.hazard()).ln() / (hi.t / lo.t).ln();
    let lambda = (lo.hazard().ln() / k).exp() / lo.t;
    WeibullParams::new(lambda, k)
}

/// One subject's follow-up: duration in days and whether the event was
/// observed (`event = false` means censored at `time`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubjectRecord {
    time: f64,
    event: bool,
}

impl SubjectRecord {
    pub fn new(time: f64, event: bool) -> Result<Self> {
        if !time.is_finite() || time < 0.0 {
            return Err(Error::validation(format!(
                "follow-up time must be finite and >= 0, got {time}"
            )));
        }
        Ok(Self { time, event })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn event(&self) -> bool {
        self.event
    }
}

/// An ordered collection of subject records for one arm.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    records: Vec<SubjectRecord>,
}

impl Dataset {
    pub fn new(records: Vec<SubjectRecord>) -> Self {
        Self { records }
    }

    pub fn records(&self) -> &[SubjectRecord] {
        &self.records
    }

    /// Total subject count N.
    pub fn n(&self) -> usize {
        self.records.len()
    }

    /// Observed event count E.
    pub fn n_events(&self) -> usize {
        self.records.iter().filter(|r| r.event).count()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn push(&mut self, record: SubjectRecord) {
        self.records.push(record);
    }
}

/// Administratively censor raw event times at study end `censor_time`:
/// each raw time `t` becomes `(min(t, c), event = t <= c)`.
pub fn apply_censoring(times: &[f64], censor_time: f64) -> Result<Dataset> {
    if !censor_time.is_finite() || censor_time <= 0.0 {
        return Err(Error::validation(format!(
            "censor time must be finite and > 0, got {censor_time}"
        )));
    }
    let records = times
        .iter()
        .map(|&t| SubjectRecord::new(t.min(censor_time), t <= censor_time))
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset::new(records))
}
