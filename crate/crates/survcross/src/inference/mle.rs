//! Maximum-likelihood Weibull fit for right-censored data, used as a
//! frequentist cross-check on the posterior.
//!
//! The rate profiles out in closed form (`lambda^k = E / Σ t^k`), leaving a
//! one-dimensional score equation in the shape,
//!
//! ```text
//! h(k) = 1/k + (Σ_events ln t)/E - (Σ t^k ln t)/(Σ t^k) = 0,
//! ```
//!
//! which is strictly decreasing and is solved by safeguarded Newton steps.
//! The returned point maximizes the likelihood part of the log posterior
//! (priors removed) with gradient norm below 1e-8 on `(ln lambda, ln k)`.

use super::WeibullSuffStats;
use crate::error::{Error, Result};
use crate::weibull::{Dataset, WeibullParams};

const GRAD_TOL: f64 = 1e-8;
const MAX_ITER: usize = 200;

/// Log likelihood `E ln k + kE ln lambda + (k-1) Σ_e ln t - lambda^k Σ t^k`.
#[cfg(test)]
pub(crate) fn log_likelihood(stats: &WeibullSuffStats, lambda: f64, k: f64) -> f64 {
    stats.e * k.ln() + k * stats.e * lambda.ln() + (k - 1.0) * stats.sum_ln_t_events
        - stats.scaled_power_sum(lambda.ln(), k)
}

/// Gradient of the log likelihood with respect to `(ln lambda, ln k)`.
pub(crate) fn log_likelihood_grad(stats: &WeibullSuffStats, lambda: f64, k: f64) -> [f64; 2] {
    let ln_lambda = lambda.ln();
    let (a, b) = stats.scaled_power_sums_with_log(ln_lambda, k);
    let d_ln_lambda = k * (stats.e - a);
    let d_ln_k =
        stats.e + k * (stats.e * ln_lambda + stats.sum_ln_t_events) - k * (a * ln_lambda + b);
    [d_ln_lambda, d_ln_k]
}

/// Weighted mean and variance of `ln t` under weights proportional to `t^k`,
/// computed with a shifted exponent so large `k` cannot overflow.
fn weighted_log_moments(stats: &WeibullSuffStats, k: f64) -> (f64, f64) {
    let shift = stats
        .groups
        .iter()
        .map(|&(ln_t, _)| ln_t)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut t0 = 0.0;
    let mut t1 = 0.0;
    let mut t2 = 0.0;
    for &(ln_t, c) in &stats.groups {
        let w = c * (k * (ln_t - shift)).exp();
        t0 += w;
        t1 += w * ln_t;
        t2 += w * ln_t * ln_t;
    }
    let mean = t1 / t0;
    (mean, (t2 / t0 - mean * mean).max(0.0))
}

/// `ln Σ t^k`, shift-stabilized.
fn ln_power_sum(stats: &WeibullSuffStats, k: f64) -> f64 {
    let shift = stats
        .groups
        .iter()
        .map(|&(ln_t, _)| ln_t)
        .fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = stats
        .groups
        .iter()
        .map(|&(ln_t, c)| c * (k * (ln_t - shift)).exp())
        .sum();
    k * shift + s.ln()
}

fn profiled_lambda(stats: &WeibullSuffStats, k: f64) -> f64 {
    ((stats.e.ln() - ln_power_sum(stats, k)) / k).exp()
}

/// Fit by maximizing the likelihood. Requires at least two events for both
/// parameters to be identifiable.
pub fn mle_fit(data: &Dataset) -> Result<WeibullParams> {
    let stats = WeibullSuffStats::from_dataset(data)?;
    if stats.e < 2.0 {
        return Err(Error::validation(format!(
            "need at least 2 events to identify both parameters, got {}",
            stats.e
        )));
    }

    let mean_event_ln_t = stats.sum_ln_t_events / stats.e;
    let score = |k: f64| {
        let (wmean, _) = weighted_log_moments(&stats, k);
        1.0 / k + mean_event_ln_t - wmean
    };
    let score_derivative = |k: f64| {
        let (_, wvar) = weighted_log_moments(&stats, k);
        -1.0 / (k * k) - wvar
    };

    // Bracket the root: the score is positive as k -> 0 and strictly
    // decreasing. Data where it never turns negative (e.g. all mass at a
    // single time) have no interior maximum.
    let mut lo = 1e-8;
    let mut hi = 1.0;
    let mut iterations = 0;
    while score(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if iterations > 60 {
            return Err(Error::NonConvergence {
                iterations,
                lambda: profiled_lambda(&stats, hi),
                k: hi,
                grad_norm: score(hi).abs() * stats.e * hi,
            });
        }
    }

    let mut k = 0.5 * (lo + hi);
    for iter in 0..MAX_ITER {
        let h = score(k);
        if h > 0.0 {
            lo = k;
        } else {
            hi = k;
        }
        let step = h / score_derivative(k);
        let mut next = k - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let lambda = profiled_lambda(&stats, next);
        let grad = log_likelihood_grad(&stats, lambda, next);
        let grad_norm = (grad[0].powi(2) + grad[1].powi(2)).sqrt();
        if grad_norm < GRAD_TOL {
            return WeibullParams::new(lambda, next);
        }
        if (next - k).abs() <= f64::EPSILON * k.abs() && iter > 5 {
            // Stalled at machine precision without meeting the gradient
            // tolerance: report the iterate honestly.
            return Err(Error::NonConvergence {
                iterations: iter + 1,
                lambda,
                k: next,
                grad_norm,
            });
        }
        k = next;
    }
    let lambda = profiled_lambda(&stats, k);
    let grad = log_likelihood_grad(&stats, lambda, k);
    Err(Error::NonConvergence {
        iterations: MAX_ITER,
        lambda,
        k,
        grad_norm: (grad[0].powi(2) + grad[1].powi(2)).sqrt(),
    })
}
