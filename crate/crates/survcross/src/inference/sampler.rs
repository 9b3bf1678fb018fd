//! Generic adaptive random-walk Metropolis sampler.
//!
//! Proposals are isotropic Gaussian steps on the parameter vector; the step
//! size is adapted toward a target acceptance rate during burn-in and frozen
//! afterwards. Chains run as independent tasks, each on its own RNG stream
//! derived from the configured seed, so results are deterministic and
//! identical whether chains execute serially or in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::SamplerConfig;
use crate::seed;

const ADAPT_BATCH: usize = 50;

/// Post burn-in draws, one vector of parameter vectors per chain.
#[derive(Debug, Clone)]
pub struct ChainSet {
    pub draws: Vec<Vec<Vec<f64>>>,
    /// Acceptance fraction over post burn-in iterations, pooled.
    pub accept_rate: f64,
}

/// Run `cfg.chains` random-walk chains over `log_target`.
///
/// `log_target` may return `-inf` (or NaN, treated as `-inf`) to reject a
/// region outright. The starting point must have finite density.
pub fn sample_chains<F>(log_target: &F, init: &[f64], cfg: &SamplerConfig) -> ChainSet
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let results: Vec<(Vec<Vec<f64>>, usize)> = (0..cfg.chains)
        .into_par_iter()
        .map(|chain| run_chain(log_target, init, cfg, chain))
        .collect();

    let total_iters = cfg.chains * cfg.samples;
    let accepted: usize = results.iter().map(|(_, a)| *a).sum();
    ChainSet {
        draws: results.into_iter().map(|(d, _)| d).collect(),
        accept_rate: accepted as f64 / total_iters as f64,
    }
}

fn run_chain<F>(
    log_target: &F,
    init: &[f64],
    cfg: &SamplerConfig,
    chain: usize,
) -> (Vec<Vec<f64>>, usize)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed::mix(&[cfg.seed, chain as u64]));
    let dim = init.len();
    let mut x = init.to_vec();
    let mut lx = finite_or_neg_inf(log_target(&x));
    let mut ln_step = cfg.initial_step.ln();

    let mut draws = Vec::with_capacity(cfg.samples);
    let mut accepted_post = 0usize;
    let mut batch_accepts = 0usize;
    let mut batch_index = 0usize;
    let mut proposal = vec![0.0; dim];

    for iter in 0..cfg.burn_in + cfg.samples {
        let step = ln_step.exp();
        for (p, xi) in proposal.iter_mut().zip(&x) {
            let z: f64 = rng.sample(StandardNormal);
            *p = xi + step * z;
        }
        let ly = finite_or_neg_inf(log_target(&proposal));
        let u: f64 = rng.random();
        let accept = ly - lx > u.ln();
        if accept {
            x.copy_from_slice(&proposal);
            lx = ly;
        }

        let burning = iter < cfg.burn_in;
        if burning {
            batch_accepts += usize::from(accept);
            if (iter + 1) % ADAPT_BATCH == 0 {
                batch_index += 1;
                let rate = batch_accepts as f64 / ADAPT_BATCH as f64;
                ln_step += (rate - cfg.target_accept) / (batch_index as f64).sqrt();
                ln_step = ln_step.clamp(-20.0, 5.0);
                batch_accepts = 0;
            }
        } else {
            accepted_post += usize::from(accept);
            draws.push(x.clone());
        }
    }
    (draws, accepted_post)
}

fn finite_or_neg_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Split-chain potential scale reduction factor for one coordinate.
///
/// Each chain is halved, the halves are treated as independent sequences,
/// and the usual between/within variance ratio is returned. Values near 1
/// indicate convergence. Returns NaN when the sequences are too short and
/// 1.0 when all draws are identical.
pub fn split_rhat(series: &[Vec<f64>]) -> f64 {
    let mut halves: Vec<&[f64]> = Vec::with_capacity(series.len() * 2);
    let half_len = series.iter().map(|s| s.len() / 2).min().unwrap_or(0);
    if half_len < 2 {
        return f64::NAN;
    }
    for s in series {
        halves.push(&s[..half_len]);
        halves.push(&s[s.len() - half_len..]);
    }

    let m = halves.len() as f64;
    let n = half_len as f64;
    let means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let grand = mean(&means);
    let b_over_n = means.iter().map(|x| (x - grand).powi(2)).sum::<f64>() / (m - 1.0);
    let w = halves
        .iter()
        .zip(&means)
        .map(|(h, mu)| h.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1.0))
        .sum::<f64>()
        / m;
    if w == 0.0 {
        return if b_over_n == 0.0 { 1.0 } else { f64::INFINITY };
    }
    (((n - 1.0) / n * w + b_over_n) / w).sqrt()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
