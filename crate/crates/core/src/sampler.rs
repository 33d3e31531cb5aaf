//! Rejection sampling of Bruhat-comparable pairs and Monte Carlo success estimates.
//!
//! Trial `t` of a run with seed `s` draws from `ChaCha8Rng::seed_from_u64(s)`
//! on stream `t`, so results do not depend on thread count or scheduling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{KlError, Result};
use crate::mult::{classify_pair, Route};
use crate::perm::{bruhat_leq_unchecked, Permutation, MAX_N};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrialConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampledPair {
    pub v: Permutation,
    pub w: Permutation,
    /// Incomparable draws rejected before this pair was accepted.
    pub rejections: u64,
}

/// Draws `sigma, rho` uniformly until they are comparable; returns `(smaller, larger)`.
pub fn sample_comparable_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SampledPair {
    let mut rejections = 0;
    loop {
        let s = Permutation::random(n, rng);
        let r = Permutation::random(n, rng);
        if bruhat_leq_unchecked(&s, &r) {
            return SampledPair { v: s, w: r, rejections };
        }
        if bruhat_leq_unchecked(&r, &s) {
            return SampledPair { v: r, w: s, rejections };
        }
        rejections += 1;
    }
}

/// As [`sample_comparable_pair`], resampling diagonal pairs; rejections accumulate.
pub fn sample_strict_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SampledPair> {
    if n < 2 {
        return Err(KlError::Parse("strict pairs need n >= 2".into()));
    }
    let mut total = 0;
    loop {
        let p = sample_comparable_pair(n, rng);
        total += p.rejections;
        if p.v != p.w {
            return Ok(SampledPair { rejections: total, ..p });
        }
        total += 1;
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `count` strict pairs, trial `t` drawn from stream `t`.
pub fn sample_pairs(n: usize, count: usize, seed: u64) -> Vec<SampledPair> {
    (0..count)
        .into_par_iter()
        .map(|t| sample_strict_pair(n, &mut trial_rng(seed, t as u64)).expect("n >= 2"))
        .collect()
}

/// Wilson score interval at 95%, in percent.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 100.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    (100.0 * (center - half).max(0.0), 100.0 * (center + half).min(1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct SuccessReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub successes: usize,
    pub failed: usize,
    pub pct: f64,
    pub ci: (f64, f64),
    pub mean_rejections: f64,
}

/// Fraction of sampled strict pairs resolved by the homogeneity and `v_max` routes.
pub fn estimate_success(config: TrialConfig) -> Result<SuccessReport> {
    if config.n < 2 || config.n > MAX_N {
        return Err(KlError::Parse(format!("n must lie in 2..={MAX_N}, got {}", config.n)));
    }
    if config.trials == 0 {
        return Err(KlError::Parse("trials must be positive".into()));
    }
    let pairs = sample_pairs(config.n, config.trials, config.seed);
    let outcomes: Vec<Option<bool>> = pairs
        .par_iter()
        .map(|p| {
            classify_pair(&p.v, &p.w)
                .ok()
                .map(|r| matches!(r.route, Route::DirectHomogeneous | Route::ViaVmax))
        })
        .collect();
    let failed = outcomes.iter().filter(|o| o.is_none()).count();
    let successes = outcomes.iter().filter(|o| **o == Some(true)).count();
    let done = config.trials - failed;
    let rejections: u64 = pairs.iter().map(|p| p.rejections).sum();
    Ok(SuccessReport {
        n: config.n,
        trials: config.trials,
        seed: config.seed,
        successes,
        failed,
        pct: if done == 0 { 0.0 } else { 100.0 * successes as f64 / done as f64 },
        ci: wilson_interval(successes, done),
        mean_rejections: rejections as f64 / config.trials as f64,
    })
}
