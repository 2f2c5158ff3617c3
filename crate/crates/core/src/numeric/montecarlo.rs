//! Deterministic parallel Monte Carlo over gauge shells and balls.
//!
//! Samples are grouped in fixed-size blocks; block `b` draws from a ChaCha8
//! stream keyed by `(seed, b)`. Block sums are combined pairwise in block
//! order, so the result does not depend on how blocks are spread over
//! threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauge::Gauge;
use super::NumericError;

pub const BLOCK: u64 = 4096;
pub const MIN_SAMPLES: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    /// Sum of independent estimates.
    pub fn plus(&self, other: &Estimate) -> Estimate {
        Estimate {
            mean: self.mean + other.mean,
            stderr: self.stderr.hypot(other.stderr),
            samples: self.samples + other.samples,
        }
    }
}

pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

#[derive(Clone, Copy, Default)]
struct Moments {
    sum: f64,
    sum_sq: f64,
}

fn pairwise(mut v: Vec<Moments>) -> Moments {
    if v.is_empty() {
        return Moments::default();
    }
    while v.len() > 1 {
        v = v
            .chunks(2)
            .map(|c| match c {
                [a, b] => Moments {
                    sum: a.sum + b.sum,
                    sum_sq: a.sum_sq + b.sum_sq,
                },
                [a] => *a,
                _ => unreachable!(),
            })
            .collect();
    }
    v[0]
}

/// Mean and standard error of `sample(rng)` over `samples` draws. `shards`
/// only controls the parallel split and never changes the result.
pub fn sample_mean<F>(samples: u64, seed: u64, shards: usize, sample: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let blocks = samples.div_ceil(BLOCK);
    let per_shard = (blocks as usize).div_ceil(shards.max(1)).max(1);
    let moments: Vec<Moments> = (0..blocks as usize)
        .into_par_iter()
        .with_min_len(per_shard)
        .map(|b| {
            let b = b as u64;
            let mut rng = block_rng(seed, b);
            let count = BLOCK.min(samples - b * BLOCK);
            let mut m = Moments::default();
            for _ in 0..count {
                let v = sample(&mut rng);
                m.sum += v;
                m.sum_sq += v * v;
            }
            m
        })
        .collect();
    let total = pairwise(moments);
    let n = samples as f64;
    let mean = total.sum / n;
    let var = ((total.sum_sq / n) - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    Estimate {
        mean,
        stderr: (var / n).sqrt(),
        samples,
    }
}

fn check(samples: u64) -> Result<(), NumericError> {
    if samples < MIN_SAMPLES {
        return Err(NumericError::TooFewSamples { samples, minimum: MIN_SAMPLES });
    }
    Ok(())
}

/// `∫_{R₁ ≤ r ≤ R₂} f` against Lebesgue (Haar) measure. The radius is drawn
/// log-uniformly and the direction from the cone measure of the unit sphere,
/// so `f(δ_ρ ω) ρ^Q log(R₂/R₁) Q |B(1)|` is unbiased.
pub fn shell_integral<F>(
    gauge: &Gauge,
    f: F,
    r1: f64,
    r2: f64,
    samples: u64,
    seed: u64,
    shards: usize,
) -> Result<Estimate, NumericError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if !(r1 > 0.0 && r2 > r1 && r2.is_finite()) {
        return Err(NumericError::DegenerateShell { r1, r2 });
    }
    check(samples)?;
    let q = gauge.homogeneous_dim() as f64;
    let (lo, hi) = (r1.ln(), r2.ln());
    let scale = (hi - lo) * q * gauge.unit_ball_volume();
    Ok(sample_mean(samples, seed, shards, |rng| {
        use rand::Rng;
        let omega = gauge.sample_sphere(rng);
        let rho = rng.random_range(lo..hi).exp();
        f(&gauge.dilate(rho, &omega)) * rho.powf(q) * scale
    }))
}

/// `∫_{r ≤ R} f`: uniform sampling in a small core `B(R/64)` plus a
/// log-radial shell out to `R`, which resolves integrands concentrated at any
/// scale in between.
pub fn ball_integral<F>(gauge: &Gauge, f: F, r: f64, samples: u64, seed: u64, shards: usize) -> Result<Estimate, NumericError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if !(r > 0.0 && r.is_finite()) {
        return Err(NumericError::DegenerateShell { r1: 0.0, r2: r });
    }
    check(samples)?;
    let core_r = r / 64.0;
    let core_samples = (samples / 8).max(MIN_SAMPLES);
    let q = gauge.homogeneous_dim() as i32;
    let vol = gauge.unit_ball_volume() * core_r.powi(q);
    let core = sample_mean(core_samples, seed, shards, |rng| {
        let x = gauge.sample_ball(rng);
        f(&gauge.dilate(core_r, &x)) * vol
    });
    let shell = shell_integral(gauge, &f, core_r, r, samples - samples / 8, seed ^ 0x9e37_79b9_7f4a_7c15, shards)?;
    Ok(core.plus(&shell))
}
