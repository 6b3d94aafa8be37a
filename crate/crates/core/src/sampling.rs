//! Time-of-first-failure sampling.
//!
//! The primary sampler inverts the cumulative hazard: with `E ~ Exp(1)`,
//! `T = H⁻¹(E)` has survival function `exp(-H(t))`. A thinning sampler is
//! kept alongside it as an independent cross-check.
//!
//! Random numbers come from ChaCha20 (`rand_chacha`), seeded with
//! `seed_from_u64(seed)` and switched to stream `stream_id`, so every
//! replicate owns its own keystream and the draws do not depend on the order
//! or thread in which replicates are evaluated.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hazard::HazardTrajectory;

/// Recorded in sample metadata.
pub const GENERATOR_NAME: &str =
    "ChaCha20Rng(rand_chacha 0.9) seed_from_u64(seed), stream=replicate";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplingError {
    #[error("sample count must be at least 1")]
    ZeroCount,
    #[error("thinning horizon {0} must be positive and finite")]
    InvalidHorizon(f64),
    #[error("empirical distribution is empty")]
    Empty,
    #[error("sample {0} is not a positive finite time")]
    InvalidSample(f64),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// One independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeededStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn unit_exponential<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    -u.ln()
}

/// A failure time together with the unit-exponential draw that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailureDraw {
    pub time: f64,
    pub exponential: f64,
}

/// Inverse-transform draw, also returning the exponential variate.
pub fn draw_failure(traj: &HazardTrajectory, stream: SeededStream) -> FailureDraw {
    let exponential = unit_exponential(&mut stream.rng());
    FailureDraw {
        time: traj.inverse_cumulative_hazard(exponential),
        exponential,
    }
}

pub fn sample_failure_time(traj: &HazardTrajectory, stream: SeededStream) -> f64 {
    draw_failure(traj, stream).time
}

/// Thinning sampler: candidate points from a homogeneous process at the
/// segment-wise hazard maximum, each accepted with probability `h(t)/max`.
/// Returns `None` when no failure occurs before `horizon`.
pub fn sample_failure_time_thinning(
    traj: &HazardTrajectory,
    horizon: f64,
    stream: SeededStream,
) -> Result<Option<f64>, SamplingError> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(SamplingError::InvalidHorizon(horizon));
    }
    let mut rng = stream.rng();
    let mut index = 0;
    let mut t = 0.0;
    while t < horizon {
        let seg = &traj.segments()[index];
        let seg_end = traj.segment_end(index).min(horizon);
        let bound = traj.max_hazard_on(seg.start.max(t), seg_end);
        if bound > 0.0 {
            let candidate = t + unit_exponential(&mut rng) / bound;
            if candidate < seg_end {
                t = candidate;
                let u: f64 = rng.sample(Open01);
                if u * bound <= seg.form.value(t - seg.start) {
                    return Ok(Some(t));
                }
                continue;
            }
        }
        // The homogeneous process is memoryless, so restart at the boundary.
        t = seg_end;
        index += 1;
    }
    Ok(None)
}

/// Draw `n` replicates, replicate `i` on stream `(seed, i)`, in replicate order.
pub fn sample_replicates(traj: &HazardTrajectory, n: usize, seed: u64) -> Vec<f64> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| sample_failure_time(traj, SeededStream::new(seed, i)))
        .collect()
}

/// [`sample_replicates`] on a dedicated pool of `threads` workers.
pub fn sample_replicates_with_threads(
    traj: &HazardTrajectory,
    n: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<f64>, SamplingError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SamplingError::ThreadPool(e.to_string()))?;
    Ok(pool.install(|| sample_replicates(traj, n, seed)))
}

/// `n` independent failure times as a sorted empirical distribution.
pub fn sample_many(
    traj: &HazardTrajectory,
    n: usize,
    seed: u64,
) -> Result<EmpiricalDistribution, SamplingError> {
    if n == 0 {
        return Err(SamplingError::ZeroCount);
    }
    EmpiricalDistribution::new(sample_replicates(traj, n, seed), seed)
}

/// Sorted failure-time sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    times: Vec<f64>,
    seed: u64,
}

impl EmpiricalDistribution {
    pub fn new(mut times: Vec<f64>, seed: u64) -> Result<Self, SamplingError> {
        if times.is_empty() {
            return Err(SamplingError::Empty);
        }
        if let Some(&bad) = times.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(SamplingError::InvalidSample(bad));
        }
        times.sort_by(f64::total_cmp);
        Ok(Self { times, seed })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mean(&self) -> f64 {
        self.times.iter().sum::<f64>() / self.times.len() as f64
    }

    /// Fraction of samples `<= t`.
    pub fn empirical_cdf(&self, t: f64) -> f64 {
        self.times.partition_point(|&x| x <= t) as f64 / self.times.len() as f64
    }

    /// One-sample Kolmogorov–Smirnov statistic against `cdf`.
    pub fn ks_statistic<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        ks_one_sample(&self.times, cdf)
    }
}

/// `sup |F̂ - F|` over a sorted sample, evaluated exactly at the step points.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        // Group ties so the step height is taken once per distinct value.
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max(j as f64 / n - f);
        i = j;
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic. Non-finite entries (for example
/// `f64::INFINITY` standing in for "survived the horizon") sort after every
/// finite time.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        if !x.is_finite() {
            break;
        }
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    // Remaining finite points of the longer-running sample.
    while i < a.len() && a[i].is_finite() {
        i += 1;
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    while j < b.len() && b[j].is_finite() {
        j += 1;
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// DKW band half-width `sqrt(ln(2/δ) / (2n))`.
pub fn dkw_epsilon(n: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// Two-sample analogue `sqrt(ln(2/δ) (n+m) / (2nm))`.
pub fn two_sample_threshold(n: usize, m: usize, delta: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ((2.0 / delta).ln() * (n + m) / (2.0 * n * m)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_hazard_inverts_exponential_draw() {
        let traj = HazardTrajectory::constant(0.25).unwrap();
        let d = draw_failure(&traj, SeededStream::new(7, 3));
        assert!((d.time - d.exponential / 0.25).abs() < 1e-12);
    }

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let traj = HazardTrajectory::constant(1.0).unwrap();
        let a = sample_failure_time(&traj, SeededStream::new(1, 0));
        let b = sample_failure_time(&traj, SeededStream::new(1, 1));
        assert_ne!(a, b);
        assert_eq!(a, sample_failure_time(&traj, SeededStream::new(1, 0)));
    }

    #[test]
    fn singleton_matches_stream_zero() {
        let traj = HazardTrajectory::constant(1.0).unwrap();
        let dist = sample_many(&traj, 1, 99).unwrap();
        assert_eq!(
            dist.times(),
            &[sample_failure_time(&traj, SeededStream::new(99, 0))]
        );
        assert_eq!(sample_many(&traj, 0, 99), Err(SamplingError::ZeroCount));
    }

    #[test]
    fn empirical_cdf_steps() {
        let dist = EmpiricalDistribution::new(vec![3.0, 1.0, 2.0, 4.0], 0).unwrap();
        assert_eq!(dist.empirical_cdf(0.5), 0.0);
        assert_eq!(dist.empirical_cdf(2.0), 0.5);
        assert_eq!(dist.empirical_cdf(4.0), 1.0);
        assert_eq!(dist.empirical_cdf(10.0), 1.0);
    }

    #[test]
    fn thinning_rejects_bad_horizon() {
        let traj = HazardTrajectory::constant(1.0).unwrap();
        assert!(sample_failure_time_thinning(&traj, 0.0, SeededStream::new(0, 0)).is_err());
    }

    #[test]
    fn ks_single_point() {
        // F = 0.5 at the only sample: gaps 0.5 below and 0.5 above.
        let d = ks_one_sample(&[1.0], |_| 0.5);
        assert_eq!(d, 0.5);
    }

    #[test]
    fn two_sample_identical_is_zero() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert_eq!(
            ks_two_sample(&[1.0, f64::INFINITY], &[1.0, f64::INFINITY]),
            0.0
        );
    }

    #[test]
    fn dkw_value() {
        assert!((dkw_epsilon(100_000, 1e-3) - 0.006_166).abs() < 1e-5);
    }
}
