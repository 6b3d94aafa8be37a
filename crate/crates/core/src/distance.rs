//! Distances between failure-time laws and their Poisson/exponential
//! approximations.
//!
//! A trajectory is cut into intervals by a grid; each interval contributes an
//! independent failure indicator with probability
//! `p_i = 1 - exp(-(H(t_i) - H(t_{i-1})))`. The number of indicators that
//! fire is Poisson-binomial, and its total-variation distance to
//! `Poisson(Σ p_i)` is bounded by `min(1, 1/λ) Σ p_i²`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{check_grid, GridError};
use crate::hazard::{EvalError, HazardTrajectory};
use crate::pra::PraModel;
use crate::sampling::{ks_one_sample, EmpiricalDistribution};

/// Largest process handled by [`exact_tv_small`].
pub const EXACT_TV_MAX_INDICATORS: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistanceError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("exact total variation supports at most {max} indicators, got {got}")]
    TooManyIndicators { got: usize, max: usize },
    #[error("indicator probability {0} is outside (0, 1)")]
    InvalidProbability(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizedFailureProcess {
    probabilities: Vec<f64>,
}

impl DiscretizedFailureProcess {
    pub fn new(probabilities: Vec<f64>) -> Result<Self, DistanceError> {
        if let Some(&p) = probabilities.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return Err(DistanceError::InvalidProbability(p));
        }
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// `λ = Σ p_i`.
    pub fn lambda(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `Σ -ln(1 - p_i)`, which recovers the cumulative hazard at the end of
    /// the grid.
    pub fn total_cumulative_hazard(&self) -> f64 {
        self.probabilities.iter().map(|&p| -(-p).ln_1p()).sum()
    }

    /// Copy with one more indicator appended.
    pub fn with_indicator(&self, p: f64) -> Result<Self, DistanceError> {
        let mut probabilities = self.probabilities.clone();
        probabilities.push(p);
        Self::new(probabilities)
    }
}

/// One indicator per grid interval. The grid is strictly increasing and
/// non-negative; an implicit `t = 0` is prepended when it does not start
/// there.
pub fn discretize(
    traj: &HazardTrajectory,
    grid: &[f64],
) -> Result<DiscretizedFailureProcess, DistanceError> {
    check_grid(grid)?;
    let mut previous = 0.0;
    let mut probabilities = Vec::with_capacity(grid.len());
    for &t in grid.iter().skip_while(|&&t| t == 0.0) {
        let h = traj.cumulative_hazard(t)?;
        probabilities.push(-(-(h - previous)).exp_m1());
        previous = h;
    }
    DiscretizedFailureProcess::new(probabilities)
}

/// `min(1, 1/λ) Σ p_i²`.
pub fn stein_chen_tv_bound(process: &DiscretizedFailureProcess) -> f64 {
    let lambda = process.lambda();
    if lambda == 0.0 {
        return 0.0;
    }
    let squares: f64 = process.probabilities.iter().map(|p| p * p).sum();
    (1.0f64).min(1.0 / lambda) * squares
}

/// Default Poisson support cap `λ + 40√λ + 40`.
pub fn default_support_cap(lambda: f64) -> usize {
    (lambda + 40.0 * lambda.sqrt() + 40.0).ceil() as usize
}

/// Law of the number of indicators that fire, by dynamic programming.
pub fn poisson_binomial_pmf(probabilities: &[f64]) -> Vec<f64> {
    let mut pmf = vec![1.0];
    for &p in probabilities {
        let mut next = vec![0.0; pmf.len() + 1];
        for (k, &mass) in pmf.iter().enumerate() {
            next[k] += mass * (1.0 - p);
            next[k + 1] += mass * p;
        }
        pmf = next;
    }
    pmf
}

/// Exact total-variation distance between the indicator sum and
/// `Poisson(λ)`. Poisson probabilities are enumerated up to
/// `max(support_cap, n)`; past that the indicator sum has no mass, so the
/// remaining Poisson tail enters the distance in full and is summed until its
/// terms no longer change the total.
pub fn exact_tv_small(
    process: &DiscretizedFailureProcess,
    support_cap: usize,
) -> Result<f64, DistanceError> {
    let n = process.len();
    if n > EXACT_TV_MAX_INDICATORS {
        return Err(DistanceError::TooManyIndicators {
            got: n,
            max: EXACT_TV_MAX_INDICATORS,
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let lambda = process.lambda();
    let pmf = poisson_binomial_pmf(&process.probabilities);
    let cap = support_cap.max(n);
    let mut poisson = (-lambda).exp();
    let mut sum = 0.0;
    for k in 0..=cap {
        if k > 0 {
            poisson *= lambda / k as f64;
        }
        sum += (pmf.get(k).copied().unwrap_or(0.0) - poisson).abs();
    }
    let mut tail = 0.0;
    let mut k = cap;
    loop {
        k += 1;
        poisson *= lambda / k as f64;
        if poisson == 0.0 || tail + poisson == tail {
            break;
        }
        tail += poisson;
    }
    Ok(0.5 * (sum + tail))
}

/// `sup_t |F̂(t) - (1 - exp(-h t))|`.
pub fn ks_distance(dist: &EmpiricalDistribution, model: &PraModel) -> f64 {
    let rate = model.rate;
    ks_one_sample(dist.times(), |t| -(-rate * t).exp_m1())
}

/// Summary written by the `distance` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub lambda: f64,
    pub bound: f64,
    /// Only computed for at most [`EXACT_TV_MAX_INDICATORS`] indicators.
    pub exact_tv: Option<f64>,
    /// KS distance between sampled failure times and the PRA model.
    pub ks: f64,
    /// Number of indicators (grid intervals).
    pub n: usize,
    pub grid_hash: String,
}
