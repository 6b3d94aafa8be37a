//! Constant-rate comparators for the time of first failure.
//!
//! Two exponential laws are compared against the true failure CDF
//! `F(t) = 1 - exp(-H(t))`:
//!
//! - the `h(0)` comparator `1 - exp(-h(0) t)`, which every trajectory
//!   satisfying the principles of rational hazard dominates pointwise;
//! - a PRA model `1 - exp(-h t)` whose rate is either given or set to
//!   `1 / E[T]`. It carries no pointwise guarantee and may cross `F`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{check_grid, GridError};
use crate::hazard::{EvalError, HazardTrajectory};

/// Slack allowed below zero on `F(t) - (1 - exp(-h(0) t))` before the
/// ordering is declared broken.
pub const ORDERING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PraError {
    #[error("mean time to failure {0} must be positive and finite")]
    InvalidMttf(f64),
    #[error("rate {0} must be positive and finite")]
    InvalidRate(f64),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Given,
    DerivedFromMttf,
}

/// Exponential time-to-failure model with constant rate `rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PraModel {
    pub rate: f64,
    pub provenance: Provenance,
}

impl PraModel {
    pub fn given(rate: f64) -> Result<Self, PraError> {
        if rate > 0.0 && rate.is_finite() {
            Ok(Self {
                rate,
                provenance: Provenance::Given,
            })
        } else {
            Err(PraError::InvalidRate(rate))
        }
    }

    /// Rate `1 / E[T]` of the trajectory's own failure-time law.
    pub fn from_trajectory(traj: &HazardTrajectory) -> Result<Self, PraError> {
        pra_rate_from_mttf(traj.mean_time_to_failure())
    }

    pub fn reliability(&self, t: f64) -> Result<f64, PraError> {
        pra_reliability(self, t)
    }

    pub fn failure_cdf(&self, t: f64) -> Result<f64, PraError> {
        Ok(exponential_cdf(self.rate, nonnegative(t)?))
    }
}

fn nonnegative(t: f64) -> Result<f64, PraError> {
    if t >= 0.0 {
        Ok(t)
    } else {
        Err(EvalError::NegativeTime(t).into())
    }
}

fn exponential_cdf(rate: f64, t: f64) -> f64 {
    -(-rate * t).exp_m1()
}

/// `h = 1 / mttf`.
pub fn pra_rate_from_mttf(mttf: f64) -> Result<PraModel, PraError> {
    if !(mttf > 0.0 && mttf.is_finite()) {
        return Err(PraError::InvalidMttf(mttf));
    }
    Ok(PraModel {
        rate: 1.0 / mttf,
        provenance: Provenance::DerivedFromMttf,
    })
}

/// `exp(-h t)`.
pub fn pra_reliability(model: &PraModel, t: f64) -> Result<f64, PraError> {
    Ok((-model.rate * nonnegative(t)?).exp())
}

/// `exp(-h(0) t)`, an upper bound on `R(t)` for rational trajectories.
pub fn exponential_bound(traj: &HazardTrajectory, t: f64) -> Result<f64, PraError> {
    Ok((-traj.initial_hazard() * nonnegative(t)?).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub grid: Vec<f64>,
    pub f_true: Vec<f64>,
    pub f_h0_bound: Vec<f64>,
    pub f_pra: Vec<f64>,
    /// `f_true - f_h0_bound`.
    pub pointwise_gaps: Vec<f64>,
    /// `f_true - f_pra`.
    pub pra_gaps: Vec<f64>,
    pub sup_gap_h0: f64,
    pub sup_gap_pra: f64,
    pub min_gap_h0: f64,
    pub min_gap_pra: f64,
    pub ordering_holds: bool,
    pub initial_hazard: f64,
    pub pra: PraModel,
    /// Grid times where `f_true - f_pra` changes sign relative to the
    /// previous grid point.
    pub pra_crossings: Vec<f64>,
}

/// Compare `F` with the `h(0)` comparator only.
pub fn check_stochastic_order(
    traj: &HazardTrajectory,
    grid: &[f64],
) -> Result<ComparisonReport, PraError> {
    let model = PraModel::given(traj.initial_hazard())?;
    underestimation_report(traj, &model, grid)
}

/// Compare `F` with both the `h(0)` comparator and `model`.
pub fn underestimation_report(
    traj: &HazardTrajectory,
    model: &PraModel,
    grid: &[f64],
) -> Result<ComparisonReport, PraError> {
    check_grid(grid)?;
    let h0 = traj.initial_hazard();
    let f_true = grid
        .iter()
        .map(|&t| traj.failure_cdf(t))
        .collect::<Result<Vec<_>, _>>()?;
    let f_h0_bound: Vec<f64> = grid.iter().map(|&t| exponential_cdf(h0, t)).collect();
    let f_pra: Vec<f64> = grid
        .iter()
        .map(|&t| exponential_cdf(model.rate, t))
        .collect();
    let pointwise_gaps: Vec<f64> = f_true.iter().zip(&f_h0_bound).map(|(a, b)| a - b).collect();
    let pra_gaps: Vec<f64> = f_true.iter().zip(&f_pra).map(|(a, b)| a - b).collect();

    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let min_gap_h0 = min(&pointwise_gaps);

    let mut pra_crossings = Vec::new();
    let mut last_sign = 0i8;
    for (&t, &g) in grid.iter().zip(&pra_gaps) {
        let sign = if g > ORDERING_SLACK {
            1
        } else if g < -ORDERING_SLACK {
            -1
        } else {
            0
        };
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                pra_crossings.push(t);
            }
            last_sign = sign;
        }
    }

    Ok(ComparisonReport {
        sup_gap_h0: max(&pointwise_gaps),
        sup_gap_pra: max(&pra_gaps),
        min_gap_h0,
        min_gap_pra: min(&pra_gaps),
        ordering_holds: min_gap_h0 >= -ORDERING_SLACK,
        initial_hazard: h0,
        pra: *model,
        pra_crossings,
        grid: grid.to_vec(),
        f_true,
        f_h0_bound,
        f_pra,
        pointwise_gaps,
        pra_gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hazard::HazardForm;

    #[test]
    fn rate_from_mttf() {
        let m = pra_rate_from_mttf(2.0).unwrap();
        assert_eq!(m.rate, 0.5);
        assert_eq!(m.provenance, Provenance::DerivedFromMttf);
        assert_eq!(pra_rate_from_mttf(1.0).unwrap().rate, 1.0);
        assert!(pra_rate_from_mttf(0.0).is_err());
        assert!(pra_rate_from_mttf(-3.0).is_err());
    }

    #[test]
    fn reliability_values() {
        let m = PraModel::given(0.5).unwrap();
        assert!((pra_reliability(&m, 2.0).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(pra_reliability(&m, 0.0).unwrap(), 1.0);
        let one = PraModel::given(1.0).unwrap();
        assert!((pra_reliability(&one, 2f64.ln()).unwrap() - 0.5).abs() < 1e-16);
        assert!(pra_reliability(&m, -1.0).is_err());
    }

    #[test]
    fn bound_touches_constant_hazard() {
        let c = HazardTrajectory::constant(0.7).unwrap();
        for &t in &[0.0, 0.3, 5.0] {
            assert_eq!(exponential_bound(&c, t).unwrap(), c.reliability(t).unwrap());
        }
    }

    #[test]
    fn constant_hazard_gaps_vanish() {
        let c = HazardTrajectory::constant(0.5).unwrap();
        let r = check_stochastic_order(&c, &[0.0, 1.0, 2.0, 10.0]).unwrap();
        assert!(r.ordering_holds);
        assert!(r.pointwise_gaps.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn linear_hazard_crosses_mttf_comparator() {
        let traj = HazardTrajectory::new(crate::hazard::TrajectorySpec {
            segments: vec![crate::hazard::HazardSegment::new(
                0.0,
                HazardForm::Linear {
                    intercept: 1.0,
                    slope: 2.0,
                },
            )],
            maintenance_epochs: vec![],
        })
        .unwrap();
        let model = PraModel::from_trajectory(&traj).unwrap();
        let grid = crate::grid::uniform_grid(3.0, 61).unwrap();
        let r = underestimation_report(&traj, &model, &grid).unwrap();
        assert!(r.ordering_holds);
        assert!(r.sup_gap_pra > 0.0);
        assert!(r.min_gap_pra < 0.0);
        assert_eq!(r.pra_crossings.len(), 1);
    }

    #[test]
    fn rejects_malformed_grid() {
        let c = HazardTrajectory::constant(0.5).unwrap();
        assert!(matches!(
            check_stochastic_order(&c, &[1.0, 0.5]),
            Err(PraError::Grid(_))
        ));
    }
}
