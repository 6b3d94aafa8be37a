//! Degradation models and maintenance policies compiled into hazard
//! trajectories.
//!
//! Each maintenance cycle restarts the degradation shape from the
//! post-maintenance hazard `p`:
//!
//! | growth               | cycle hazard                |
//! |----------------------|-----------------------------|
//! | `Linear(slope)`      | `p + slope * u`             |
//! | `Power(c, k)`        | `p + c * u^k`               |
//! | `ExponentialGrowth`  | `p * exp(rate * u)`         |
//!
//! Perfect maintenance restores `p = h0`; imperfect maintenance with
//! improvement `ρ` restores `p = h0 + (1 - ρ)(h⁻ - h0)` where `h⁻` is the
//! hazard just before the epoch. Maintenance is instantaneous and the last
//! cycle extends past the horizon forever.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hazard::{
    HazardForm, HazardSegment, HazardTrajectory, MaintenanceEpoch, TrajectoryError, TrajectorySpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "params", rename_all = "snake_case")]
pub enum Growth {
    Linear { slope: f64 },
    Power { coefficient: f64, exponent: f64 },
    ExponentialGrowth { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegradationModel {
    pub h0: f64,
    pub growth: Growth,
}

impl DegradationModel {
    /// Hazard form of a cycle that starts at hazard `base`.
    pub fn cycle_form(&self, base: f64) -> HazardForm {
        match self.growth {
            Growth::Linear { slope } if slope != 0.0 => HazardForm::Linear {
                intercept: base,
                slope,
            },
            Growth::Power {
                coefficient,
                exponent,
            } if coefficient != 0.0 => HazardForm::Power {
                base,
                coefficient,
                exponent,
            },
            Growth::ExponentialGrowth { rate } if rate != 0.0 => {
                HazardForm::ExponentialGrowth { base, growth: rate }
            }
            _ => HazardForm::Constant { level: base },
        }
    }

    /// Elapsed time for a fresh cycle to climb from `h0` to `level`, or
    /// `None` when the growth never gets there.
    pub fn time_to_reach(&self, level: f64) -> Option<f64> {
        let rise = level - self.h0;
        if rise <= 0.0 {
            return Some(0.0);
        }
        let u = match self.growth {
            Growth::Linear { slope } => rise / slope,
            Growth::Power {
                coefficient,
                exponent,
            } => (rise / coefficient).powf(1.0 / exponent),
            Growth::ExponentialGrowth { rate } => (level / self.h0).ln() / rate,
        };
        (u.is_finite() && u > 0.0).then_some(u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum MaintenancePolicy {
    PeriodicPerfect { period: f64 },
    PeriodicImperfect { period: f64, improvement: f64 },
    ThresholdPerfect { trigger_hazard: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub label: String,
    pub model: DegradationModel,
    pub policy: MaintenancePolicy,
    pub horizon: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("invalid scenario parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "maintenance at t={time} would not lower the hazard (left limit {left}, after {post})"
    )]
    NoImprovement { time: f64, left: f64, post: f64 },
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

fn require(ok: bool, what: impl Into<String>) -> Result<(), ScenarioError> {
    if ok {
        Ok(())
    } else {
        Err(ScenarioError::InvalidParameter(what.into()))
    }
}

impl Scenario {
    pub fn check(&self) -> Result<(), ScenarioError> {
        let m = &self.model;
        require(m.h0 > 0.0 && m.h0.is_finite(), format!("h0 = {}", m.h0))?;
        match m.growth {
            Growth::Linear { slope } => require(
                slope >= 0.0 && slope.is_finite(),
                format!("slope = {slope}"),
            )?,
            Growth::Power {
                coefficient,
                exponent,
            } => {
                require(
                    coefficient >= 0.0 && coefficient.is_finite(),
                    format!("coefficient = {coefficient}"),
                )?;
                require(
                    exponent >= 1.0 && exponent.is_finite(),
                    format!("exponent = {exponent}"),
                )?;
            }
            Growth::ExponentialGrowth { rate } => {
                require(rate >= 0.0 && rate.is_finite(), format!("rate = {rate}"))?
            }
        }
        match self.policy {
            MaintenancePolicy::PeriodicPerfect { period } => require(
                period > 0.0 && period.is_finite(),
                format!("period = {period}"),
            )?,
            MaintenancePolicy::PeriodicImperfect {
                period,
                improvement,
            } => {
                require(
                    period > 0.0 && period.is_finite(),
                    format!("period = {period}"),
                )?;
                require(
                    improvement > 0.0 && improvement <= 1.0,
                    format!("improvement = {improvement}"),
                )?;
            }
            MaintenancePolicy::ThresholdPerfect { trigger_hazard } => require(
                trigger_hazard > m.h0 && trigger_hazard.is_finite(),
                format!("trigger_hazard = {trigger_hazard}"),
            )?,
        }
        require(
            self.horizon > 0.0 && self.horizon.is_finite(),
            format!("horizon = {}", self.horizon),
        )
    }
}

/// Epoch times `k * cycle` for `k = 1, 2, …` up to and including the horizon.
fn epoch_times(cycle: f64, horizon: f64) -> Vec<f64> {
    // Slack so that a round horizon lands on its scheduled epoch.
    let count = (horizon / cycle * (1.0 + 1e-12)).floor() as u64;
    (1..=count).map(|k| k as f64 * cycle).collect()
}

/// Compile a scenario into a trajectory satisfying all five principles.
pub fn build_trajectory(scenario: &Scenario) -> Result<HazardTrajectory, ScenarioError> {
    scenario.check()?;
    let model = &scenario.model;
    let h0 = model.h0;
    let (times, improvement) = match scenario.policy {
        MaintenancePolicy::PeriodicPerfect { period } => {
            (epoch_times(period, scenario.horizon), 1.0)
        }
        MaintenancePolicy::PeriodicImperfect {
            period,
            improvement,
        } => (epoch_times(period, scenario.horizon), improvement),
        MaintenancePolicy::ThresholdPerfect { trigger_hazard } => (
            model
                .time_to_reach(trigger_hazard)
                .map(|u| epoch_times(u, scenario.horizon))
                .unwrap_or_default(),
            1.0,
        ),
    };

    let mut segments = vec![HazardSegment::new(0.0, model.cycle_form(h0))];
    let mut epochs = Vec::with_capacity(times.len());
    for &time in &times {
        let current = segments.last().expect("non-empty");
        let left = current.form.value(time - current.start);
        let post = h0 + (1.0 - improvement) * (left - h0);
        if post >= left || post.is_nan() {
            return Err(ScenarioError::NoImprovement { time, left, post });
        }
        segments.push(HazardSegment::new(time, model.cycle_form(post)));
        epochs.push(MaintenanceEpoch {
            time,
            post_hazard: post,
        });
    }
    Ok(HazardTrajectory::new(TrajectorySpec {
        segments,
        maintenance_epochs: epochs,
    })?)
}

/// Built-in demonstration scenarios.
pub fn scenario_catalog() -> Vec<Scenario> {
    let linear = DegradationModel {
        h0: 0.1,
        growth: Growth::Linear { slope: 0.05 },
    };
    vec![
        Scenario {
            label: "constant-control".into(),
            model: DegradationModel {
                h0: 0.1,
                growth: Growth::Linear { slope: 0.0 },
            },
            policy: MaintenancePolicy::ThresholdPerfect {
                trigger_hazard: 1.0,
            },
            horizon: 30.0,
        },
        Scenario {
            label: "unmaintained-linear".into(),
            model: linear,
            // Never reached before the horizon, so no maintenance happens.
            policy: MaintenancePolicy::ThresholdPerfect {
                trigger_hazard: 10.0,
            },
            horizon: 30.0,
        },
        Scenario {
            label: "figure1-sawtooth".into(),
            model: linear,
            policy: MaintenancePolicy::PeriodicPerfect { period: 10.0 },
            horizon: 30.0,
        },
        Scenario {
            label: "imperfect-drift".into(),
            model: linear,
            policy: MaintenancePolicy::PeriodicImperfect {
                period: 10.0,
                improvement: 0.5,
            },
            horizon: 60.0,
        },
        Scenario {
            label: "threshold-wearout".into(),
            model: DegradationModel {
                h0: 0.1,
                growth: Growth::Power {
                    coefficient: 0.01,
                    exponent: 2.0,
                },
            },
            policy: MaintenancePolicy::ThresholdPerfect {
                trigger_hazard: 0.5,
            },
            horizon: 40.0,
        },
    ]
}

/// Catalog entry by label.
pub fn catalog_scenario(label: &str) -> Option<Scenario> {
    scenario_catalog().into_iter().find(|s| s.label == label)
}
