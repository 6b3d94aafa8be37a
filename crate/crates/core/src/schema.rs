//! Versioned JSON documents for trajectories and scenarios.
//!
//! Trajectory document:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "segments": [
//!     {"start": 0.0, "form": "linear", "params": {"intercept": 0.1, "slope": 0.05}},
//!     {"start": 10.0, "form": "constant", "params": {"level": 0.1}}
//!   ],
//!   "maintenance_epochs": [{"time": 10.0, "post_hazard": 0.1}]
//! }
//! ```
//!
//! Segment forms and their params: `constant {level}`, `linear {intercept,
//! slope}`, `power {base, coefficient, exponent}`, `exponential_growth {base,
//! growth}`.
//!
//! Scenario document:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "label": "figure1-sawtooth",
//!   "model": {"h0": 0.1, "growth": {"form": "linear", "params": {"slope": 0.05}}},
//!   "policy": {"kind": "periodic_perfect", "params": {"period": 10.0}},
//!   "horizon": 30.0
//! }
//! ```
//!
//! Growth forms: `linear {slope}`, `power {coefficient, exponent}`,
//! `exponential_growth {rate}`. Policy kinds: `periodic_perfect {period}`,
//! `periodic_imperfect {period, improvement}`, `threshold_perfect
//! {trigger_hazard}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::hazard::TrajectorySpec;
use crate::scenario::Scenario;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemaError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("unsupported schema_version {0:?}, expected {SCHEMA_VERSION}")]
    Version(Option<u64>),
    #[error("document is neither a trajectory (`segments`) nor a scenario (`model`)")]
    UnknownKind,
}

impl From<serde_json::Error> for SchemaError {
    fn from(e: serde_json::Error) -> Self {
        SchemaError::Json(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TrajectoryDocument {
    schema_version: u32,
    #[serde(flatten)]
    trajectory: TrajectorySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ScenarioDocument {
    schema_version: u32,
    #[serde(flatten)]
    scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Trajectory(TrajectorySpec),
    Scenario(Scenario),
}

pub fn parse_document(text: &str) -> Result<Document, SchemaError> {
    let value: Value = serde_json::from_str(text)?;
    let version = value.get("schema_version").and_then(Value::as_u64);
    if version != Some(SCHEMA_VERSION as u64) {
        return Err(SchemaError::Version(version));
    }
    if value.get("segments").is_some() {
        let doc: TrajectoryDocument = serde_json::from_value(value)?;
        Ok(Document::Trajectory(doc.trajectory))
    } else if value.get("model").is_some() {
        let doc: ScenarioDocument = serde_json::from_value(value)?;
        Ok(Document::Scenario(doc.scenario))
    } else {
        Err(SchemaError::UnknownKind)
    }
}

pub fn trajectory_json(trajectory: &TrajectorySpec) -> String {
    serde_json::to_string_pretty(&TrajectoryDocument {
        schema_version: SCHEMA_VERSION,
        trajectory: trajectory.clone(),
    })
    .expect("trajectory serializes")
}

pub fn scenario_json(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(&ScenarioDocument {
        schema_version: SCHEMA_VERSION,
        scenario: scenario.clone(),
    })
    .expect("scenario serializes")
}
