//! Checks a trajectory candidate against the five principles of rational
//! hazard.
//!
//! Structural problems (no segments, unordered starts, epochs that do not sit
//! on a segment boundary, non-finite numbers) are reported as a
//! [`StructureError`]; they make the candidate meaningless rather than
//! irrational. Everything else ends up as a [`Violation`] in the
//! [`ValidationReport`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::segment::{HazardForm, HazardSegment, MaintenanceEpoch};
use super::TrajectorySpec;

/// Relative tolerance under which two hazard values at a boundary are treated
/// as the same value.
pub const CONTINUITY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Principle {
    /// `0 < h(t) < ∞`
    PositiveFinite = 1,
    /// `h` is right-continuous
    RightContinuous = 2,
    /// `h` is non-decreasing between maintenance epochs
    NonDecreasing = 3,
    /// `h` decreases only at declared maintenance epochs
    DecreasesOnlyAtMaintenance = 4,
    /// `h(0) = inf h`
    GoodAsNew = 5,
}

impl Principle {
    pub fn id(self) -> u8 {
        self as u8
    }
}

impl From<Principle> for u8 {
    fn from(p: Principle) -> u8 {
        p.id()
    }
}

impl TryFrom<u8> for Principle {
    type Error = String;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        Ok(match id {
            1 => Principle::PositiveFinite,
            2 => Principle::RightContinuous,
            3 => Principle::NonDecreasing,
            4 => Principle::DecreasesOnlyAtMaintenance,
            5 => Principle::GoodAsNew,
            other => return Err(format!("no principle {other}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Time(f64),
    Segment(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Time(t) => write!(f, "t={t}"),
            Location::Segment(i) => write!(f, "segment {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(rename = "principle_id")]
    pub principle: Principle,
    pub location: Location,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Informational findings that do not break any principle (upward jumps).
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn violates(&self, principle: Principle) -> bool {
        self.violations.iter().any(|v| v.principle == principle)
    }

    /// Earliest recorded location for `principle`, if violated.
    pub fn first(&self, principle: Principle) -> Option<&Violation> {
        self.violations.iter().find(|v| v.principle == principle)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "valid: {}", self.valid)?;
        for v in &self.violations {
            writeln!(
                f,
                "violation: principle {} at {}: {}",
                v.principle.id(),
                v.location,
                v.message
            )?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("trajectory has no segments")]
    Empty,
    #[error("first segment starts at {0}, expected 0")]
    FirstStartNotZero(f64),
    #[error("segment {index} starts at {start}, not after the previous segment")]
    UnorderedSegments { index: usize, start: f64 },
    #[error("segment {0} has a non-finite start or parameter")]
    NonFiniteSegment(usize),
    #[error("segment {index}: power exponent {exponent} must be > 0")]
    InvalidExponent { index: usize, exponent: f64 },
    #[error("maintenance epoch {0} has a non-finite or non-positive time, or non-finite hazard")]
    InvalidEpoch(usize),
    #[error("maintenance epochs out of order or duplicated at t={0}")]
    UnorderedEpochs(f64),
    #[error("maintenance epoch at t={0} does not coincide with a segment boundary")]
    EpochOffBoundary(f64),
}

/// Structural checks shared by validation and the unvalidated constructor.
pub(crate) fn check_structure(spec: &TrajectorySpec) -> Result<(), StructureError> {
    let segs = &spec.segments;
    if segs.is_empty() {
        return Err(StructureError::Empty);
    }
    for (i, s) in segs.iter().enumerate() {
        if !s.start.is_finite() || s.form.params().iter().any(|p| !p.is_finite()) {
            return Err(StructureError::NonFiniteSegment(i));
        }
        if let HazardForm::Power { exponent, .. } = s.form {
            if exponent <= 0.0 {
                return Err(StructureError::InvalidExponent { index: i, exponent });
            }
        }
    }
    if segs[0].start != 0.0 {
        return Err(StructureError::FirstStartNotZero(segs[0].start));
    }
    for (i, pair) in segs.windows(2).enumerate() {
        if pair[1].start <= pair[0].start {
            return Err(StructureError::UnorderedSegments {
                index: i + 1,
                start: pair[1].start,
            });
        }
    }
    let mut prev = 0.0;
    for (i, e) in spec.maintenance_epochs.iter().enumerate() {
        if !e.time.is_finite() || e.time <= 0.0 || !e.post_hazard.is_finite() {
            return Err(StructureError::InvalidEpoch(i));
        }
        if e.time <= prev {
            return Err(StructureError::UnorderedEpochs(e.time));
        }
        prev = e.time;
        if !segs.iter().any(|s| s.start == e.time) {
            return Err(StructureError::EpochOffBoundary(e.time));
        }
    }
    Ok(())
}

fn same_value(a: f64, b: f64) -> bool {
    (a - b).abs() <= CONTINUITY_RTOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn segment_end(segs: &[HazardSegment], i: usize) -> f64 {
    segs.get(i + 1).map_or(f64::INFINITY, |s| s.start)
}

/// Validate a candidate trajectory against all five principles.
pub fn validate_trajectory(spec: &TrajectorySpec) -> Result<ValidationReport, StructureError> {
    check_structure(spec)?;
    let segs = &spec.segments;
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    let h0 = segs[0].form.start_value();

    for (i, seg) in segs.iter().enumerate() {
        let end = segment_end(segs, i);
        let span = end - seg.start;
        let start_value = seg.form.start_value();
        let bounded = end.is_finite();

        // Principle 1: monotone forms reach their minimum at an end point.
        if start_value <= 0.0 {
            violations.push(Violation {
                principle: Principle::PositiveFinite,
                location: Location::Time(seg.start),
                message: format!("hazard {start_value} is not positive"),
            });
        } else if let Some(u) = seg.form.zero_crossing().filter(|&u| u < span) {
            violations.push(Violation {
                principle: Principle::PositiveFinite,
                location: Location::Time(seg.start + u),
                message: format!("hazard reaches zero inside segment {i}"),
            });
        } else if bounded && !seg.form.value(span).is_finite() {
            violations.push(Violation {
                principle: Principle::PositiveFinite,
                location: Location::Time(end),
                message: format!("hazard overflows before the end of segment {i}"),
            });
        }

        if !seg.form.is_nondecreasing() {
            violations.push(Violation {
                principle: Principle::NonDecreasing,
                location: Location::Segment(i),
                message: format!("{:?} decreases within its segment", seg.form),
            });
        }

        // Principle 5: no value anywhere below h(0).
        if i > 0 && start_value < h0 {
            violations.push(Violation {
                principle: Principle::GoodAsNew,
                location: Location::Time(seg.start),
                message: format!("hazard {start_value} is below h(0) = {h0}"),
            });
        } else if !seg.form.is_nondecreasing() {
            let minimum = if bounded {
                seg.form.value(span)
            } else {
                f64::NEG_INFINITY
            };
            if minimum < h0 {
                violations.push(Violation {
                    principle: Principle::GoodAsNew,
                    location: Location::Segment(i),
                    message: format!("hazard drops below h(0) = {h0} within segment {i}"),
                });
            }
        }

        if i == 0 {
            continue;
        }
        let prev = &segs[i - 1];
        let left = prev.form.value(seg.start - prev.start);
        let declared: Option<&MaintenanceEpoch> =
            spec.maintenance_epochs.iter().find(|e| e.time == seg.start);
        let continuous = same_value(left, start_value);
        match declared {
            Some(epoch) => {
                if !same_value(epoch.post_hazard, start_value) {
                    violations.push(Violation {
                        principle: Principle::RightContinuous,
                        location: Location::Time(seg.start),
                        message: format!(
                            "declared value {} at the epoch differs from the right limit {}",
                            epoch.post_hazard, start_value
                        ),
                    });
                }
                if continuous || start_value > left {
                    violations.push(Violation {
                        principle: Principle::DecreasesOnlyAtMaintenance,
                        location: Location::Time(seg.start),
                        message: format!(
                            "maintenance epoch does not decrease hazard (left limit {left}, after {start_value})"
                        ),
                    });
                }
            }
            None => {
                if !continuous && start_value < left {
                    violations.push(Violation {
                        principle: Principle::DecreasesOnlyAtMaintenance,
                        location: Location::Time(seg.start),
                        message: format!("undeclared decrease from {left} to {start_value}"),
                    });
                } else if !continuous {
                    notes.push(format!(
                        "upward jump at t={} from {left} to {start_value}",
                        seg.start
                    ));
                }
            }
        }
    }

    violations.sort_by(|a, b| {
        location_key(spec, a.location)
            .total_cmp(&location_key(spec, b.location))
            .then(a.principle.cmp(&b.principle))
    });
    Ok(ValidationReport {
        valid: violations.is_empty(),
        violations,
        notes,
    })
}

fn location_key(spec: &TrajectorySpec, loc: Location) -> f64 {
    match loc {
        Location::Time(t) => t,
        Location::Segment(i) => spec.segments[i].start,
    }
}
