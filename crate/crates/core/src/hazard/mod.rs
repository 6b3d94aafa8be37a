//! Piecewise hazard trajectories and the reliability calculus built on them.
//!
//! A trajectory is a sequence of parametric segments covering `[0, ∞)`, the
//! last one extending forever, plus the maintenance epochs at which the
//! hazard is allowed to drop. Cumulative hazard is evaluated from per-form
//! closed-form antiderivatives, so `R(t) = exp(-H(t))` carries no quadrature
//! error.

mod segment;
mod validate;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::quadrature;

pub use segment::{HazardForm, HazardSegment, MaintenanceEpoch};
pub use validate::{
    validate_trajectory, Location, Principle, StructureError, ValidationReport, Violation,
    CONTINUITY_RTOL,
};

/// Cumulative hazard at which `R < 1e-12`; the mean-time-to-failure integral
/// switches to its tail treatment from here.
pub const MTTF_TAIL_CUMULATIVE_HAZARD: f64 = 27.6;
/// Absolute tolerance on the tail increments of the MTTF integral.
pub const MTTF_TAIL_TOLERANCE: f64 = 1e-12;
/// Absolute time tolerance of the numeric cumulative-hazard inversion.
pub const INVERSION_TIME_TOLERANCE: f64 = 1e-12;
/// Newton iterations attempted before falling back to bisection.
pub const NEWTON_MAX_ITERATIONS: usize = 50;

/// Candidate trajectory as written in trajectory files. Nothing about it is
/// checked until it is turned into a [`HazardTrajectory`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySpec {
    pub segments: Vec<HazardSegment>,
    #[serde(default)]
    pub maintenance_epochs: Vec<MaintenanceEpoch>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("malformed trajectory: {0}")]
    Structure(#[from] StructureError),
    #[error("trajectory violates the principles of rational hazard:\n{0}")]
    Violations(ValidationReport),
    #[error("hazard must be non-negative and grow without bound: {0}")]
    Degenerate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("time {0} is negative or not a number")]
    NegativeTime(f64),
    #[error("finite-difference step {0} must be positive and finite")]
    InvalidStep(f64),
    #[error("t={t} lies within dt of the segment boundary at {boundary}, where h may jump")]
    NearDiscontinuity { t: f64, boundary: f64 },
    #[error("reliability underflows at t={0}")]
    Underflow(f64),
}

fn check_time(t: f64) -> Result<f64, EvalError> {
    if t >= 0.0 {
        Ok(t)
    } else {
        Err(EvalError::NegativeTime(t))
    }
}

/// A hazard trajectory `h(t)`, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct HazardTrajectory {
    spec: TrajectorySpec,
    /// `H` at each segment start.
    cumulative_at_start: Vec<f64>,
    rational: bool,
}

impl HazardTrajectory {
    /// Build a trajectory that satisfies all five principles.
    pub fn new(spec: TrajectorySpec) -> Result<Self, TrajectoryError> {
        let report = validate_trajectory(&spec)?;
        if !report.valid {
            return Err(TrajectoryError::Violations(report));
        }
        Ok(Self::assemble(spec, true))
    }

    /// Build a trajectory that is structurally sound and has a non-negative
    /// hazard whose integral diverges, without enforcing principles 2–5 or
    /// strict positivity. Used for textbook shapes such as `h(t) = 2t` and
    /// for counter-examples to the ordering result.
    pub fn unvalidated(spec: TrajectorySpec) -> Result<Self, TrajectoryError> {
        validate::check_structure(&spec)?;
        let n = spec.segments.len();
        for (i, seg) in spec.segments.iter().enumerate() {
            let start_value = seg.form.start_value();
            if start_value < 0.0 {
                return Err(TrajectoryError::Degenerate(format!(
                    "segment {i} starts at negative hazard {start_value}"
                )));
            }
            if i + 1 < n {
                let span = spec.segments[i + 1].start - seg.start;
                let end = seg.form.value(span);
                if !(end >= 0.0 && end.is_finite()) {
                    return Err(TrajectoryError::Degenerate(format!(
                        "segment {i} ends at hazard {end}"
                    )));
                }
            } else if !seg.form.is_nondecreasing() || (seg.form.is_flat() && start_value == 0.0) {
                return Err(TrajectoryError::Degenerate(
                    "last segment must be non-decreasing and not identically zero".into(),
                ));
            }
        }
        let rational = validate_trajectory(&spec).map(|r| r.valid).unwrap_or(false);
        Ok(Self::assemble(spec, rational))
    }

    fn assemble(spec: TrajectorySpec, rational: bool) -> Self {
        let mut cumulative_at_start = Vec::with_capacity(spec.segments.len());
        let mut acc = 0.0;
        cumulative_at_start.push(acc);
        for pair in spec.segments.windows(2) {
            acc += pair[0].form.integral(pair[1].start - pair[0].start);
            cumulative_at_start.push(acc);
        }
        Self {
            spec,
            cumulative_at_start,
            rational,
        }
    }

    /// Single constant-hazard segment.
    pub fn constant(level: f64) -> Result<Self, TrajectoryError> {
        Self::new(TrajectorySpec {
            segments: vec![HazardSegment::new(0.0, HazardForm::Constant { level })],
            maintenance_epochs: vec![],
        })
    }

    /// Single segment of the given form starting at zero, without
    /// principle checks.
    pub fn single(form: HazardForm) -> Result<Self, TrajectoryError> {
        Self::unvalidated(TrajectorySpec {
            segments: vec![HazardSegment::new(0.0, form)],
            maintenance_epochs: vec![],
        })
    }

    pub fn spec(&self) -> &TrajectorySpec {
        &self.spec
    }

    pub fn segments(&self) -> &[HazardSegment] {
        &self.spec.segments
    }

    pub fn maintenance_epochs(&self) -> &[MaintenanceEpoch] {
        &self.spec.maintenance_epochs
    }

    /// Whether the trajectory satisfies all five principles.
    pub fn is_rational(&self) -> bool {
        self.rational
    }

    /// `h(0)`.
    pub fn initial_hazard(&self) -> f64 {
        self.spec.segments[0].form.start_value()
    }

    pub fn segment_end(&self, index: usize) -> f64 {
        self.spec
            .segments
            .get(index + 1)
            .map_or(f64::INFINITY, |s| s.start)
    }

    /// Index of the segment active at `t` (the incoming one at a boundary).
    pub fn segment_index(&self, t: f64) -> usize {
        self.spec.segments.partition_point(|s| s.start <= t) - 1
    }

    /// Right-continuous hazard value `h(t)`.
    pub fn hazard_at(&self, t: f64) -> Result<f64, EvalError> {
        let t = check_time(t)?;
        let i = self.segment_index(t);
        let seg = &self.spec.segments[i];
        Ok(seg.form.value(t - seg.start))
    }

    /// `lim_{s↑t} h(s)`; equals `h(0)` at `t = 0`.
    pub fn left_limit(&self, t: f64) -> Result<f64, EvalError> {
        let t = check_time(t)?;
        if t == 0.0 {
            return Ok(self.initial_hazard());
        }
        let i = self.spec.segments.partition_point(|s| s.start < t) - 1;
        let seg = &self.spec.segments[i];
        Ok(seg.form.value(t - seg.start))
    }

    /// Largest hazard value on `[a, b)`; every form is monotone on its
    /// segment, so only segment end points need to be inspected.
    pub fn max_hazard_on(&self, a: f64, b: f64) -> f64 {
        let first = self.segment_index(a);
        let mut best = f64::NEG_INFINITY;
        for i in first..self.spec.segments.len() {
            let seg = &self.spec.segments[i];
            if seg.start >= b {
                break;
            }
            let lo = seg.start.max(a);
            let hi = self.segment_end(i).min(b);
            best = best
                .max(seg.form.value(lo - seg.start))
                .max(seg.form.value(hi - seg.start));
        }
        best
    }

    /// `H(t) = ∫_0^t h(s) ds`.
    pub fn cumulative_hazard(&self, t: f64) -> Result<f64, EvalError> {
        let t = check_time(t)?;
        if t == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        let i = self.segment_index(t);
        let seg = &self.spec.segments[i];
        Ok(self.cumulative_at_start[i] + seg.form.integral(t - seg.start))
    }

    /// `R(t) = exp(-H(t))`.
    pub fn reliability(&self, t: f64) -> Result<f64, EvalError> {
        Ok((-self.cumulative_hazard(t)?).exp())
    }

    /// `F(t) = 1 - R(t)`, evaluated without cancellation.
    pub fn failure_cdf(&self, t: f64) -> Result<f64, EvalError> {
        Ok(-(-self.cumulative_hazard(t)?).exp_m1())
    }

    /// Central-difference estimate of `-R'(t)/R(t)`. Only meaningful away
    /// from segment boundaries, so those are refused.
    pub fn recovered_hazard(&self, t: f64, dt: f64) -> Result<f64, EvalError> {
        let t = check_time(t)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(EvalError::InvalidStep(dt));
        }
        if t - dt < 0.0 {
            return Err(EvalError::NegativeTime(t - dt));
        }
        if let Some(b) = self
            .spec
            .segments
            .iter()
            .skip(1)
            .map(|s| s.start)
            .find(|&b| (b - t).abs() <= dt)
        {
            return Err(EvalError::NearDiscontinuity { t, boundary: b });
        }
        let r = self.reliability(t)?;
        if r <= f64::MIN_POSITIVE {
            return Err(EvalError::Underflow(t));
        }
        let ahead = self.reliability(t + dt)?;
        let behind = self.reliability(t - dt)?;
        Ok((behind - ahead) / (2.0 * dt * r))
    }

    /// Smallest `t` with `H(t) = target`, i.e. `H⁻¹(target)`.
    pub fn inverse_cumulative_hazard(&self, target: f64) -> f64 {
        if target <= 0.0 {
            return 0.0;
        }
        if target == f64::INFINITY {
            return f64::INFINITY;
        }
        let i = self.cumulative_at_start.partition_point(|&h| h <= target) - 1;
        let seg = &self.spec.segments[i];
        let span = self.segment_end(i) - seg.start;
        let remaining = target - self.cumulative_at_start[i];
        let u = match seg.form.closed_form_inverse(remaining) {
            Some(u) => u,
            None => solve_integral(&seg.form, remaining, span),
        };
        seg.start + u.min(span)
    }

    /// `E[T] = ∫_0^∞ R(t) dt`.
    pub fn mean_time_to_failure(&self) -> f64 {
        let cutoff = self.inverse_cumulative_hazard(MTTF_TAIL_CUMULATIVE_HAZARD);
        let mut total = 0.0;
        let reliability = |t: f64| (-self.cumulative_hazard(t).unwrap_or(f64::INFINITY)).exp();
        let last = self.segment_index(cutoff);
        for i in 0..=last {
            let a = self.spec.segments[i].start;
            let b = self.segment_end(i).min(cutoff);
            if b > a {
                total += quadrature::integrate(reliability, a, b, 1e-15, 1e-13).value;
            }
        }
        let tail_seg = &self.spec.segments[last];
        if last + 1 == self.spec.segments.len() {
            if let HazardForm::Constant { level } = tail_seg.form {
                return total + reliability(cutoff) / level;
            }
        }
        let mut a = cutoff;
        let mut width = 1.0 / self.hazard_at(cutoff).unwrap_or(1.0).max(f64::MIN_POSITIVE);
        for _ in 0..1000 {
            let b = a + width;
            let piece = quadrature::integrate(reliability, a, b, 1e-16, 1e-10).value;
            total += piece;
            if piece < MTTF_TAIL_TOLERANCE {
                break;
            }
            a = b;
            width *= 2.0;
        }
        total
    }

    /// SHA-256 of the canonical JSON serialization, as `sha256:<hex>`.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.spec).expect("trajectory serializes");
        format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))
    }
}

impl Serialize for HazardTrajectory {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.spec.serialize(serializer)
    }
}

/// Safeguarded Newton on `form.integral(u) = target` over `[0, span]`
/// (span may be infinite, in which case a bracket is grown first).
fn solve_integral(form: &HazardForm, target: f64, span: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = if span.is_finite() {
        span
    } else {
        let mut hi = 1.0;
        while form.integral(hi) < target {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        hi
    };
    if form.integral(hi) <= target {
        return hi;
    }
    let tol = |x: f64| INVERSION_TIME_TOLERANCE.max(4.0 * f64::EPSILON * x.abs());
    let mut x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let g = form.integral(x) - target;
        if g == 0.0 {
            return x;
        }
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let slope = form.value(x);
        let mut next = if slope > 0.0 { x - g / slope } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= tol(next) {
            return next;
        }
        x = next;
    }
    while hi - lo > tol(hi) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if form.integral(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
