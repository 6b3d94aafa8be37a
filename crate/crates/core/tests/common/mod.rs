//! Test support: independent numerical oracles, a random generator of
//! trajectories that satisfy all five principles, and single-principle
//! mutations of those trajectories.
//!
//! Nothing here calls into the closed-form antiderivatives or inversions of
//! the library; hazard values are recomputed from the segment parameters.
#![allow(dead_code)]

use rand::Rng;
use riskcheck_core::hazard::{HazardForm, HazardSegment, MaintenanceEpoch, TrajectorySpec};

/// Adaptive Simpson with Richardson correction.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    // Below this the refinement would only chase rounding noise.
    let tol = tol.max(64.0 * f64::EPSILON * whole.abs());
    simpson_step(f, a, b, fa, fb, fc, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
        + simpson_step(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
}

/// Hazard of a form at elapsed time `u`, written out independently.
pub fn form_hazard(form: &HazardForm, u: f64) -> f64 {
    match *form {
        HazardForm::Constant { level } => level,
        HazardForm::Linear { intercept, slope } => intercept + slope * u,
        HazardForm::Power {
            base,
            coefficient,
            exponent,
        } => base + coefficient * u.powf(exponent),
        HazardForm::ExponentialGrowth { base, growth } => base * (growth * u).exp(),
    }
}

pub fn oracle_hazard(spec: &TrajectorySpec, t: f64) -> f64 {
    let seg = spec
        .segments
        .iter()
        .rev()
        .find(|s| s.start <= t)
        .expect("t >= 0");
    form_hazard(&seg.form, t - seg.start)
}

/// `∫_0^t h` by adaptive Simpson, one smooth piece per segment.
pub fn oracle_cumulative(spec: &TrajectorySpec, t: f64) -> f64 {
    let mut total = 0.0;
    for (i, seg) in spec.segments.iter().enumerate() {
        if seg.start >= t {
            break;
        }
        let end = spec
            .segments
            .get(i + 1)
            .map_or(f64::INFINITY, |s| s.start)
            .min(t);
        let f = |u: f64| form_hazard(&seg.form, u);
        let span = end - seg.start;
        let scale = (form_hazard(&seg.form, 0.0) + form_hazard(&seg.form, span)).abs() * span;
        total += simpson(&f, 0.0, span, 1e-14 * scale.max(1e-300));
    }
    total
}

/// `∫_0^∞ exp(-H(t)) dt` where `H` itself comes from [`oracle_cumulative`]
/// evaluated incrementally; truncated once `H > 40`.
pub fn oracle_mttf(spec: &TrajectorySpec) -> f64 {
    // Break points: segment starts, then steps of a quarter mean lifetime.
    let mut points: Vec<f64> = spec.segments.iter().map(|s| s.start).collect();
    let mut total = 0.0;
    let mut i = 0;
    let mut cum_start = 0.0;
    loop {
        let a = points[i];
        let b = if i + 1 < points.len() {
            points[i + 1]
        } else {
            let next = a + 0.25 / oracle_hazard(spec, a).max(1e-3);
            points.push(next);
            next
        };
        let seg = spec
            .segments
            .iter()
            .rev()
            .find(|s| s.start <= a)
            .expect("a >= 0");
        let h0_piece = cum_start;
        let cum = |t: f64| {
            let g = |u: f64| form_hazard(&seg.form, u);
            h0_piece + simpson(&g, a - seg.start, t - seg.start, 1e-15)
        };
        let r = |t: f64| (-cum(t)).exp();
        total += simpson(&r, a, b, 1e-15);
        cum_start = cum(b);
        if cum_start > 40.0 {
            return total;
        }
        i += 1;
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn random_form<R: Rng>(rng: &mut R, base: f64, h0: f64) -> HazardForm {
    match rng.random_range(0..4) {
        0 => HazardForm::Constant { level: base },
        1 => HazardForm::Linear {
            intercept: base,
            slope: rng.random_range(0.0..1.0) * h0 * h0,
        },
        2 => {
            let exponent = rng.random_range(1.0..3.0);
            HazardForm::Power {
                base,
                coefficient: rng.random_range(0.0..1.0) * h0.powf(exponent + 1.0),
                exponent,
            }
        }
        _ => HazardForm::ExponentialGrowth {
            base,
            growth: rng.random_range(0.0..0.8) * h0,
        },
    }
}

/// Random trajectory satisfying all five principles with at least
/// `min_epochs` maintenance epochs. Time scales are tied to `1/h0`.
pub fn random_trajectory<R: Rng>(rng: &mut R, min_epochs: usize) -> TrajectorySpec {
    let h0 = log_uniform(rng, 0.05, 2.0);
    let target_segments = rng.random_range(1..=6).max(min_epochs + 1);
    let mut segments = vec![HazardSegment::new(0.0, random_form(rng, h0, h0))];
    if min_epochs > 0 && segments[0].form.is_flat() {
        segments[0].form = HazardForm::Linear {
            intercept: h0,
            slope: rng.random_range(0.2..1.0) * h0 * h0,
        };
    }
    let mut epochs = Vec::new();
    while segments.len() < target_segments || epochs.len() < min_epochs {
        let prev = *segments.last().unwrap();
        let start = prev.start + rng.random_range(0.2..2.0) / h0;
        let left = form_hazard(&prev.form, start - prev.start);
        let degraded = left > h0 * (1.0 + 1e-6);
        let need_epoch = epochs.len() < min_epochs;
        let choice = rng.random_range(0.0..1.0);
        let base = if degraded && (need_epoch || choice < 0.45) {
            let post = if rng.random_bool(0.3) {
                h0
            } else {
                h0 + rng.random_range(0.0..0.9) * (left - h0)
            };
            epochs.push(MaintenanceEpoch {
                time: start,
                post_hazard: post,
            });
            post
        } else if choice < 0.75 {
            left
        } else {
            left * (1.0 + rng.random_range(0.01..0.5))
        };
        let mut form = random_form(rng, base, h0);
        if need_epoch && form.is_flat() {
            form = HazardForm::Linear {
                intercept: base,
                slope: rng.random_range(0.2..1.0) * h0 * h0,
            };
        }
        segments.push(HazardSegment::new(start, form));
    }
    TrajectorySpec {
        segments,
        maintenance_epochs: epochs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Principle 1: a segment starting at zero or negative hazard.
    NonPositiveLevel,
    /// Principle 2: an epoch declaring its left-limit as the value at the
    /// epoch, i.e. left-continuous.
    BoundaryMismatch,
    /// Principle 3: a negative slope inside a segment.
    NegativeSlope,
    /// Principle 4: a downward jump with its epoch declaration removed.
    UndeclaredDrop,
    /// Principle 5: post-maintenance hazard below h(0).
    BelowInitial,
}

pub const ALL_MUTATIONS: [Mutation; 5] = [
    Mutation::NonPositiveLevel,
    Mutation::BoundaryMismatch,
    Mutation::NegativeSlope,
    Mutation::UndeclaredDrop,
    Mutation::BelowInitial,
];

impl Mutation {
    pub fn principle_id(self) -> u8 {
        match self {
            Mutation::NonPositiveLevel => 1,
            Mutation::BoundaryMismatch => 2,
            Mutation::NegativeSlope => 3,
            Mutation::UndeclaredDrop => 4,
            Mutation::BelowInitial => 5,
        }
    }
}

fn with_base(form: HazardForm, b: f64) -> HazardForm {
    match form {
        HazardForm::Constant { .. } => HazardForm::Constant { level: b },
        HazardForm::Linear { slope, .. } => HazardForm::Linear {
            intercept: b,
            slope,
        },
        HazardForm::Power {
            coefficient,
            exponent,
            ..
        } => HazardForm::Power {
            base: b,
            coefficient,
            exponent,
        },
        HazardForm::ExponentialGrowth { growth, .. } => {
            HazardForm::ExponentialGrowth { base: b, growth }
        }
    }
}

fn segment_at(spec: &TrajectorySpec, t: f64) -> usize {
    spec.segments.iter().position(|s| s.start == t).unwrap()
}

/// Apply one mutation. Requires a trajectory with at least one epoch.
pub fn mutate<R: Rng>(spec: &TrajectorySpec, mutation: Mutation, rng: &mut R) -> TrajectorySpec {
    let mut out = spec.clone();
    let h0 = form_hazard(&spec.segments[0].form, 0.0);
    assert!(!spec.maintenance_epochs.is_empty());
    let epoch_index = rng.random_range(0..spec.maintenance_epochs.len());
    let epoch = spec.maintenance_epochs[epoch_index];
    match mutation {
        Mutation::NonPositiveLevel => {
            let i = rng.random_range(0..out.segments.len());
            let b = if rng.random_bool(0.5) {
                0.0
            } else {
                -rng.random_range(0.01..1.0) * h0
            };
            out.segments[i].form = with_base(out.segments[i].form, b);
        }
        Mutation::BoundaryMismatch => {
            let i = segment_at(spec, epoch.time);
            let prev = spec.segments[i - 1];
            out.maintenance_epochs[epoch_index].post_hazard =
                form_hazard(&prev.form, epoch.time - prev.start);
        }
        Mutation::NegativeSlope => {
            let i = rng.random_range(0..out.segments.len());
            let seg = out.segments[i];
            let b = form_hazard(&seg.form, 0.0);
            let slope = match spec.segments.get(i + 1) {
                Some(next) => 0.5 * b / (next.start - seg.start),
                None => 0.01 * b * h0,
            };
            out.segments[i].form = HazardForm::Linear {
                intercept: b,
                slope: -slope,
            };
        }
        Mutation::UndeclaredDrop => {
            out.maintenance_epochs.remove(epoch_index);
        }
        Mutation::BelowInitial => {
            let i = segment_at(spec, epoch.time);
            let post = h0 * rng.random_range(0.2..0.9);
            out.segments[i].form = with_base(out.segments[i].form, post);
            out.maintenance_epochs[epoch_index].post_hazard = post;
        }
    }
    out
}
