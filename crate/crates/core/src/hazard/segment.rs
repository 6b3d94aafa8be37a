use serde::{Deserialize, Serialize};

/// Parametric hazard shape, evaluated at the elapsed time `u` since the
/// start of its segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "params", rename_all = "snake_case")]
pub enum HazardForm {
    /// `h(u) = level`
    Constant { level: f64 },
    /// `h(u) = intercept + slope * u`
    Linear { intercept: f64, slope: f64 },
    /// `h(u) = base + coefficient * u^exponent`
    Power {
        base: f64,
        coefficient: f64,
        exponent: f64,
    },
    /// `h(u) = base * exp(growth * u)`
    ExponentialGrowth { base: f64, growth: f64 },
}

impl HazardForm {
    pub fn value(&self, u: f64) -> f64 {
        match *self {
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

    /// Value at the start of the segment, `h(0)` of the form.
    pub fn start_value(&self) -> f64 {
        match *self {
            HazardForm::Constant { level } => level,
            HazardForm::Linear { intercept, .. } => intercept,
            HazardForm::Power { base, .. } => base,
            HazardForm::ExponentialGrowth { base, .. } => base,
        }
    }

    /// Closed-form antiderivative `∫_0^u h(s) ds`.
    pub fn integral(&self, u: f64) -> f64 {
        match *self {
            HazardForm::Constant { level } => level * u,
            HazardForm::Linear { intercept, slope } => intercept * u + 0.5 * slope * u * u,
            HazardForm::Power {
                base,
                coefficient,
                exponent,
            } => base * u + coefficient * u.powf(exponent + 1.0) / (exponent + 1.0),
            HazardForm::ExponentialGrowth { base, growth } => {
                if growth == 0.0 {
                    base * u
                } else {
                    base * (growth * u).exp_m1() / growth
                }
            }
        }
    }

    /// Sufficient parameter condition for `h` to be non-decreasing in `u`.
    pub fn is_nondecreasing(&self) -> bool {
        match *self {
            HazardForm::Constant { .. } => true,
            HazardForm::Linear { slope, .. } => slope >= 0.0,
            HazardForm::Power { coefficient, .. } => coefficient >= 0.0,
            HazardForm::ExponentialGrowth { growth, .. } => growth >= 0.0,
        }
    }

    /// True when the form never changes with `u`.
    pub fn is_flat(&self) -> bool {
        match *self {
            HazardForm::Constant { .. } => true,
            HazardForm::Linear { slope, .. } => slope == 0.0,
            HazardForm::Power { coefficient, .. } => coefficient == 0.0,
            HazardForm::ExponentialGrowth { growth, .. } => growth == 0.0,
        }
    }

    /// Elapsed time at which a decreasing form first reaches zero, if it does.
    pub fn zero_crossing(&self) -> Option<f64> {
        match *self {
            HazardForm::Constant { level } => (level <= 0.0).then_some(0.0),
            HazardForm::Linear { intercept, slope } => {
                if intercept <= 0.0 {
                    Some(0.0)
                } else if slope < 0.0 {
                    Some(-intercept / slope)
                } else {
                    None
                }
            }
            HazardForm::Power {
                base,
                coefficient,
                exponent,
            } => {
                if base <= 0.0 {
                    Some(0.0)
                } else if coefficient < 0.0 {
                    Some((-base / coefficient).powf(1.0 / exponent))
                } else {
                    None
                }
            }
            HazardForm::ExponentialGrowth { base, .. } => (base <= 0.0).then_some(0.0),
        }
    }

    pub(crate) fn params(&self) -> [f64; 3] {
        match *self {
            HazardForm::Constant { level } => [level, 0.0, 0.0],
            HazardForm::Linear { intercept, slope } => [intercept, slope, 0.0],
            HazardForm::Power {
                base,
                coefficient,
                exponent,
            } => [base, coefficient, exponent],
            HazardForm::ExponentialGrowth { base, growth } => [base, growth, 0.0],
        }
    }

    /// Solve `integral(u) = target` in closed form where the antiderivative
    /// is invertible. Returns `None` when the form needs a numeric solve, or
    /// `Some(f64::INFINITY)` when the target is never reached.
    pub fn closed_form_inverse(&self, target: f64) -> Option<f64> {
        if target <= 0.0 {
            return Some(0.0);
        }
        match *self {
            HazardForm::Constant { level } => Some(if level > 0.0 {
                target / level
            } else {
                f64::INFINITY
            }),
            HazardForm::Linear { intercept, slope } => {
                if slope == 0.0 {
                    return Some(if intercept > 0.0 {
                        target / intercept
                    } else {
                        f64::INFINITY
                    });
                }
                let disc = intercept * intercept + 2.0 * slope * target;
                if disc < 0.0 {
                    return Some(f64::INFINITY);
                }
                // Rationalised root of slope/2 u² + intercept u - target = 0.
                let denom = intercept + disc.sqrt();
                if denom <= 0.0 {
                    Some(f64::INFINITY)
                } else {
                    Some(2.0 * target / denom)
                }
            }
            HazardForm::Power {
                base,
                coefficient,
                exponent,
            } => {
                if base == 0.0 && coefficient > 0.0 {
                    Some(((exponent + 1.0) * target / coefficient).powf(1.0 / (exponent + 1.0)))
                } else if coefficient == 0.0 {
                    Some(if base > 0.0 {
                        target / base
                    } else {
                        f64::INFINITY
                    })
                } else {
                    None
                }
            }
            HazardForm::ExponentialGrowth { base, growth } => {
                if base <= 0.0 {
                    return Some(f64::INFINITY);
                }
                if growth == 0.0 {
                    return Some(target / base);
                }
                let arg = growth * target / base;
                if arg <= -1.0 {
                    Some(f64::INFINITY)
                } else {
                    Some(arg.ln_1p() / growth)
                }
            }
        }
    }
}

/// One piece of a hazard trajectory, active from `start` until the next
/// segment begins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HazardSegment {
    pub start: f64,
    #[serde(flatten)]
    pub form: HazardForm,
}

impl HazardSegment {
    pub fn new(start: f64, form: HazardForm) -> Self {
        Self { start, form }
    }
}

/// Restorative action at `time`, bringing the hazard down to `post_hazard`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaintenanceEpoch {
    pub time: f64,
    pub post_hazard: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_inverse_matches_integral() {
        let f = HazardForm::Linear {
            intercept: 1.0,
            slope: 2.0,
        };
        assert_eq!(f.integral(1.5), 3.75);
        let u = f.closed_form_inverse(3.75).unwrap();
        assert!((u - 1.5).abs() < 1e-14);
    }

    #[test]
    fn exponential_inverse_matches_integral() {
        let f = HazardForm::ExponentialGrowth {
            base: 0.2,
            growth: 0.3,
        };
        let u = f.closed_form_inverse(f.integral(4.0)).unwrap();
        assert!((u - 4.0).abs() < 1e-12);
    }

    #[test]
    fn power_with_base_needs_numeric_solve() {
        let f = HazardForm::Power {
            base: 0.1,
            coefficient: 1.0,
            exponent: 2.0,
        };
        assert!(f.closed_form_inverse(1.0).is_none());
        let g = HazardForm::Power {
            base: 0.0,
            coefficient: 3.0,
            exponent: 2.0,
        };
        // ∫ 3u² = u³
        assert!((g.closed_form_inverse(8.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_crossings() {
        let f = HazardForm::Linear {
            intercept: 1.0,
            slope: -0.5,
        };
        assert_eq!(f.zero_crossing(), Some(2.0));
        assert_eq!(HazardForm::Constant { level: 0.3 }.zero_crossing(), None);
    }

    #[test]
    fn segment_json_shape() {
        let seg = HazardSegment::new(
            0.0,
            HazardForm::Linear {
                intercept: 0.1,
                slope: 0.05,
            },
        );
        let text = serde_json::to_string(&seg).unwrap();
        assert_eq!(
            text,
            r#"{"start":0.0,"form":"linear","params":{"intercept":0.1,"slope":0.05}}"#
        );
        let back: HazardSegment = serde_json::from_str(&text).unwrap();
        assert_eq!(back, seg);
    }
}
