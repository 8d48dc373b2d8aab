//! Free parameters of the two surgery families.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Golden-mean rotation number `(sqrt(5) - 1) / 2`, the canonical
/// bounded-type irrational.
pub const GOLDEN_ALPHA: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Theorem1,
    Theorem2,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Theorem1 => write!(f, "theorem1"),
            Family::Theorem2 => write!(f, "theorem2"),
        }
    }
}

/// All free parameters of one surgery construction.
///
/// `theorem1` uses `alpha`, `m`, `x1`, `damping` and `x0`; `theorem2` uses
/// `strip_index` and `damping`. Unused fields keep their defaults so a single
/// struct can describe either family in configs and reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub family: Family,
    /// Rotation number of the inner Siegel-disk model (theorem1).
    pub alpha: f64,
    /// Integer translation index, at least 3 (theorem1).
    pub m: i32,
    /// Surgery abscissa: the gluing strip lives in `Re z <= x1` (theorem1).
    pub x1: f64,
    /// Strip index `M`: the theorem2 gluing strip is centered on
    /// `Re z = -2*pi*M`.
    #[serde(rename = "M")]
    pub strip_index: u32,
    /// Damping constant `L > 0` in the perturbation `exp(... - L)`.
    #[serde(rename = "L")]
    pub damping: f64,
    /// Log-radius of the inner invariant disk of the Siegel model;
    /// a configuration input, not a computed quantity (theorem1).
    pub x0: f64,
    /// Validity margin demanded of the quasiregularity and growth checks.
    pub margin: f64,
}

impl ConstructionParams {
    pub fn theorem1_defaults() -> Self {
        Self {
            family: Family::Theorem1,
            alpha: GOLDEN_ALPHA,
            m: 3,
            x1: -50.0,
            strip_index: 4,
            damping: 60.0,
            x0: -1.0,
            margin: 0.05,
        }
    }

    pub fn theorem2_defaults() -> Self {
        Self {
            family: Family::Theorem2,
            damping: 25.0,
            ..Self::theorem1_defaults()
        }
    }

    /// Center of the theorem2 cap disk, `-2*pi*M - 2*pi*i`.
    pub fn strip_center(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(-2.0 * PI * self.strip_index as f64, -2.0 * PI)
    }

    /// Checks the family invariants. Returns non-fatal warnings (e.g. a
    /// rotation number that looks rational) on success.
    pub fn validate(&self) -> Result<Vec<String>, ParamError> {
        let mut warnings = Vec::new();
        if !(self.damping > 0.0) {
            return Err(ParamError::NonPositiveDamping(self.damping));
        }
        match self.family {
            Family::Theorem1 => {
                if self.m < 3 {
                    return Err(ParamError::TranslationIndexTooSmall(self.m));
                }
                if !(self.alpha > 0.0 && self.alpha < 1.0) {
                    return Err(ParamError::AlphaOutOfRange(self.alpha));
                }
                if !(self.x0 < 0.0) {
                    return Err(ParamError::X0NotNegative(self.x0));
                }
                if !(self.x1 < self.x0 - PI) {
                    return Err(ParamError::X1TooLarge {
                        x1: self.x1,
                        limit: self.x0 - PI,
                    });
                }
                if let Some(q) = looks_rational(self.alpha) {
                    warnings.push(format!(
                        "alpha = {} is numerically rational (denominator {q}); \
                         Siegel-type behavior is not expected",
                        self.alpha
                    ));
                }
            }
            Family::Theorem2 => {
                if self.strip_index == 0 {
                    return Err(ParamError::StripIndexZero);
                }
            }
        }
        Ok(warnings)
    }
}

/// Denominator `q <= 64` with `|alpha*q - round(alpha*q)| < 1e-9`, if any.
fn looks_rational(alpha: f64) -> Option<u32> {
    (1..=64).find(|&q| {
        let t = alpha * q as f64;
        (t - t.round()).abs() < 1e-9
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("damping constant L must be positive, got {0}")]
    NonPositiveDamping(f64),
    #[error("translation index m must be at least 3, got {0}")]
    TranslationIndexTooSmall(i32),
    #[error("alpha must lie in (0, 1), got {0}")]
    AlphaOutOfRange(f64),
    #[error("x0 must be negative, got {0}")]
    X0NotNegative(f64),
    #[error("x1 must be below x0 - pi = {limit}, got {x1}")]
    X1TooLarge { x1: f64, limit: f64 },
    #[error("strip index M must be at least 1")]
    StripIndexZero,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_cleanly() {
        assert!(ConstructionParams::theorem1_defaults()
            .validate()
            .unwrap()
            .is_empty());
        assert!(ConstructionParams::theorem2_defaults()
            .validate()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn m_below_three_rejected() {
        let p = ConstructionParams {
            m: 2,
            ..ConstructionParams::theorem1_defaults()
        };
        assert!(matches!(
            p.validate(),
            Err(ParamError::TranslationIndexTooSmall(2))
        ));
    }

    #[test]
    fn x1_must_clear_x0_by_pi() {
        let p = ConstructionParams {
            x1: -3.0,
            ..ConstructionParams::theorem1_defaults()
        };
        assert!(matches!(p.validate(), Err(ParamError::X1TooLarge { .. })));
    }

    #[test]
    fn rational_alpha_flagged() {
        let p = ConstructionParams {
            alpha: 0.5,
            ..ConstructionParams::theorem1_defaults()
        };
        let warnings = p.validate().unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("rational"));
    }

    #[test]
    fn golden_alpha_not_flagged() {
        assert!(looks_rational(GOLDEN_ALPHA).is_none());
    }
}
