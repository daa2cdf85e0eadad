use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::Refinable;

/// A real number split as `significand × 10^exp10`, with the significand in
/// `[1, 10)` (sign carried by the significand), or exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledReal {
    #[serde(rename = "sig")]
    pub significand: f64,
    pub exp10: i32,
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal {
        significand: 0.0,
        exp10: 0,
    };

    /// Splits `v` using its shortest round-trip decimal form.
    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || !v.is_finite() {
            return ScaledReal {
                significand: if v == 0.0 { 0.0 } else { v },
                exp10: 0,
            };
        }
        let text = format!("{v:e}");
        let (mant, exp) = text.split_once('e').expect("exponent form always has an 'e'");
        ScaledReal {
            significand: mant.parse().expect("valid mantissa"),
            exp10: exp.parse().expect("valid exponent"),
        }
    }

    /// `mantissa · e^ln_scale`, without forming the product when it would
    /// leave the double range.
    pub fn from_ln(mantissa: f64, ln_scale: f64) -> Self {
        if mantissa == 0.0 {
            return ScaledReal::ZERO;
        }
        let direct = mantissa * ln_scale.exp();
        if direct.is_normal() && ln_scale.abs() < 700.0 {
            return ScaledReal::from_f64(direct);
        }
        let lg = mantissa.abs().log10() + ln_scale / std::f64::consts::LN_10;
        let mut exp10 = lg.floor();
        let mut sig = 10f64.powf(lg - exp10);
        if sig >= 10.0 {
            sig /= 10.0;
            exp10 += 1.0;
        }
        ScaledReal {
            significand: sig.copysign(mantissa),
            exp10: exp10 as i32,
        }
    }

    /// Plain `f64`, infinite or zero when out of range.
    pub fn to_f64(&self) -> f64 {
        if self.significand == 0.0 || !self.significand.is_finite() {
            return self.significand;
        }
        format!("{:e}", self.significand)
            .split_once('e')
            .map(|(m, e)| {
                let e: i64 = e.parse().unwrap_or(0);
                format!("{m}e{}", e + self.exp10 as i64)
            })
            .and_then(|s| s.parse().ok())
            .unwrap_or(f64::NAN)
    }

    /// Significand rescaled to `10^exp10` (for the `× 10^k` table columns).
    pub fn in_units_of(&self, exp10: i32) -> f64 {
        self.significand * 10f64.powi(self.exp10 - exp10)
    }
}

impl From<f64> for ScaledReal {
    fn from(v: f64) -> Self {
        ScaledReal::from_f64(v)
    }
}

impl Refinable for ScaledReal {
    fn rel_diff(&self, other: &Self) -> f64 {
        if self.significand == 0.0 && other.significand == 0.0 {
            return 0.0;
        }
        let e = if self.significand == 0.0 {
            other.exp10
        } else if other.significand == 0.0 {
            self.exp10
        } else {
            self.exp10.max(other.exp10)
        };
        let a = self.in_units_of(e);
        let b = other.in_units_of(e);
        let scale = a.abs().max(b.abs());
        (a - b).abs() / scale
    }
}

impl fmt::Display for ScaledReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e{}", self.significand, self.exp10)
    }
}
