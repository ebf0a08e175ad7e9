use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Cosine-ramped rectangular drive `β_in(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrivePulse {
    /// Steady amplitude ε_ss.
    pub amplitude: f64,
    /// Ramp duration σ.
    pub ramp: f64,
    pub on: f64,
    /// Start of the ramp-down; may be infinite for a drive that never stops.
    pub off: f64,
}

impl DrivePulse {
    pub fn new(amplitude: f64, ramp: f64, on: f64, off: f64) -> Result<Self> {
        let p = Self { amplitude, ramp, on, off };
        p.validate()?;
        Ok(p)
    }

    /// Drive that ramps up over `ramp` from t = 0 and stays on.
    pub fn switched_on(amplitude: f64, ramp: f64) -> Self {
        Self { amplitude, ramp, on: 0.0, off: f64::INFINITY }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.amplitude.is_finite() {
            return Err(invalid("pulse amplitude must be finite"));
        }
        if !(self.ramp > 0.0 && self.ramp.is_finite()) {
            return Err(invalid(format!("ramp duration must be positive, got {}", self.ramp)));
        }
        if !(self.on >= 0.0 && self.on.is_finite()) {
            return Err(invalid(format!("switch-on time must be non-negative, got {}", self.on)));
        }
        if !(self.on + self.ramp <= self.off) {
            return Err(invalid("ramp-up must finish before the switch-off time"));
        }
        Ok(())
    }

    /// Time after which the drive is identically zero.
    pub fn end(&self) -> f64 {
        self.off + self.ramp
    }

    pub fn envelope(&self, t: f64) -> f64 {
        let eps = self.amplitude;
        if t < self.on {
            0.0
        } else if t < self.on + self.ramp {
            eps / 2.0 * (1.0 - (PI / self.ramp * (t - self.on)).cos())
        } else if t < self.off {
            eps
        } else if t < self.off + self.ramp {
            eps / 2.0 * (1.0 + (PI / self.ramp * (t - self.off)).cos())
        } else {
            0.0
        }
    }
}
