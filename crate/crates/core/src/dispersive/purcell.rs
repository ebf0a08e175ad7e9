use serde::{Deserialize, Serialize};

use super::check_denominator;
use crate::error::{invalid, Result};

/// Purcell lifetime of the qubit transition through one resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PurcellTime {
    Finite { seconds: f64, times_kappa: f64 },
    /// The qubit transition does not couple to the resonator.
    NoDecay,
}

impl PurcellTime {
    pub fn times_kappa(&self) -> f64 {
        match self {
            PurcellTime::Finite { times_kappa, .. } => *times_kappa,
            PurcellTime::NoDecay => f64::INFINITY,
        }
    }
}

/// `T_p = [κ (√2 g/(ω̃₋ − ω_r))²]⁻¹` with κ in 1/s and frequencies in rad/s.
pub fn purcell_time(kappa: f64, g: f64, qubit_frequency: f64, resonator_frequency: f64) -> Result<PurcellTime> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(invalid(format!("decay rate must be positive, got {kappa}")));
    }
    let detuning = qubit_frequency - resonator_frequency;
    check_denominator("qubit-resonator detuning", detuning, resonator_frequency)?;
    if g == 0.0 {
        return Ok(PurcellTime::NoDecay);
    }
    let ratio = std::f64::consts::SQRT_2 * g / detuning;
    let times_kappa = 1.0 / (ratio * ratio);
    Ok(PurcellTime::Finite { seconds: times_kappa / kappa, times_kappa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::mhz_to_angular;
    use approx::assert_relative_eq;

    #[test]
    fn reference_setup_qubit_a() {
        let kappa = mhz_to_angular(5.0);
        let t = purcell_time(kappa, mhz_to_angular(106.6), mhz_to_angular(6000.0), mhz_to_angular(7500.0)).unwrap();
        assert_relative_eq!(t.times_kappa(), 100.1, max_relative = 0.02);
        match t {
            PurcellTime::Finite { seconds, times_kappa } => assert_relative_eq!(seconds * kappa, times_kappa),
            PurcellTime::NoDecay => unreachable!(),
        }
    }

    #[test]
    fn uncoupled_has_no_decay() {
        assert_eq!(purcell_time(1.0, 0.0, 6.0, 7.5).unwrap(), PurcellTime::NoDecay);
        assert_eq!(PurcellTime::NoDecay.times_kappa(), f64::INFINITY);
    }

    #[test]
    fn resonance_is_rejected() {
        assert!(purcell_time(1.0, 0.1, 7.5, 7.5).is_err());
    }
}
