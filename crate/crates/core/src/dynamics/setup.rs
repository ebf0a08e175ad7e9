use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::pulse::DrivePulse;
use crate::dispersive::{parity_detunings, DispersiveModel};
use crate::error::{invalid, Result};

pub const HAMMING_WEIGHTS: [u8; 4] = [0, 1, 2, 3];

/// `s = 3 − 2h_w`, the collective σz eigenvalue of three qubits.
pub fn hamming_prefactor(hamming_weight: u8) -> f64 {
    3.0 - 2.0 * f64::from(hamming_weight)
}

/// Resonator bus, drive detunings, dispersive shifts and drive pulse.
///
/// The dynamics use `χ₁, χ₂, χ₁₂`; the static coupling χ̄₁₂ is not part of
/// the equations of motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetup {
    pub kappa: [f64; 2],
    /// Drive detunings `Δ_{di} = ω − ωᵢ`.
    pub detuning: [f64; 2],
    pub chi: [f64; 2],
    pub switch: f64,
    pub pulse: DrivePulse,
}

impl MeasurementSetup {
    pub fn new(kappa: [f64; 2], detuning: [f64; 2], model: &DispersiveModel, pulse: DrivePulse) -> Result<Self> {
        let s = Self { kappa, detuning, chi: model.chi, switch: model.switch, pulse };
        s.validate()?;
        Ok(s)
    }

    /// Setup driven at the `Δ_{d1} ≥ 0` branch of the parity condition.
    pub fn at_parity_point(kappa: [f64; 2], model: &DispersiveModel, pulse: DrivePulse) -> Result<Self> {
        let p = parity_detunings(model, kappa)?;
        Self::new(kappa, p.upper, model, pulse)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa[0] > 0.0 && self.kappa[1] > 0.0) {
            return Err(invalid(format!("decay rates must be positive, got {:?}", self.kappa)));
        }
        let values = [self.detuning[0], self.detuning[1], self.chi[0], self.chi[1], self.switch];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("detunings and shifts must be finite"));
        }
        self.pulse.validate()
    }

    pub(crate) fn check_weight(hamming_weight: u8) -> Result<()> {
        if hamming_weight > 3 {
            return Err(invalid(format!("Hamming weight {hamming_weight} outside 0..=3")));
        }
        Ok(())
    }

    /// `(√κ₁, √κ₂)`.
    pub fn coupling_vector(&self) -> [f64; 2] {
        self.kappa.map(f64::sqrt)
    }

    /// Real symmetric frequency matrix `M` for Hamming weight `h_w` and drive
    /// offset ν from the frame frequency.
    pub fn frequency_matrix(&self, hamming_weight: u8, drive_offset: f64) -> [[f64; 2]; 2] {
        let s = hamming_prefactor(hamming_weight);
        let u1 = self.detuning[0] + s * self.chi[0] - drive_offset;
        let u2 = self.detuning[1] + s * self.chi[1] - drive_offset;
        [[u1, s * self.switch], [s * self.switch, u2]]
    }

    /// Generator `A = −iM − vvᵀ/2` of the homogeneous dynamics.
    pub fn generator(&self, hamming_weight: u8) -> [[Complex64; 2]; 2] {
        let m = self.frequency_matrix(hamming_weight, 0.0);
        let v = self.coupling_vector();
        std::array::from_fn(|i| std::array::from_fn(|j| Complex64::new(-v[i] * v[j] / 2.0, -m[i][j])))
    }

    /// Largest rate entering the equations of motion for this Hamming weight.
    pub fn rate_scale(&self, hamming_weight: u8) -> f64 {
        let m = self.frequency_matrix(hamming_weight, 0.0);
        [self.kappa[0], self.kappa[1], m[0][0].abs(), m[1][1].abs(), m[0][1].abs()]
            .into_iter()
            .fold(0.0, f64::max)
    }
}
