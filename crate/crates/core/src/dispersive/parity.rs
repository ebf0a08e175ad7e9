use serde::{Deserialize, Serialize};

use super::model::DispersiveModel;
use crate::error::{invalid, Error, Result};

/// Relative size of `χ₁χ₂ − χ₁₂²` below which the condition counts as degenerate.
const DEGENERATE_DISCRIMINANT: f64 = 1e-12;

/// Drive detunings `(Δ_{d1}, Δ_{d2})` that make the reflection depend only on parity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParityDetunings {
    /// Branch with `Δ_{d1} ≥ 0`.
    pub upper: [f64; 2],
    /// Branch with `Δ_{d1} ≤ 0`.
    pub lower: [f64; 2],
    /// `χ₁χ₂ − χ₁₂²`.
    pub discriminant: f64,
    /// Set when the discriminant vanishes: both branches collapse to (0, 0)
    /// and even and odd parities reflect identically.
    pub degenerate: bool,
}

/// `Δ_{d1} = ±√3 √(κ₁/κ₂) √P`, `Δ_{d2} = ∓√3 √(κ₂/κ₁) √P` with `P = χ₁χ₂ − χ₁₂²`.
pub fn parity_detunings(model: &DispersiveModel, kappa: [f64; 2]) -> Result<ParityDetunings> {
    if !(kappa[0] > 0.0 && kappa[1] > 0.0) {
        return Err(invalid(format!("decay rates must be positive, got {kappa:?}")));
    }
    let [chi1, chi2] = model.chi;
    let p = model.parity_discriminant();
    let scale = (chi1 * chi1).max(chi2 * chi2).max(model.switch * model.switch);
    if p.abs() <= DEGENERATE_DISCRIMINANT * scale {
        return Ok(ParityDetunings { upper: [0.0; 2], lower: [0.0; 2], discriminant: p, degenerate: true });
    }
    if p < 0.0 {
        return Err(Error::ParityConditionUnsatisfiable { discriminant: p });
    }
    let root = (3.0 * p).sqrt();
    let ratio = (kappa[0] / kappa[1]).sqrt();
    let d1 = root * ratio;
    let d2 = -root / ratio;
    Ok(ParityDetunings { upper: [d1, d2], lower: [-d1, -d2], discriminant: p, degenerate: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersive::{duffing_dispersive, DuffingLevels, QubitCavityCoupling};
    use approx::assert_relative_eq;

    #[test]
    fn symmetric_shifts() {
        let chi = 0.5;
        let p = parity_detunings(&DispersiveModel::manual([chi, chi], 0.0), [1.0, 1.0]).unwrap();
        assert_relative_eq!(p.upper[0], 3f64.sqrt() * chi, max_relative = 1e-15);
        assert_relative_eq!(p.upper[1], -3f64.sqrt() * chi, max_relative = 1e-15);
        assert_eq!(p.lower, [-p.upper[0], -p.upper[1]]);
        assert!(!p.degenerate);
    }

    #[test]
    fn unequal_decay_rates_rescale() {
        let p = parity_detunings(&DispersiveModel::manual([0.4, 0.9], 0.1), [1.0, 4.0]).unwrap();
        let root = (3.0 * (0.36 - 0.01f64)).sqrt();
        assert_relative_eq!(p.upper[0], root / 2.0, max_relative = 1e-14);
        assert_relative_eq!(p.upper[1], -2.0 * root, max_relative = 1e-14);
    }

    #[test]
    fn transmon_models_are_unsatisfiable() {
        let levels = DuffingLevels { frequency: 6.0, anharmonicity: -0.3 };
        let c = QubitCavityCoupling { g: [0.1, 0.08], detuning: [-1.5, -1.2] };
        let m = duffing_dispersive(levels, &c).unwrap();
        assert!(matches!(
            parity_detunings(&m, [0.005, 0.005]),
            Err(Error::ParityConditionUnsatisfiable { .. })
        ));
    }

    #[test]
    fn boundary_is_degenerate() {
        let p = parity_detunings(&DispersiveModel::manual([0.5, 0.5], 0.5), [1.0, 1.0]).unwrap();
        assert!(p.degenerate);
        assert_eq!(p.upper, [0.0, 0.0]);
    }

    #[test]
    fn rejects_nonpositive_kappa() {
        assert!(parity_detunings(&DispersiveModel::manual([0.5, 0.5], 0.0), [0.0, 1.0]).is_err());
    }
}
