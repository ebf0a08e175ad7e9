use serde::{Deserialize, Serialize};

use super::model::{DispersiveModel, Provenance, ValidityWarning};
use super::{check_denominator, CHARGE_INSENSITIVE_RATIO, DISPERSIVE_RATIO_LIMIT};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmonSpec {
    pub josephson_energy: f64,
    pub charging_energy: f64,
}

impl TransmonSpec {
    pub fn new(josephson_energy: f64, charging_energy: f64) -> Result<Self> {
        let spec = Self { josephson_energy, charging_energy };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.josephson_energy > 0.0 && self.josephson_energy.is_finite()) {
            return Err(invalid(format!("E_J must be positive, got {}", self.josephson_energy)));
        }
        if !(self.charging_energy > 0.0 && self.charging_energy.is_finite()) {
            return Err(invalid(format!("E_C must be positive, got {}", self.charging_energy)));
        }
        Ok(())
    }

    pub fn ej_over_ec(&self) -> f64 {
        self.josephson_energy / self.charging_energy
    }

    pub fn is_charge_insensitive(&self) -> bool {
        self.ej_over_ec() >= CHARGE_INSENSITIVE_RATIO
    }

    pub fn levels(&self) -> DuffingLevels {
        transmon_levels(self)
    }
}

/// Frequency and anharmonicity of a weakly anharmonic (Duffing) mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuffingLevels {
    pub frequency: f64,
    pub anharmonicity: f64,
}

/// `ω_t = √(8 E_C E_J) − E_C`, `δ = −E_C`.
pub fn transmon_levels(spec: &TransmonSpec) -> DuffingLevels {
    let (ej, ec) = (spec.josephson_energy, spec.charging_energy);
    DuffingLevels { frequency: (8.0 * ec * ej).sqrt() - ec, anharmonicity: -ec }
}

/// Couplings to the two resonators and detunings `Δᵢ = Ω_e − ωᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitCavityCoupling {
    pub g: [f64; 2],
    pub detuning: [f64; 2],
}

impl QubitCavityCoupling {
    /// `(|gᵢ/Δᵢ|, |√2 gᵢ/(Δᵢ+δ)|)` for each resonator.
    pub fn ratios(&self, anharmonicity: f64) -> [(f64, f64); 2] {
        std::array::from_fn(|i| {
            let (g, d) = (self.g[i], self.detuning[i]);
            ((g / d).abs(), (std::f64::consts::SQRT_2 * g / (d + anharmonicity)).abs())
        })
    }
}

pub fn transmon_dispersive(spec: &TransmonSpec, coupling: &QubitCavityCoupling) -> Result<DispersiveModel> {
    spec.validate()?;
    let mut model = duffing_dispersive(spec.levels(), coupling)?;
    if !spec.is_charge_insensitive() {
        model.warnings.insert(0, ValidityWarning::ChargeSensitive { ej_over_ec: spec.ej_over_ec() });
    }
    Ok(model)
}

/// Three-level dispersive model of a Duffing qubit coupled to two resonators.
pub fn duffing_dispersive(levels: DuffingLevels, coupling: &QubitCavityCoupling) -> Result<DispersiveModel> {
    let delta = levels.anharmonicity;
    let [g1, g2] = coupling.g;
    // Tolerance follows |δ| but never exceeds the detuning scale, so the
    // two-level limit |δ| → ∞ stays usable.
    let scale = delta.abs().min(coupling.detuning[0].abs().max(coupling.detuning[1].abs()));
    let mut lower = [0.0; 2];
    let mut upper = [0.0; 2];
    for i in 0..2 {
        lower[i] = check_denominator("qubit-resonator detuning", coupling.detuning[i], scale)?;
        upper[i] = check_denominator("detuning plus anharmonicity", coupling.detuning[i] + delta, scale)?;
    }
    // xᵢ = 1/Δᵢ − 1/(Δᵢ+δ); χᵢ = gᵢ² xᵢ and χ₁₂ = g₁g₂(x₁+x₂)/2.
    let x: [f64; 2] = std::array::from_fn(|i| 1.0 / lower[i] - 1.0 / upper[i]);
    let chi = [g1 * g1 * x[0], g2 * g2 * x[1]];
    let switch = g1 * g2 * 0.5 * (x[0] + x[1]);
    let static_coupling = -g1 * g2 * 0.5 * (1.0 / upper[0] + 1.0 / upper[1]);

    let bare_qubit = levels.frequency;
    let qubit_frequency = bare_qubit + g1 * g1 / lower[0] + g2 * g2 / lower[1];
    let resonator_frequencies: [f64; 2] = std::array::from_fn(|i| {
        let omega = bare_qubit - coupling.detuning[i];
        omega - coupling.g[i] * coupling.g[i] / upper[i]
    });

    let mut warnings = Vec::new();
    for (i, (direct, ladder)) in coupling.ratios(delta).into_iter().enumerate() {
        if direct >= DISPERSIVE_RATIO_LIMIT {
            warnings.push(ValidityWarning::CouplingRatio { resonator: i + 1, ratio: direct });
        }
        if ladder >= DISPERSIVE_RATIO_LIMIT {
            warnings.push(ValidityWarning::LadderRatio { resonator: i + 1, ratio: ladder });
        }
    }

    Ok(DispersiveModel {
        qubit_frequency,
        resonator_frequencies,
        chi,
        static_coupling,
        switch,
        provenance: Provenance::Transmon,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn levels_from_energies() {
        let l = transmon_levels(&TransmonSpec::new(15.0, 0.3).unwrap());
        assert_relative_eq!(l.frequency, 5.7, max_relative = 1e-14);
        assert_eq!(l.anharmonicity, -0.3);

        let x = 0.7;
        let l = transmon_levels(&TransmonSpec::new(x, x).unwrap());
        assert_relative_eq!(l.frequency, (2.0 * 2f64.sqrt() - 1.0) * x, max_relative = 1e-14);
    }

    #[test]
    fn levels_in_gigahertz() {
        // √(8·0.3·20) − 0.3 = √48 − 0.3
        let l = transmon_levels(&TransmonSpec::new(20.0, 0.3).unwrap());
        assert_relative_eq!(l.frequency, 6.628_203_230_275_509, max_relative = 1e-14);
    }

    #[test]
    fn rejects_nonpositive_energies() {
        assert!(TransmonSpec::new(0.0, 1.0).is_err());
        assert!(TransmonSpec::new(1.0, -1.0).is_err());
    }

    #[test]
    fn charge_sensitive_regime_warns() {
        let spec = TransmonSpec::new(10.0, 1.0).unwrap();
        let c = QubitCavityCoupling { g: [0.01, 0.01], detuning: [2.0, 2.5] };
        let m = transmon_dispersive(&spec, &c).unwrap();
        assert!(matches!(m.warnings[0], ValidityWarning::ChargeSensitive { .. }));
    }

    #[test]
    fn symmetric_coupling_saturates_bound() {
        let spec = TransmonSpec::new(50.0, 1.0).unwrap();
        let c = QubitCavityCoupling { g: [0.1, 0.1], detuning: [-2.0, -2.0] };
        let m = transmon_dispersive(&spec, &c).unwrap();
        assert_eq!(m.chi[0], m.chi[1]);
        assert_eq!(m.chi[0], m.switch);
        assert_eq!(m.switch * m.switch, m.chi[0] * m.chi[1]);
        assert!(m.warnings.is_empty());
    }

    #[test]
    fn two_level_limit() {
        let (g, d) = (0.05, 1.3);
        let ec = 1e9 * d;
        let spec = TransmonSpec::new(ec, ec).unwrap();
        let c = QubitCavityCoupling { g: [g, 0.7 * g], detuning: [d, -d] };
        let m = transmon_dispersive(&spec, &c).unwrap();
        assert_relative_eq!(m.chi[0], g * g / d, max_relative = 1e-8);
        assert_relative_eq!(m.chi[1], -0.49 * g * g / d, max_relative = 1e-8);
        assert!(m.static_coupling.abs() < 1e-8 * m.chi[0].abs());
    }

    #[test]
    fn two_level_deviation_is_first_order_in_inverse_anharmonicity() {
        let (g, d) = (0.05, 1.3);
        let c = QubitCavityCoupling { g: [g, g], detuning: [d, d] };
        let mut previous = f64::INFINITY;
        for k in 2..8 {
            let delta = 10f64.powi(k);
            let m = duffing_dispersive(DuffingLevels { frequency: 5.0, anharmonicity: -delta }, &c).unwrap();
            let dev = (m.chi[0] - g * g / d).abs();
            if previous.is_finite() {
                assert_relative_eq!(previous / dev, 10.0, max_relative = 0.02);
            }
            previous = dev;
        }
    }

    #[test]
    fn resonance_is_rejected() {
        let levels = DuffingLevels { frequency: 5.0, anharmonicity: -0.3 };
        let on_resonance = QubitCavityCoupling { g: [0.1, 0.1], detuning: [0.0, 1.0] };
        assert!(matches!(
            duffing_dispersive(levels, &on_resonance),
            Err(Error::DegenerateDenominator { .. })
        ));
        let ladder = QubitCavityCoupling { g: [0.1, 0.1], detuning: [1.0, 0.3] };
        assert!(matches!(duffing_dispersive(levels, &ladder), Err(Error::DegenerateDenominator { .. })));
    }

    #[test]
    fn strong_coupling_warns_but_returns() {
        let levels = DuffingLevels { frequency: 5.0, anharmonicity: -0.3 };
        let c = QubitCavityCoupling { g: [0.5, 0.01], detuning: [1.0, 1.0] };
        let m = duffing_dispersive(levels, &c).unwrap();
        assert!(!m.is_dispersive_valid());
        assert!(m.warnings.iter().any(|w| matches!(w, ValidityWarning::CouplingRatio { resonator: 1, .. })));
    }

    #[test]
    fn renormalized_frequencies() {
        let levels = DuffingLevels { frequency: 6.0, anharmonicity: -0.3 };
        let c = QubitCavityCoupling { g: [0.1, 0.05], detuning: [-1.5, -1.4] };
        let m = duffing_dispersive(levels, &c).unwrap();
        assert_relative_eq!(m.qubit_frequency, 6.0 - 0.01 / 1.5 - 0.0025 / 1.4, max_relative = 1e-14);
        assert_relative_eq!(m.resonator_frequencies[0], 7.5 + 0.01 / 1.8, max_relative = 1e-14);
        assert_relative_eq!(m.resonator_frequencies[1], 7.4 + 0.0025 / 1.7, max_relative = 1e-14);
    }

    proptest! {
        #[test]
        fn switch_bound_holds(
            g1 in 0.001f64..0.1, g2 in 0.001f64..0.1,
            d1 in 0.5f64..3.0, d2 in 0.5f64..3.0,
            s1 in prop::bool::ANY, s2 in prop::bool::ANY,
            ec in 0.1f64..0.4,
        ) {
            let detuning = [if s1 { d1 } else { -d1 - ec }, if s2 { d2 } else { -d2 - ec }];
            let c = QubitCavityCoupling { g: [g1, g2], detuning };
            let m = duffing_dispersive(DuffingLevels { frequency: 6.0, anharmonicity: -ec }, &c).unwrap();
            prop_assert!(m.switch * m.switch - m.chi[0] * m.chi[1] >= -1e-15 * m.switch * m.switch);
        }
    }
}
