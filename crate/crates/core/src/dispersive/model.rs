use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Transmon,
    Tcq,
    Manual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ValidityWarning {
    /// E_J/E_C below the charge-insensitive threshold.
    ChargeSensitive { ej_over_ec: f64 },
    /// |g/Δ| at or above the dispersive limit.
    CouplingRatio { resonator: usize, ratio: f64 },
    /// |√2 g/(Δ+δ)| at or above the dispersive limit.
    LadderRatio { resonator: usize, ratio: f64 },
    /// |δ/(ω̃₊−ω̃₋)| at or above the limit assumed by the TCQ diagonalization.
    WeakMixingSplitting { ratio: f64 },
}

/// Effective two-resonator dispersive Hamiltonian
/// `Ω̄/2 σz + Σ (ω̄ᵢ + χᵢ σz) aᵢ†aᵢ + (χ̄₁₂ + χ₁₂ σz)(a₁†a₂ + a₁a₂†)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersiveModel {
    pub qubit_frequency: f64,
    pub resonator_frequencies: [f64; 2],
    pub chi: [f64; 2],
    /// χ̄₁₂, the qubit-independent resonator coupling.
    pub static_coupling: f64,
    /// χ₁₂, the qubit-state-dependent resonator coupling.
    pub switch: f64,
    pub provenance: Provenance,
    #[serde(default)]
    pub warnings: Vec<ValidityWarning>,
}

impl DispersiveModel {
    /// Model with only the shifts set, for dynamics studies that take χ's as inputs.
    pub fn manual(chi: [f64; 2], switch: f64) -> Self {
        Self {
            qubit_frequency: 0.0,
            resonator_frequencies: [0.0; 2],
            chi,
            static_coupling: 0.0,
            switch,
            provenance: Provenance::Manual,
            warnings: Vec::new(),
        }
    }

    /// `χ₁χ₂ − χ₁₂²`; the parity condition needs this to be positive.
    pub fn parity_discriminant(&self) -> f64 {
        self.chi[0] * self.chi[1] - self.switch * self.switch
    }

    pub fn is_dispersive_valid(&self) -> bool {
        !self.warnings.iter().any(|w| {
            matches!(w, ValidityWarning::CouplingRatio { .. } | ValidityWarning::LadderRatio { .. })
        })
    }
}
