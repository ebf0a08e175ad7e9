//! Scenario documents: JSON trees with frequencies in MHz and tagged time units.

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use parity_scope::dispersive::{AnharmonicityConvention, BranchAssignment, CouplingConvention};
use parity_scope::inference::{NoiseConvention, PhasePolicy};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub bus: Option<BusConfig>,
    #[serde(default)]
    pub devices: Vec<DeviceConfig>,
    /// Design mode: couplings are solved so every qubit produces these shifts (units of κ₁).
    pub target_chi_over_kappa: Option<[f64; 2]>,
    /// Shifts given directly instead of derived from devices.
    pub model: Option<ManualModel>,
    pub pulse: Option<PulseConfig>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    pub validation: Option<ValidationConfig>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BusConfig {
    pub kappa_mhz: [f64; 2],
    pub resonator_mhz: Option<[ResonatorFrequency; 2]>,
    #[serde(default)]
    pub parity_branch: ParityBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResonatorFrequency {
    Fixed(f64),
    Placed(Placement),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Placement {
    /// Second resonator placed where the parity condition holds.
    #[serde(rename = "auto-parity")]
    AutoParity,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityBranch {
    /// `Δ_{d1} ≥ 0`.
    #[default]
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DeviceConfig {
    Transmon {
        label: String,
        ej_mhz: f64,
        ec_mhz: f64,
        g_mhz: [f64; 2],
    },
    /// Bare coupled-transmon parameters, dressed by the mode rotation.
    Tcq {
        label: String,
        plus_mhz: f64,
        minus_mhz: f64,
        anharmonicity_mhz: PlusMinusMhz,
        j_mhz: f64,
        couplings: TcqCouplings,
        #[serde(default)]
        conventions: Conventions,
    },
    /// Dressed TCQ parameters quoted directly.
    TcqDressed {
        label: String,
        plus_mhz: f64,
        minus_mhz: f64,
        anharmonicity_mhz: DressedAnharmonicity,
        #[serde(default = "quarter_pi")]
        mixing_angle: f64,
        couplings: TcqCouplings,
    },
}

fn quarter_pi() -> f64 {
    FRAC_PI_4
}

impl DeviceConfig {
    pub fn label(&self) -> &str {
        match self {
            DeviceConfig::Transmon { label, .. }
            | DeviceConfig::Tcq { label, .. }
            | DeviceConfig::TcqDressed { label, .. } => label,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DeviceConfig::Transmon { .. } => "transmon",
            DeviceConfig::Tcq { .. } => "tcq",
            DeviceConfig::TcqDressed { .. } => "tcq-dressed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlusMinusMhz {
    pub plus: f64,
    pub minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DressedAnharmonicity {
    pub plus: f64,
    pub minus: f64,
    pub cross: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TcqCouplings {
    /// Zero-switch couplings solved from `target_chi_over_kappa`.
    Solve {
        #[serde(default)]
        assignment: BranchAssignment,
    },
    /// `[[g̃₁₊, g̃₁₋], [g̃₂₊, g̃₂₋]]`.
    DressedMhz([[f64; 2]; 2]),
    /// `[[g₁₊, g₁₋], [g₂₊, g₂₋]]`, only for bare `tcq` devices.
    BareMhz([[f64; 2]; 2]),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Conventions {
    pub coupling: CouplingConvention,
    pub anharmonicity: AnharmonicityConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManualModel {
    pub chi_over_kappa: [f64; 2],
    #[serde(default)]
    pub switch_over_kappa: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeUnit {
    /// Times in units of 1/κ₁.
    #[default]
    #[serde(rename = "per-kappa")]
    PerKappa,
    #[serde(rename = "us")]
    Microseconds,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    #[serde(default)]
    pub unit: TimeUnit,
    /// Steady drive amplitude in units of √κ₁.
    pub amplitude: f64,
    pub ramp: f64,
    pub on: f64,
    pub off: f64,
    /// Measurement time τ.
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub phase: PhasePolicy,
    pub noise: NoiseConvention,
    /// Points of the τ grid used for the measurement rates.
    pub tau_points: usize,
    pub sweep: Option<SweepSections>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { phase: PhasePolicy::Optimal, noise: NoiseConvention::VarianceTau, tau_points: 57, sweep: None }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSections {
    pub grid: Option<Span>,
    pub diagonal: Option<Span>,
    pub cuts: Vec<Cut>,
    pub points: Vec<[f64; 2]>,
}

impl SweepSections {
    pub fn is_empty(&self) -> bool {
        self.grid.is_none() && self.diagonal.is_none() && self.cuts.is_empty() && self.points.is_empty()
    }

    /// 61×61 over χ/κ ∈ [0.05, 1.5]².
    pub fn default_grid() -> Self {
        Self { grid: Some(Span { lo: 0.05, hi: 1.5, n: 61 }), ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cut {
    pub chi2: f64,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidationConfig {
    pub charge: Option<ChargeCheck>,
    pub factorization: Option<FactorizationCheck>,
    pub dressed: Option<DressedSweep>,
    pub chi: Option<ChiCheck>,
    pub switch: Option<SwitchCheck>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChargeCheck {
    pub ej_over_ec: f64,
    pub ei_over_ec: f64,
    pub grid: usize,
    pub levels: usize,
    pub charge_cutoff: usize,
    /// Allowed max − min of each level over the offset grid, in units of E_C.
    pub tolerance: f64,
}

impl Default for ChargeCheck {
    fn default() -> Self {
        Self { ej_over_ec: 50.0, ei_over_ec: -0.5, grid: 21, levels: 6, charge_cutoff: 8, tolerance: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FactorizationCheck {
    pub ej_over_ec: [f64; 2],
    pub ec_ratio: f64,
    pub offsets: [f64; 2],
    pub levels: usize,
    pub tolerance: f64,
}

impl Default for FactorizationCheck {
    fn default() -> Self {
        Self { ej_over_ec: [40.0, 55.0], ec_ratio: 1.2, offsets: [0.2, 0.45], levels: 6, tolerance: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DressedSweep {
    pub delta_over_j: Vec<f64>,
    pub fock_cutoff: usize,
}

impl Default for DressedSweep {
    fn default() -> Self {
        Self { delta_over_j: vec![0.2, 0.1, 0.05], fock_cutoff: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChiCheck {
    /// `g/Δ` of the reference configurations.
    pub ratio: f64,
    pub photon_cutoff: usize,
    /// Allowed relative error in units of `(g/Δ)²`.
    pub bound_coefficient: f64,
    pub exponent_tolerance: f64,
}

impl Default for ChiCheck {
    fn default() -> Self {
        Self { ratio: 0.05, photon_cutoff: 2, bound_coefficient: 3.0, exponent_tolerance: 0.3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwitchCheck {
    pub ratio: f64,
    /// Allowed state-dependent half-splitting in units of |χ₁|.
    pub tolerance: f64,
}

impl Default for SwitchCheck {
    fn default() -> Self {
        Self { ratio: 0.05, tolerance: 1e-2 }
    }
}

/// Parses a scenario and reports the failing field path with line and column.
pub fn parse(text: &str, origin: &str) -> Result<ScenarioConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("{origin}: field `{path}`: {}", e.into_inner()))
    })?;
    cfg.check().map_err(|msg| CliError::Config(format!("{origin}: {msg}")))?;
    Ok(cfg)
}

impl ScenarioConfig {
    /// Structural checks that do not need any physics.
    fn check(&self) -> Result<(), String> {
        if let Some(bus) = &self.bus {
            if !bus.kappa_mhz.iter().all(|k| *k > 0.0 && k.is_finite()) {
                return Err(format!("bus.kappa_mhz must be positive, got {:?}", bus.kappa_mhz));
            }
            if let Some([first, _]) = bus.resonator_mhz {
                if !matches!(first, ResonatorFrequency::Fixed(w) if w.is_finite()) {
                    return Err("bus.resonator_mhz[0] must be a frequency".into());
                }
            }
        }
        if !self.devices.is_empty() && self.model.is_some() {
            return Err("give either `devices` or `model`, not both".into());
        }
        let mut labels: Vec<&str> = self.devices.iter().map(DeviceConfig::label).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err("device labels must be unique".into());
        }
        if let Some(p) = &self.pulse {
            let values = [p.amplitude, p.ramp, p.on, p.off, p.duration];
            if values.iter().any(|v| !v.is_finite()) {
                return Err("pulse entries must be finite".into());
            }
            if !(p.duration > 0.0) {
                return Err(format!("pulse.duration must be positive, got {}", p.duration));
            }
        }
        if self.analysis.tau_points < 2 {
            return Err("analysis.tau_points must be at least 2".into());
        }
        if let Some(s) = &self.analysis.sweep {
            let spans = s.grid.iter().chain(&s.diagonal).copied().chain(s.cuts.iter().map(|c| Span { lo: c.lo, hi: c.hi, n: c.n }));
            for span in spans {
                if span.n == 0 || !(span.lo.is_finite() && span.hi.is_finite()) || span.hi < span.lo {
                    return Err(format!("invalid sweep range {span:?}"));
                }
            }
        }
        Ok(())
    }

    pub fn output_dir(&self, flag: Option<&PathBuf>) -> PathBuf {
        flag.cloned()
            .or_else(|| self.output.clone())
            .unwrap_or_else(|| PathBuf::from("out").join(&self.name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_field_path() {
        let err = parse(r#"{"name": "x", "bus": {"kappa_mhz": [5.0, "five"]}}"#, "inline").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bus.kappa_mhz[1]"), "{msg}");
        assert!(msg.contains("line 1"), "{msg}");
    }

    #[test]
    fn rejects_unknown_fields() {
        let err = parse(r#"{"name": "x", "buss": {}}"#, "inline").unwrap_err();
        assert!(err.to_string().contains("buss"));
    }

    #[test]
    fn parses_auto_parity_and_couplings() {
        let text = r#"{
            "name": "x",
            "bus": {"kappa_mhz": [5, 5], "resonator_mhz": [7500, "auto-parity"], "parity_branch": "lower"},
            "devices": [{"kind": "tcq-dressed", "label": "a", "plus_mhz": 6800, "minus_mhz": 6000,
                         "anharmonicity_mhz": {"plus": -300, "minus": -300, "cross": -300},
                         "couplings": {"solve": {"assignment": "plus-on-first"}}}]
        }"#;
        let cfg = parse(text, "inline").unwrap();
        let bus = cfg.bus.unwrap();
        assert_eq!(bus.resonator_mhz.unwrap()[1], ResonatorFrequency::Placed(Placement::AutoParity));
        assert_eq!(bus.parity_branch, ParityBranch::Lower);
        assert!(matches!(
            cfg.devices[0],
            DeviceConfig::TcqDressed { couplings: TcqCouplings::Solve { assignment: BranchAssignment::PlusOnFirst }, .. }
        ));
    }

    #[test]
    fn rejects_duplicate_labels() {
        let device = r#"{"kind": "transmon", "label": "a", "ej_mhz": 20000, "ec_mhz": 300, "g_mhz": [50, 50]}"#;
        let text = format!(r#"{{"name": "x", "devices": [{device}, {device}]}}"#);
        assert!(parse(&text, "inline").is_err());
    }
}
