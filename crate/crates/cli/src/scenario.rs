//! Turns a scenario document into dispersive models and a measurement setup.

use std::f64::consts::SQRT_2;

use parity_scope::dispersive::{
    effective_couplings, parity_detunings, purcell_time, solve_couplings_for_chi, tcq_dispersive, tcq_mixing,
    tcq_state_shifts, transmon_dispersive, zero_switch_couplings, DispersiveModel, DressedTcq, ParityDetunings,
    PlusMinus, PurcellTime, QubitCavityCoupling, TcqSpec, TransmonSpec,
};
use parity_scope::dynamics::{DrivePulse, MeasurementSetup};
use parity_scope::units::mhz_to_angular;
use parity_scope::Error;

use crate::config::{
    DeviceConfig, ParityBranch, Placement, PulseConfig, ResonatorFrequency, ScenarioConfig, TcqCouplings, TimeUnit,
};
use crate::error::CliError;

/// Relative agreement required between the shifts of different qubits.
pub const MATCH_TOLERANCE: f64 = 1e-6;
const PLACEMENT_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation {
    Manual,
    /// Couplings solved for target shifts.
    Design,
    /// Shifts computed from given couplings.
    Forward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedDevice {
    pub label: String,
    pub kind: &'static str,
    pub model: DispersiveModel,
    /// Bare coupling magnitudes from the design solve, rad/s.
    pub solved_g: Option<[f64; 2]>,
    /// Dressed `g̃_{i±}` for TCQ devices, rad/s.
    pub dressed_g: Option<[PlusMinus; 2]>,
    /// Purcell time through each resonator.
    pub purcell: Vec<PurcellTime>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParityVerdict {
    Satisfied(ParityDetunings),
    Unsatisfiable { discriminant: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derived {
    /// rad/s; `[1, 1]` in arbitrary units when the scenario has no bus.
    pub kappa: [f64; 2],
    pub kappa_known: bool,
    pub resonators: Option<[f64; 2]>,
    pub derivation: Derivation,
    pub devices: Vec<DerivedDevice>,
    /// Shifts shared by all qubits.
    pub model: DispersiveModel,
    pub parity: ParityVerdict,
    pub branch: ParityBranch,
}

impl Derived {
    /// Drive detunings `(ω_d − ω₁, ω_d − ω₂)` with the drive on the chosen parity branch.
    pub fn drive_detunings(&self) -> Option<[f64; 2]> {
        let ParityVerdict::Satisfied(p) = self.parity else { return None };
        let d = match self.branch {
            ParityBranch::Upper => p.upper,
            ParityBranch::Lower => p.lower,
        };
        Some(match self.resonators {
            Some([w1, w2]) => [d[0], d[0] - (w2 - w1)],
            None => d,
        })
    }

    /// Whether the resonator spacing matches the parity detunings.
    pub fn parity_condition_met(&self) -> bool {
        let ParityVerdict::Satisfied(p) = self.parity else { return false };
        let required = match self.branch {
            ParityBranch::Upper => p.upper,
            ParityBranch::Lower => p.lower,
        };
        match self.drive_detunings() {
            Some(d) => (d[1] - required[1]).abs() <= 1e-9 * self.kappa[0].max(self.kappa[1]),
            None => false,
        }
    }

    pub fn pulse(&self, p: &PulseConfig) -> Result<(DrivePulse, f64), CliError> {
        pulse_in_kappa_units(p, self.kappa_known.then_some(self.kappa[0]))
    }

    /// Setup in units where κ₁ = 1.
    pub fn setup(&self, pulse: DrivePulse) -> Result<MeasurementSetup, CliError> {
        let detuning = self
            .drive_detunings()
            .ok_or(Error::ParityConditionUnsatisfiable { discriminant: self.model.parity_discriminant() })?;
        let s = self.kappa[0];
        let model = DispersiveModel::manual(self.model.chi.map(|c| c / s), self.model.switch / s);
        Ok(MeasurementSetup::new(self.kappa.map(|k| k / s), detuning.map(|d| d / s), &model, pulse)?)
    }
}

/// Pulse and record length in units of `1/κ₁`; `kappa1` in rad/s is needed
/// for times given in microseconds.
pub fn pulse_in_kappa_units(p: &PulseConfig, kappa1: Option<f64>) -> Result<(DrivePulse, f64), CliError> {
    let scale = match (p.unit, kappa1) {
        (TimeUnit::PerKappa, _) => 1.0,
        (TimeUnit::Microseconds, Some(k)) => 1e-6 * k,
        (TimeUnit::Microseconds, None) => {
            return Err(CliError::Config("pulse times in `us` need bus.kappa_mhz".into()));
        }
    };
    let pulse = DrivePulse::new(p.amplitude, p.ramp * scale, p.on * scale, p.off * scale)
        .map_err(|e| CliError::Config(format!("pulse: {e}")))?;
    Ok((pulse, p.duration * scale))
}

fn verdict(model: &DispersiveModel, kappa: [f64; 2]) -> Result<ParityVerdict, CliError> {
    match parity_detunings(model, kappa) {
        Ok(p) => Ok(ParityVerdict::Satisfied(p)),
        Err(Error::ParityConditionUnsatisfiable { discriminant }) => Ok(ParityVerdict::Unsatisfiable { discriminant }),
        Err(e) => Err(e.into()),
    }
}

fn branch_detunings(p: &ParityDetunings, branch: ParityBranch) -> [f64; 2] {
    match branch {
        ParityBranch::Upper => p.upper,
        ParityBranch::Lower => p.lower,
    }
}

fn dressed_of(device: &DeviceConfig) -> Option<(TcqSpec, DressedTcq)> {
    let mhz = mhz_to_angular;
    match *device {
        DeviceConfig::Tcq { plus_mhz, minus_mhz, anharmonicity_mhz, j_mhz, couplings, conventions, .. } => {
            let bare = match couplings {
                TcqCouplings::BareMhz(g) => g.map(|[p, m]| PlusMinus::new(mhz(p), mhz(m))),
                _ => [PlusMinus::default(); 2],
            };
            let spec = TcqSpec {
                frequency: PlusMinus::new(mhz(plus_mhz), mhz(minus_mhz)),
                anharmonicity: PlusMinus::new(mhz(anharmonicity_mhz.plus), mhz(anharmonicity_mhz.minus)),
                coupling: mhz(j_mhz),
                g: bare,
            };
            let dressed = tcq_mixing(&spec, conventions.anharmonicity).ok()?;
            Some((spec, effective_couplings(&spec, &dressed, conventions.coupling)))
        }
        DeviceConfig::TcqDressed { plus_mhz, minus_mhz, anharmonicity_mhz, mixing_angle, .. } => {
            let a = anharmonicity_mhz;
            let dressed = DressedTcq {
                mixing_angle,
                zeta: 0.0,
                frequency: PlusMinus::new(mhz(plus_mhz), mhz(minus_mhz)),
                anharmonicity: PlusMinus::new(mhz(a.plus), mhz(a.minus)),
                cross_anharmonicity: mhz(a.cross),
                g: [PlusMinus::default(); 2],
            };
            let spec = TcqSpec {
                frequency: dressed.frequency,
                anharmonicity: dressed.anharmonicity,
                coupling: 0.0,
                g: [PlusMinus::default(); 2],
            };
            Some((spec, dressed))
        }
        DeviceConfig::Transmon { .. } => None,
    }
}

fn device_model(
    device: &DeviceConfig,
    resonators: [f64; 2],
    kappa: [f64; 2],
    targets: Option<[f64; 2]>,
) -> Result<DerivedDevice, CliError> {
    let label = device.label().to_string();
    let kind = device.kind();
    let config = |msg: &str| CliError::Config(format!("device `{label}`: {msg}"));
    if let DeviceConfig::Transmon { ej_mhz, ec_mhz, g_mhz, .. } = *device {
        if targets.is_some() {
            return Err(config("target shifts can only be solved for TCQ devices"));
        }
        let spec = TransmonSpec::new(mhz_to_angular(ej_mhz), mhz_to_angular(ec_mhz))?;
        let qubit = spec.levels().frequency;
        let g = g_mhz.map(mhz_to_angular);
        let coupling = QubitCavityCoupling { g, detuning: resonators.map(|w| qubit - w) };
        let model = transmon_dispersive(&spec, &coupling)?;
        let purcell = (0..2)
            .map(|i| purcell_time(kappa[i], g[i] / SQRT_2, qubit, resonators[i]))
            .collect::<parity_scope::Result<_>>()?;
        return Ok(DerivedDevice { label, kind, model, solved_g: None, dressed_g: None, purcell });
    }

    let couplings = match device {
        DeviceConfig::Tcq { couplings, .. } | DeviceConfig::TcqDressed { couplings, .. } => *couplings,
        DeviceConfig::Transmon { .. } => unreachable!(),
    };
    let (_, mut dressed) = dressed_of(device).ok_or_else(|| config("invalid TCQ parameters"))?;
    let mut solved_g = None;
    match (couplings, targets) {
        (TcqCouplings::Solve { assignment }, Some(t)) => {
            let g = solve_couplings_for_chi(t, &dressed, resonators, assignment)?;
            dressed = dressed.with_couplings(zero_switch_couplings(g, assignment));
            solved_g = Some(g);
        }
        (TcqCouplings::Solve { .. }, None) => return Err(config("couplings.solve needs target_chi_over_kappa")),
        (_, Some(_)) => return Err(config("target_chi_over_kappa needs couplings.solve")),
        (TcqCouplings::DressedMhz(g), None) => {
            dressed = dressed.with_couplings(g.map(|[p, m]| PlusMinus::new(mhz_to_angular(p), mhz_to_angular(m))));
        }
        (TcqCouplings::BareMhz(_), None) if kind == "tcq-dressed" => {
            return Err(config("bare couplings need bare TCQ parameters (kind `tcq`)"));
        }
        (TcqCouplings::BareMhz(_), None) => {}
    }
    let model = tcq_dispersive(&tcq_state_shifts(&dressed, resonators)?);
    let purcell = (0..2)
        .map(|i| purcell_time(kappa[i], dressed.g[i].minus / SQRT_2, dressed.frequency.minus, resonators[i]))
        .collect::<parity_scope::Result<_>>()?;
    Ok(DerivedDevice { label, kind, model, solved_g, dressed_g: Some(dressed.g), purcell })
}

fn common_model(devices: &[DerivedDevice]) -> Result<DispersiveModel, CliError> {
    let first = &devices[0].model;
    let scale = first.chi[0].abs().max(first.chi[1].abs()).max(first.switch.abs());
    for d in &devices[1..] {
        let m = &d.model;
        let diff = (m.chi[0] - first.chi[0])
            .abs()
            .max((m.chi[1] - first.chi[1]).abs())
            .max((m.switch - first.switch).abs());
        if diff > MATCH_TOLERANCE * scale {
            return Err(CliError::Config(format!(
                "qubits `{}` and `{}` have mismatched shifts (relative difference {:e}); the parity readout needs equal χ for all qubits",
                devices[0].label,
                d.label,
                diff / scale
            )));
        }
    }
    Ok(DispersiveModel::manual(first.chi, first.switch))
}

pub fn derive(cfg: &ScenarioConfig) -> Result<Derived, CliError> {
    let (kappa, kappa_known) = match &cfg.bus {
        Some(bus) => (bus.kappa_mhz.map(mhz_to_angular), true),
        None => ([1.0, 1.0], false),
    };
    let branch = cfg.bus.as_ref().map(|b| b.parity_branch).unwrap_or_default();

    if let Some(m) = cfg.model {
        let model = DispersiveModel::manual(m.chi_over_kappa.map(|c| c * kappa[0]), m.switch_over_kappa * kappa[0]);
        let parity = verdict(&model, kappa)?;
        return Ok(Derived {
            kappa,
            kappa_known,
            resonators: None,
            derivation: Derivation::Manual,
            devices: Vec::new(),
            model,
            parity,
            branch,
        });
    }
    if cfg.devices.is_empty() {
        return Err(CliError::Config("scenario needs a non-empty `devices` list or a `model` block".into()));
    }
    let bus = cfg.bus.as_ref().ok_or_else(|| CliError::Config("devices need a `bus` block".into()))?;
    let [first, second] =
        bus.resonator_mhz.ok_or_else(|| CliError::Config("devices need bus.resonator_mhz".into()))?;
    let ResonatorFrequency::Fixed(w1) = first else { unreachable!("checked on parse") };
    let w1 = mhz_to_angular(w1);
    let targets = cfg.target_chi_over_kappa.map(|t| t.map(|c| c * kappa[0]));

    let build = |w2: f64| -> Result<(Vec<DerivedDevice>, DispersiveModel), CliError> {
        let devices = cfg
            .devices
            .iter()
            .map(|d| device_model(d, [w1, w2], kappa, targets))
            .collect::<Result<Vec<_>, _>>()?;
        let model = common_model(&devices)?;
        Ok((devices, model))
    };

    let derivation = if targets.is_some() { Derivation::Design } else { Derivation::Forward };
    let (w2, devices, model) = match (second, targets) {
        (ResonatorFrequency::Fixed(w2), _) => {
            let w2 = mhz_to_angular(w2);
            let (devices, model) = build(w2)?;
            (w2, devices, model)
        }
        (ResonatorFrequency::Placed(Placement::AutoParity), Some(t)) => {
            // Zero-switch design: the targets fix the spacing directly.
            match verdict(&DispersiveModel::manual(t, 0.0), kappa)? {
                ParityVerdict::Satisfied(p) => {
                    let d = branch_detunings(&p, branch);
                    let w2 = w1 + d[0] - d[1];
                    let (devices, model) = build(w2)?;
                    (w2, devices, model)
                }
                ParityVerdict::Unsatisfiable { discriminant } => {
                    return Err(Error::ParityConditionUnsatisfiable { discriminant }.into());
                }
            }
        }
        (ResonatorFrequency::Placed(Placement::AutoParity), None) => {
            // The shifts depend weakly on ω₂; iterate the placement to a fixed point.
            let mut w2 = w1;
            let mut state = build(w2)?;
            let mut converged = false;
            for _ in 0..PLACEMENT_ITERATIONS {
                let ParityVerdict::Satisfied(p) = verdict(&state.1, kappa)? else { break };
                let d = branch_detunings(&p, branch);
                let next = w1 + d[0] - d[1];
                let moved = (next - w2).abs();
                w2 = next;
                state = build(w2)?;
                if moved <= 1e-12 * w1.abs() {
                    converged = true;
                    break;
                }
            }
            if !converged && matches!(verdict(&state.1, kappa)?, ParityVerdict::Satisfied(_)) {
                return Err(Error::ConvergenceFailure {
                    what: "auto-parity resonator placement",
                    detail: format!("no fixed point after {PLACEMENT_ITERATIONS} iterations"),
                }
                .into());
            }
            (w2, state.0, state.1)
        }
    };
    let parity = verdict(&model, kappa)?;
    Ok(Derived { kappa, kappa_known, resonators: Some([w1, w2]), derivation, devices, model, parity, branch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse;
    use crate::presets;
    use parity_scope::units::angular_to_mhz;

    #[test]
    fn forward_placement_recovers_the_design() {
        let design = derive(&presets::load("paper-sec5-symmetric").unwrap()).unwrap();
        let g = design.devices[0].dressed_g.unwrap().map(|pm| [angular_to_mhz(pm.plus), angular_to_mhz(pm.minus)]);
        let text = format!(
            r#"{{
              "name": "forward",
              "bus": {{ "kappa_mhz": [5, 5], "resonator_mhz": [7500, "auto-parity"], "parity_branch": "lower" }},
              "devices": [{{
                "kind": "tcq-dressed", "label": "a", "plus_mhz": 6800, "minus_mhz": 6000,
                "anharmonicity_mhz": {{ "plus": -300, "minus": -300, "cross": -300 }},
                "couplings": {{ "dressed_mhz": {g:?} }}
              }}]
            }}"#
        );
        let forward = derive(&parse(&text, "test").unwrap()).unwrap();
        assert_eq!(forward.derivation, Derivation::Forward);
        let (a, b) = (design.resonators.unwrap()[1], forward.resonators.unwrap()[1]);
        assert!((a - b).abs() < 1e-9 * a, "{a} vs {b}");
        assert!(forward.parity_condition_met());
    }

    #[test]
    fn mismatched_qubits_are_rejected() {
        let text = r#"{
          "name": "mixed",
          "bus": { "kappa_mhz": [5, 5], "resonator_mhz": [7500, 7000] },
          "devices": [
            { "kind": "transmon", "label": "a", "ej_mhz": 16537.5, "ec_mhz": 300, "g_mhz": [100, 80] },
            { "kind": "transmon", "label": "b", "ej_mhz": 16537.5, "ec_mhz": 300, "g_mhz": [90, 80] }
          ]
        }"#;
        let err = derive(&parse(text, "test").unwrap()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("mismatched"), "{err}");
    }

    #[test]
    fn pulse_in_microseconds_scales_with_kappa() {
        let cfg = parse(
            r#"{
              "name": "us",
              "bus": { "kappa_mhz": [5, 5] },
              "model": { "chi_over_kappa": [0.5, 0.5] },
              "pulse": { "unit": "us", "amplitude": 0.5, "ramp": 0.1, "on": 0.1, "off": 0.5, "duration": 1.0 }
            }"#,
            "test",
        )
        .unwrap();
        let d = derive(&cfg).unwrap();
        let (pulse, tau) = d.pulse(cfg.pulse.as_ref().unwrap()).unwrap();
        let k = 2.0 * std::f64::consts::PI * 5.0;
        assert!((tau - k).abs() < 1e-9 && (pulse.ramp - 0.1 * k).abs() < 1e-9);
        assert!(pulse_in_kappa_units(cfg.pulse.as_ref().unwrap(), None).is_err());
    }

    #[test]
    fn manual_model_drives_the_upper_branch_by_default() {
        let cfg = parse(r#"{ "name": "x", "model": { "chi_over_kappa": [0.5, 0.5] } }"#, "test").unwrap();
        let d = derive(&cfg).unwrap();
        let det = d.drive_detunings().unwrap();
        assert!((det[0] - 3f64.sqrt() / 2.0).abs() < 1e-12 && (det[1] + 3f64.sqrt() / 2.0).abs() < 1e-12);
    }
}
