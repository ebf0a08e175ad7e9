use parity_scope::dispersive::{PurcellTime, ValidityWarning};
use parity_scope::units::angular_to_mhz;
use parity_scope::Error;
use serde::Serialize;

use super::{ensure_dir, write_json, Context};
use crate::config::{ParityBranch, ScenarioConfig};
use crate::error::CliError;
use crate::scenario::{derive, Derivation, Derived, DerivedDevice, ParityVerdict};

#[derive(Debug, Clone, Serialize)]
pub struct DeviceReport {
    pub label: String,
    pub kind: &'static str,
    pub qubit_frequency_mhz: f64,
    pub resonator_frequency_mhz: [f64; 2],
    pub chi_mhz: [f64; 2],
    pub switch_mhz: f64,
    pub static_coupling_mhz: f64,
    /// Solved bare coupling magnitudes `(g₁, g₂)`.
    pub g_mhz: Option<[f64; 2]>,
    /// `[[g̃₁₊, g̃₁₋], [g̃₂₊, g̃₂₋]]`.
    pub dressed_g_mhz: Option<[[f64; 2]; 2]>,
    /// Purcell time through each resonator.
    pub purcell: Vec<PurcellTime>,
    pub warnings: Vec<ValidityWarning>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParityReport {
    pub satisfiable: bool,
    pub degenerate: bool,
    pub branch: ParityBranch,
    /// `(Δ_{d1}, Δ_{d2})/κ₁`.
    pub drive_detuning_over_kappa: Option<[f64; 2]>,
    /// Resonator spacing consistent with the drive detunings.
    pub condition_met: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DispersiveReport {
    pub scenario: String,
    pub derivation: &'static str,
    pub kappa_mhz: Option<[f64; 2]>,
    pub resonator_mhz: Option<[f64; 2]>,
    pub devices: Vec<DeviceReport>,
    pub chi_over_kappa: [f64; 2],
    pub switch_over_kappa: f64,
    /// `χ₁₂² − χ₁χ₂` in units of κ₁²; the parity condition needs it negative.
    pub obstruction_over_kappa2: f64,
    pub parity: ParityReport,
}

fn device_report(d: &DerivedDevice) -> DeviceReport {
    let mhz = angular_to_mhz;
    DeviceReport {
        label: d.label.clone(),
        kind: d.kind,
        qubit_frequency_mhz: mhz(d.model.qubit_frequency),
        resonator_frequency_mhz: d.model.resonator_frequencies.map(mhz),
        chi_mhz: d.model.chi.map(mhz),
        switch_mhz: mhz(d.model.switch),
        static_coupling_mhz: mhz(d.model.static_coupling),
        g_mhz: d.solved_g.map(|g| g.map(mhz)),
        dressed_g_mhz: d.dressed_g.map(|g| g.map(|pm| [mhz(pm.plus), mhz(pm.minus)])),
        purcell: d.purcell.clone(),
        warnings: d.model.warnings.clone(),
    }
}

pub fn report(cfg: &ScenarioConfig, derived: &Derived) -> DispersiveReport {
    let k = derived.kappa[0];
    let m = &derived.model;
    let (satisfiable, degenerate) = match derived.parity {
        ParityVerdict::Satisfied(p) => (true, p.degenerate),
        ParityVerdict::Unsatisfiable { .. } => (false, false),
    };
    DispersiveReport {
        scenario: cfg.name.clone(),
        derivation: match derived.derivation {
            Derivation::Manual => "manual",
            Derivation::Design => "design",
            Derivation::Forward => "forward",
        },
        kappa_mhz: derived.kappa_known.then(|| derived.kappa.map(angular_to_mhz)),
        resonator_mhz: derived.resonators.map(|w| w.map(angular_to_mhz)),
        devices: derived.devices.iter().map(device_report).collect(),
        chi_over_kappa: m.chi.map(|c| c / k),
        switch_over_kappa: m.switch / k,
        obstruction_over_kappa2: -m.parity_discriminant() / (k * k),
        parity: ParityReport {
            satisfiable,
            degenerate,
            branch: derived.branch,
            drive_detuning_over_kappa: derived.drive_detunings().map(|d| d.map(|x| x / k)),
            condition_met: derived.parity_condition_met(),
        },
    }
}

fn print(ctx: &Context, r: &DispersiveReport) {
    ctx.say(format!("scenario {} ({} derivation)", r.scenario, r.derivation));
    if let Some(k) = r.kappa_mhz {
        ctx.say(format!("  kappa/2pi = {:.4} MHz, {:.4} MHz", k[0], k[1]));
    }
    if let Some(w) = r.resonator_mhz {
        ctx.say(format!("  resonators/2pi = {:.4} MHz, {:.4} MHz", w[0], w[1]));
    }
    for d in &r.devices {
        ctx.say(format!("  [{}] {}", d.label, d.kind));
        ctx.say(format!(
            "    chi/2pi = ({:.6}, {:.6}) MHz, chi12/2pi = {:.6} MHz, static/2pi = {:.6} MHz",
            d.chi_mhz[0], d.chi_mhz[1], d.switch_mhz, d.static_coupling_mhz
        ));
        if let Some(g) = d.g_mhz {
            ctx.say(format!("    g1/2pi = {:.2} MHz, g2/2pi = {:.2} MHz", g[0], g[1]));
        }
        for (i, p) in d.purcell.iter().enumerate() {
            if let PurcellTime::Finite { seconds, times_kappa } = p {
                ctx.say(format!("    Purcell via resonator {}: T_p = {:.4e} s, T_p*kappa = {:.2}", i + 1, seconds, times_kappa));
            }
        }
        for w in &d.warnings {
            ctx.say(format!("    warning: {w:?}"));
        }
    }
    ctx.say(format!(
        "  chi/kappa = ({:.6}, {:.6}), chi12/kappa = {:.6}, chi12^2 - chi1*chi2 = {:.6e} kappa^2",
        r.chi_over_kappa[0], r.chi_over_kappa[1], r.switch_over_kappa, r.obstruction_over_kappa2
    ));
    match r.parity.drive_detuning_over_kappa {
        Some(d) if r.parity.satisfiable => ctx.say(format!(
            "  parity condition: satisfiable, drive detunings ({:.6}, {:.6}) kappa{}",
            d[0],
            d[1],
            if r.parity.condition_met { "" } else { " (resonator spacing does not match)" }
        )),
        _ => ctx.say("  parity condition: unsatisfiable"),
    }
}

pub fn run(cfg: &ScenarioConfig, ctx: &Context) -> Result<DispersiveReport, CliError> {
    let derived = derive(cfg)?;
    let r = report(cfg, &derived);
    print(ctx, &r);
    if let Some(dir) = &ctx.out {
        ensure_dir(dir)?;
        write_json(&dir.join("dispersive.json"), &r)?;
    }
    if let ParityVerdict::Unsatisfiable { discriminant } = derived.parity {
        return Err(Error::ParityConditionUnsatisfiable { discriminant }.into());
    }
    Ok(r)
}
