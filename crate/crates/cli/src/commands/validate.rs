use parity_scope::dispersive::{
    duffing_dispersive, tcq_dispersive, tcq_mixing, tcq_state_shifts, zero_switch_couplings, AnharmonicityConvention,
    BranchAssignment, DispersiveModel, DuffingLevels, PlusMinus, QubitCavityCoupling, TcqSpec, ValidityWarning,
};
use parity_scope::oracle::{
    charge_dispersion, chi_oracle, decoupled_spectrum, dressed_tcq_check, switch_oracle, tcq_charge_spectrum,
    ChargeBasisConfig, LadderConfig, LadderQubit,
};
use serde::Serialize;

use super::{ensure_dir, write_json, Context};
use crate::config::{ChargeCheck, ChiCheck, DressedSweep, FactorizationCheck, ScenarioConfig, SwitchCheck, ValidationConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
    pub warnings: Vec<ValidityWarning>,
}

impl CheckResult {
    fn compare(name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            status: if value <= threshold { Status::Pass } else { Status::Fail },
            value: Some(value),
            threshold: Some(threshold),
            detail,
            warnings: Vec::new(),
        }
    }

    fn skipped(name: &str, detail: String, warnings: Vec<ValidityWarning>) -> Self {
        Self { name: name.into(), status: Status::Skipped, value: None, threshold: None, detail, warnings }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub scenario: String,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

const QUBIT: DuffingLevels = DuffingLevels { frequency: 6.0, anharmonicity: -0.3 };
const TRANSMON_RESONATORS: [f64; 2] = [7.5, 7.0];
const TCQ_RESONATORS: [f64; 2] = [7.5, 7.2];

/// Transmon with `gᵢ = ratio·|Δᵢ|` on both resonators.
pub fn transmon_ladder(ratio: f64, photon_cutoff: usize) -> LadderConfig {
    let g = TRANSMON_RESONATORS.map(|w| ratio * (QUBIT.frequency - w).abs());
    LadderConfig {
        qubit: LadderQubit::Duffing { levels: QUBIT, count: 3, g },
        resonator_frequencies: TRANSMON_RESONATORS,
        photon_cutoff,
    }
}

/// Detuned TCQ with unequal dressed couplings scaled to `ratio` of the
/// nearest dressed-mode detuning.
pub fn tcq_ladder(ratio: f64, photon_cutoff: usize) -> parity_scope::Result<LadderConfig> {
    let spec = TcqSpec {
        frequency: PlusMinus::new(6.4, 6.0),
        anharmonicity: PlusMinus::new(-0.3, -0.3),
        coupling: -0.15,
        g: [PlusMinus::default(); 2],
    };
    let dressed = tcq_mixing(&spec, AnharmonicityConvention::Rotated)?;
    let nearest = TCQ_RESONATORS
        .iter()
        .flat_map(|&w| [dressed.frequency.plus - w, dressed.frequency.minus - w])
        .map(f64::abs)
        .fold(f64::INFINITY, f64::min);
    let g = ratio * nearest;
    let dressed = dressed.with_couplings([PlusMinus::new(g, 0.8 * g), PlusMinus::new(0.6 * g, g)]);
    Ok(LadderConfig { qubit: LadderQubit::Tcq { dressed }, resonator_frequencies: TCQ_RESONATORS, photon_cutoff })
}

/// Zero-switch TCQ at `ω₊ = ω₋` with both resonators at the same frequency.
pub fn zero_switch_ladder(ratio: f64, photon_cutoff: usize) -> parity_scope::Result<LadderConfig> {
    let spec = TcqSpec {
        frequency: PlusMinus::new(6.0, 6.0),
        anharmonicity: PlusMinus::new(-0.3, -0.3),
        coupling: -0.4,
        g: [PlusMinus::default(); 2],
    };
    let w = 7.5;
    let dressed = tcq_mixing(&spec, AnharmonicityConvention::Rotated)?;
    let g = ratio * (dressed.frequency.minus - w).abs();
    let dressed = dressed.with_couplings(zero_switch_couplings([g, g], BranchAssignment::MinusOnFirst));
    Ok(LadderConfig { qubit: LadderQubit::Tcq { dressed }, resonator_frequencies: [w, w], photon_cutoff })
}

fn perturbative(cfg: &LadderConfig) -> parity_scope::Result<DispersiveModel> {
    match cfg.qubit {
        LadderQubit::Duffing { levels, g, .. } => {
            let detuning = cfg.resonator_frequencies.map(|w| levels.frequency - w);
            duffing_dispersive(levels, &QubitCavityCoupling { g, detuning })
        }
        LadderQubit::Tcq { dressed } => Ok(tcq_dispersive(&tcq_state_shifts(&dressed, cfg.resonator_frequencies)?)),
    }
}

fn regime_warnings(cfg: &LadderConfig) -> parity_scope::Result<Vec<ValidityWarning>> {
    let m = perturbative(cfg)?;
    Ok(if m.is_dispersive_valid() { Vec::new() } else { m.warnings })
}

fn chi_error(cfg: &LadderConfig) -> parity_scope::Result<f64> {
    let c = chi_oracle(cfg)?;
    Ok(c.relative_error[0].max(c.relative_error[1]))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / lx.iter().map(|a| (a - mx).powi(2)).sum::<f64>()
}

fn charge(c: &ChargeCheck, ctx: &Context) -> Result<CheckResult, CliError> {
    let cfg = ChargeBasisConfig::symmetric(1.0, c.ej_over_ec, c.ei_over_ec).with_cutoff(c.charge_cutoff);
    let d = charge_dispersion(&cfg, c.levels, c.grid, ctx.exec)?;
    Ok(CheckResult::compare(
        "charge_dispersion",
        d.max(),
        c.tolerance,
        format!(
            "E_J/E_C = {}, E_I/E_C = {}, {} offset points, {} levels, cutoff {}; max spread in units of E_C",
            c.ej_over_ec, c.ei_over_ec, d.grid_points, c.levels, d.cutoff
        ),
    ))
}

fn factorization(c: &FactorizationCheck) -> Result<CheckResult, CliError> {
    let cfg = ChargeBasisConfig {
        charging_energy: PlusMinus::new(1.0, c.ec_ratio),
        josephson_energy: PlusMinus::new(c.ej_over_ec[0], c.ej_over_ec[1] * c.ec_ratio),
        interaction_energy: 0.0,
        offset_charge: PlusMinus::new(c.offsets[0], c.offsets[1]),
        charge_cutoff: 10,
    };
    let full = tcq_charge_spectrum(&cfg, c.levels)?;
    let sum = decoupled_spectrum(&cfg, c.levels, full.cutoff);
    let worst = full.levels.iter().zip(&sum).map(|(a, b)| (a - b).abs() / b.abs()).fold(0.0, f64::max);
    Ok(CheckResult::compare(
        "decoupled_factorization",
        worst,
        c.tolerance,
        format!("E_I = 0, {} levels at cutoff {}; max relative difference to the sum spectrum", c.levels, full.cutoff),
    ))
}

fn dressed(c: &DressedSweep) -> Result<Vec<CheckResult>, CliError> {
    let coupling = -0.4;
    let mut errors = Vec::new();
    for &r in &c.delta_over_j {
        let spec = TcqSpec {
            frequency: PlusMinus::new(6.0, 6.0),
            anharmonicity: PlusMinus::new(r * coupling, r * coupling),
            coupling,
            g: [PlusMinus::default(); 2],
        };
        errors.push(dressed_tcq_check(&spec, c.fock_cutoff, AnharmonicityConvention::Rotated)?.max_relative_error());
    }
    let shrinking = errors.windows(2).all(|w| w[1] < w[0]);
    let ratios: Vec<f64> = c.delta_over_j.iter().map(|r| r.abs()).collect();
    let order = if errors.len() >= 2 && errors.iter().all(|&e| e > 0.0) { log_slope(&ratios, &errors) } else { f64::NAN };
    let detail = format!("delta/J = {:?}: max relative errors {:?}, fitted order {:.3}", c.delta_over_j, errors, order);
    Ok(vec![CheckResult {
        name: "dressed_error_shrinks".into(),
        status: if shrinking { Status::Pass } else { Status::Fail },
        value: errors.last().copied(),
        threshold: None,
        detail,
        warnings: Vec::new(),
    }])
}

type Builder<'a> = Box<dyn Fn(f64) -> parity_scope::Result<LadderConfig> + 'a>;

fn chi(c: &ChiCheck) -> Result<Vec<CheckResult>, CliError> {
    let ratios = [c.ratio, c.ratio / 2.0, c.ratio / 4.0];
    let families: [(&str, Builder); 2] = [
        ("transmon", Box::new(|r| Ok(transmon_ladder(r, c.photon_cutoff)))),
        ("tcq", Box::new(|r| tcq_ladder(r, c.photon_cutoff))),
    ];
    let mut out = Vec::new();
    for (family, build) in families {
        let bound_name = format!("chi_{family}_bound");
        let exponent_name = format!("chi_{family}_exponent");
        let warnings = regime_warnings(&build(c.ratio)?)?;
        if !warnings.is_empty() {
            let reason = format!("g/Delta = {} is outside the dispersive regime", c.ratio);
            out.push(CheckResult::skipped(&bound_name, reason.clone(), warnings.clone()));
            out.push(CheckResult::skipped(&exponent_name, reason, warnings));
            continue;
        }
        let errors = ratios.iter().map(|&r| chi_error(&build(r)?)).collect::<parity_scope::Result<Vec<_>>>()?;
        let limit = c.bound_coefficient * c.ratio * c.ratio;
        out.push(CheckResult::compare(
            &bound_name,
            errors[0],
            limit,
            format!(
                "g/Delta = {}: max relative chi error {:.4e} = {:.2} (g/Delta)^2",
                c.ratio,
                errors[0],
                errors[0] / (c.ratio * c.ratio)
            ),
        ));
        let slope = log_slope(&ratios, &errors);
        out.push(CheckResult::compare(
            &exponent_name,
            (slope - 2.0).abs(),
            c.exponent_tolerance,
            format!("relative error ~ (g/Delta)^{slope:.3} over g/Delta = {ratios:?}"),
        ));
    }
    Ok(out)
}

fn switch(c: &SwitchCheck) -> Result<CheckResult, CliError> {
    let name = "zero_switch_splitting";
    let cfg = zero_switch_ladder(c.ratio, 2)?;
    let warnings = regime_warnings(&cfg)?;
    if !warnings.is_empty() {
        return Ok(CheckResult::skipped(name, format!("g/Delta = {} is outside the dispersive regime", c.ratio), warnings));
    }
    let s = switch_oracle(&cfg)?;
    let detuned = LadderConfig { resonator_frequencies: [7.5, 7.7], ..cfg };
    let chi = chi_oracle(&detuned)?.oracle[0].abs();
    Ok(CheckResult::compare(
        name,
        s.state_dependent / chi,
        c.tolerance,
        format!(
            "qubit-dependent half splitting {:.3e} at the resonator crossing, in units of |chi_1| = {:.3e}",
            s.state_dependent, chi
        ),
    ))
}

pub fn validate(v: &ValidationConfig, name: &str, ctx: &Context) -> Result<ValidationReport, CliError> {
    let mut checks = Vec::new();
    if let Some(c) = &v.charge {
        checks.push(charge(c, ctx)?);
    }
    if let Some(c) = &v.factorization {
        checks.push(factorization(c)?);
    }
    if let Some(c) = &v.dressed {
        checks.extend(dressed(c)?);
    }
    if let Some(c) = &v.chi {
        checks.extend(chi(c)?);
    }
    if let Some(c) = &v.switch {
        checks.push(switch(c)?);
    }
    Ok(ValidationReport { scenario: name.to_string(), checks })
}

pub fn run(cfg: &ScenarioConfig, ctx: &Context) -> Result<ValidationReport, CliError> {
    let v = cfg
        .validation
        .as_ref()
        .ok_or_else(|| CliError::Config("validate needs a `validation` block".into()))?;
    let report = validate(v, &cfg.name, ctx)?;
    ctx.say(format!("scenario {}", report.scenario));
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skipped",
        };
        let numbers = match (c.value, c.threshold) {
            (Some(v), Some(t)) => format!(" [{v:.3e} vs limit {t:.3e}]"),
            _ => String::new(),
        };
        ctx.say(format!("  {status:7} {}: {}{numbers}", c.name, c.detail));
        for w in &c.warnings {
            ctx.say(format!("          warning: {w:?}"));
        }
    }
    if let Some(dir) = &ctx.out {
        ensure_dir(dir)?;
        write_json(&dir.join("validation.json"), &report)?;
    }
    match report.failed() {
        0 => Ok(report),
        failed => Err(CliError::ChecksFailed { failed, total: report.checks.len() }),
    }
}
