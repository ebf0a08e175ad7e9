use parity_scope::dynamics::{
    evolve, reflection, EvolveOptions, MeasurementSetup, Trajectory, HAMMING_WEIGHTS,
};
use parity_scope::inference::{analyze, info_series, measurement_rates, tau_grid, InfoGainReport, RateSeries, SignalSet};
use parity_scope::{exec, table};
use serde::Serialize;

use super::{ensure_dir, write_file, write_json, Context};
use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::scenario::derive;

const SAMPLE_STRIDE: usize = 10;
const STEP_PER_KAPPA: f64 = 1e-3;
const STEP_PER_RATE: f64 = 5e-3;

/// Which Hamming weights to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HwSelection {
    #[default]
    All,
    One(u8),
}

impl HwSelection {
    pub fn weights(self) -> Vec<u8> {
        match self {
            HwSelection::All => HAMMING_WEIGHTS.to_vec(),
            HwSelection::One(h) => vec![h],
        }
    }
}

impl std::str::FromStr for HwSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(HwSelection::All),
            _ => match s.parse::<u8>() {
                Ok(h) if h <= 3 => Ok(HwSelection::One(h)),
                _ => Err(format!("expected 0, 1, 2, 3 or `all`, got `{s}`")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyResponse {
    pub hamming_weight: u8,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub arg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParityCollapse {
    /// `|r(0) − r(2)|`.
    pub even: f64,
    /// `|r(1) − r(3)|`.
    pub odd: f64,
    /// `|r(0) − r(1)|`.
    pub contrast: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub scenario: String,
    /// Times in units of `1/κ₁`.
    pub duration: f64,
    pub dt: f64,
    pub samples: usize,
    pub setup: MeasurementSetup,
    pub parity_condition_met: bool,
    pub steady_state: Vec<SteadyResponse>,
    pub parity_collapse: Option<ParityCollapse>,
    /// Information gains at the end of the record.
    pub information: Option<InfoGainReport>,
    pub files: Vec<String>,
}

/// Full outcome, including the data written to disk.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub summary: SimulationSummary,
    pub trajectories: Vec<Trajectory>,
    pub series: Vec<InfoGainReport>,
    pub rates: Option<RateSeries>,
}

/// Step and stride such that `τ` splits into a whole number of sample blocks
/// per `intervals` measurement-time interval.
pub fn evolve_options(setup: &MeasurementSetup, tau: f64, intervals: usize) -> EvolveOptions {
    let rate = HAMMING_WEIGHTS.iter().map(|&h| setup.rate_scale(h)).fold(0.0, f64::max);
    let kappa = setup.kappa[0].max(setup.kappa[1]);
    let dt_max = (STEP_PER_KAPPA / kappa).min(STEP_PER_RATE / rate);
    let per_interval = (tau / (intervals as f64 * dt_max * SAMPLE_STRIDE as f64)).ceil().max(1.0) as usize;
    let blocks = per_interval * intervals;
    EvolveOptions { dt: tau / (blocks * SAMPLE_STRIDE) as f64, stride: SAMPLE_STRIDE, probe: true }
}

fn steady_state(setup: &MeasurementSetup) -> Result<Vec<SteadyResponse>, CliError> {
    HAMMING_WEIGHTS
        .iter()
        .map(|&h| {
            let r = reflection(setup, h, 0.0)?;
            Ok(SteadyResponse { hamming_weight: h, re: r.re, im: r.im, abs: r.norm(), arg: r.arg() })
        })
        .collect()
}

fn collapse(r: &[SteadyResponse]) -> ParityCollapse {
    let d = |a: usize, b: usize| ((r[a].re - r[b].re).powi(2) + (r[a].im - r[b].im).powi(2)).sqrt();
    ParityCollapse { even: d(0, 2), odd: d(1, 3), contrast: d(0, 1) }
}

fn write_outputs(dir: &std::path::Path, sim: &Simulation) -> Result<Vec<String>, CliError> {
    ensure_dir(dir)?;
    let mut files = Vec::new();
    for t in &sim.trajectories {
        let name = format!("trajectory_hw{}.csv", t.hamming_weight);
        write_file(&dir.join(&name), |w| t.write_csv(w))?;
        files.push(name);
        let name = format!("output_hw{}.csv", t.hamming_weight);
        write_file(&dir.join(&name), |w| {
            table::write_row(w, ["t", "input", "re_bout", "im_bout"])?;
            for k in 0..t.len() {
                table::write_floats(w, &[t.times[k], t.input[k], t.output[k].re, t.output[k].im])?;
            }
            Ok(())
        })?;
        files.push(name);
    }
    if !sim.series.is_empty() {
        let name = "information.csv".to_string();
        write_file(&dir.join(&name), |w| {
            table::write_row(w, ["tau_kappa", "info_hamming_bits", "info_parity_bits", "phi_star_rad"])?;
            for r in &sim.series {
                table::write_floats(w, &[r.tau, r.hamming, r.parity, r.phi])?;
            }
            Ok(())
        })?;
        files.push(name);
    }
    if let Some(rates) = &sim.rates {
        let name = "rates.csv".to_string();
        write_file(&dir.join(&name), |w| rates.write_csv(w, 1.0))?;
        files.push(name);
    }
    files.push("summary.json".into());
    Ok(files)
}

/// Integrates the selected Hamming weights; with all four, also the
/// information gains and measurement rates on the measurement-time grid.
pub fn simulate(cfg: &ScenarioConfig, hw: HwSelection, ctx: &Context) -> Result<Simulation, CliError> {
    let pulse_cfg = cfg.pulse.as_ref().ok_or_else(|| CliError::Config("simulate needs a `pulse` block".into()))?;
    let derived = derive(cfg)?;
    let (pulse, tau) = derived.pulse(pulse_cfg)?;
    let setup = derived.setup(pulse)?;
    let intervals = cfg.analysis.tau_points - 1;
    let opts = evolve_options(&setup, tau, intervals);
    let weights = hw.weights();
    let trajectories = exec::try_map(ctx.exec, &weights, |&h| evolve(&setup, h, tau, opts))?;

    let steady = steady_state(&setup)?;
    let (mut series, mut rates, mut information, mut parity_collapse) = (Vec::new(), None, None, None);
    if hw == HwSelection::All {
        parity_collapse = Some(collapse(&steady));
        let a = &cfg.analysis;
        information = Some(analyze(&SignalSet::from_trajectories(&trajectories, tau, a.noise)?, a.phase)?);
        series = info_series(&trajectories, &tau_grid(tau, a.tau_points), a.phase, a.noise, ctx.exec)?;
        rates = Some(measurement_rates(&series)?);
    }
    let summary = SimulationSummary {
        scenario: cfg.name.clone(),
        duration: tau,
        dt: opts.dt,
        samples: trajectories[0].len(),
        setup,
        parity_condition_met: derived.parity_condition_met(),
        steady_state: steady,
        parity_collapse,
        information,
        files: Vec::new(),
    };
    let mut sim = Simulation { summary, trajectories, series, rates };
    if let Some(dir) = &ctx.out {
        sim.summary.files = write_outputs(dir, &sim)?;
        write_json(&dir.join("summary.json"), &sim.summary)?;
    }
    Ok(sim)
}

pub fn run(cfg: &ScenarioConfig, hw: HwSelection, ctx: &Context) -> Result<Simulation, CliError> {
    let sim = simulate(cfg, hw, ctx)?;
    let s = &sim.summary;
    ctx.say(format!("scenario {}: tau*kappa = {}, dt = {:.3e}, {} samples", s.scenario, s.duration, s.dt, s.samples));
    for r in &s.steady_state {
        ctx.say(format!("  r(hw={}) = {:+.6} {:+.6}i  |r| = {:.6}", r.hamming_weight, r.re, r.im, r.abs));
    }
    if let Some(c) = s.parity_collapse {
        ctx.say(format!("  |r0 - r2| = {:.3e}, |r1 - r3| = {:.3e}, |r0 - r1| = {:.6}", c.even, c.odd, c.contrast));
    }
    if let Some(i) = s.information {
        ctx.say(format!(
            "  information at tau: I_hw = {:.6} bits, I_P = {:.6} bits, phi* = {:.4} rad",
            i.hamming, i.parity, i.phi
        ));
    }
    if let Some(dir) = &ctx.out {
        ctx.say(format!("  wrote {} files to {}", s.files.len(), dir.display()));
    }
    Ok(sim)
}
