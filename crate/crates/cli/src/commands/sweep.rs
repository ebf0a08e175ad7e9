use parity_scope::inference::{
    argmin_missing, chi_sweep, cut_points, diagonal_points, grid_points, write_sweep_csv, SweepConfig, SweepRow,
};
use parity_scope::dynamics::EvolveOptions;
use serde::Serialize;

use super::{ensure_dir, write_file, write_json, Context};
use crate::config::{ScenarioConfig, SweepSections};
use crate::error::CliError;
use crate::scenario::pulse_in_kappa_units;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionSummary {
    pub section: String,
    pub file: String,
    pub rows: usize,
    /// Row with the least missing parity information.
    pub best: Option<SweepRow>,
    pub max_delta_info_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub name: String,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub scenario: String,
    pub config: SweepConfig,
    pub sections: Vec<SectionSummary>,
}

/// Named point lists, in a fixed order.
pub fn sections(s: &SweepSections) -> Vec<(String, Vec<[f64; 2]>)> {
    let mut out = Vec::new();
    if let Some(g) = s.grid {
        out.push(("grid".to_string(), grid_points(g.lo, g.hi, g.n)));
    }
    if let Some(d) = s.diagonal {
        out.push(("diagonal".to_string(), diagonal_points(d.lo, d.hi, d.n)));
    }
    for c in &s.cuts {
        out.push((format!("cut_chi2_{}", c.chi2), cut_points(c.chi2, c.lo, c.hi, c.n)));
    }
    if !s.points.is_empty() {
        out.push(("points".to_string(), s.points.clone()));
    }
    out
}

/// Sweep settings in units of κ with the scenario's pulse.
pub fn sweep_config(cfg: &ScenarioConfig) -> Result<SweepConfig, CliError> {
    if let Some(bus) = &cfg.bus {
        if bus.kappa_mhz[0] != bus.kappa_mhz[1] {
            return Err(CliError::Config("χ sweeps assume equal resonator decay rates".into()));
        }
    }
    let p = cfg.pulse.as_ref().ok_or_else(|| CliError::Config("sweep needs a `pulse` block".into()))?;
    let kappa1 = cfg.bus.as_ref().map(|b| parity_scope::units::mhz_to_angular(b.kappa_mhz[0]));
    let (pulse, tau) = pulse_in_kappa_units(p, kappa1)?;
    Ok(SweepConfig {
        kappa: 1.0,
        pulse,
        tau,
        noise: cfg.analysis.noise,
        phase: cfg.analysis.phase,
        evolve: EvolveOptions::default(),
    })
}

pub fn sweep(cfg: &ScenarioConfig, ctx: &Context) -> Result<(SweepSummary, Vec<SweepSection>), CliError> {
    let sc = sweep_config(cfg)?;
    let spec = cfg.analysis.sweep.clone().filter(|s| !s.is_empty()).unwrap_or_else(SweepSections::default_grid);
    if let Some(dir) = &ctx.out {
        ensure_dir(dir)?;
    }
    let mut summaries = Vec::new();
    let mut results = Vec::new();
    for (name, points) in sections(&spec) {
        let rows = chi_sweep(&points, &sc, ctx.exec)?;
        let file = format!("sweep_{name}.csv");
        if let Some(dir) = &ctx.out {
            write_file(&dir.join(&file), |w| write_sweep_csv(w, &rows))?;
        }
        summaries.push(SectionSummary {
            section: name.clone(),
            file,
            rows: rows.len(),
            best: argmin_missing(&rows).copied(),
            max_delta_info_bits: rows.iter().map(|r| r.delta_info_bits).fold(0.0, f64::max),
        });
        results.push(SweepSection { name, rows });
    }
    let summary = SweepSummary { scenario: cfg.name.clone(), config: sc, sections: summaries };
    if let Some(dir) = &ctx.out {
        write_json(&dir.join("sweep_summary.json"), &summary)?;
    }
    Ok((summary, results))
}

pub fn run(cfg: &ScenarioConfig, ctx: &Context) -> Result<SweepSummary, CliError> {
    let (summary, _) = sweep(cfg, ctx)?;
    ctx.say(format!("scenario {}: tau*kappa = {}", summary.scenario, summary.config.tau));
    for s in &summary.sections {
        match &s.best {
            Some(b) => ctx.say(format!(
                "  {}: {} points, least missing parity info at chi/kappa = ({:.4}, {:.4}): I_P = {:.6} bits, max delta = {:.4} bits",
                s.section, s.rows, b.chi1_over_kappa, b.chi2_over_kappa, b.info_parity_bits, s.max_delta_info_bits
            )),
            None => ctx.say(format!("  {}: no points", s.section)),
        }
    }
    Ok(summary)
}
