use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::info::{analyze, PhasePolicy};
use super::signal::{NoiseConvention, SignalSet};
use crate::dispersive::DispersiveModel;
use crate::dynamics::{evolve, DrivePulse, EvolveOptions, MeasurementSetup, HAMMING_WEIGHTS};
use crate::error::{invalid, Result};
use crate::exec::{try_map, Execution};
use crate::table;

/// Fixed part of a χ sweep: both resonators share κ, χ₁₂ = 0 and the drive
/// sits on the upper parity branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kappa: f64,
    pub pulse: DrivePulse,
    pub tau: f64,
    pub noise: NoiseConvention,
    pub phase: PhasePolicy,
    pub evolve: EvolveOptions,
}

impl SweepConfig {
    /// κ = 1, ε_ss = 0.5, σ = 4, t_on = 1, t_off = 16, τ = 28.
    pub fn reference() -> Self {
        Self {
            kappa: 1.0,
            pulse: DrivePulse { amplitude: 0.5, ramp: 4.0, on: 1.0, off: 16.0 },
            tau: 28.0,
            noise: NoiseConvention::default(),
            phase: PhasePolicy::Optimal,
            evolve: EvolveOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(invalid(format!("kappa must be positive, got {}", self.kappa)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid(format!("measurement time must be positive, got {}", self.tau)));
        }
        self.pulse.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub chi1_over_kappa: f64,
    pub chi2_over_kappa: f64,
    pub info_parity_bits: f64,
    pub info_hamming_bits: f64,
    pub delta_info_bits: f64,
    /// `log₁₀(1 − Ī_P)`, floored at the smallest positive normal.
    pub missing_parity_log10: f64,
    pub phi_star_rad: f64,
}

impl SweepRow {
    pub const CSV_HEADER: [&'static str; 7] = [
        "chi1_over_kappa",
        "chi2_over_kappa",
        "info_parity_bits",
        "info_hamming_bits",
        "delta_info_bits",
        "missing_parity_log10",
        "phi_star_rad",
    ];

    pub fn missing_parity(&self) -> f64 {
        1.0 - self.info_parity_bits
    }

    fn values(&self) -> [f64; 7] {
        [
            self.chi1_over_kappa,
            self.chi2_over_kappa,
            self.info_parity_bits,
            self.info_hamming_bits,
            self.delta_info_bits,
            self.missing_parity_log10,
            self.phi_star_rad,
        ]
    }
}

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    table::write_row(&mut w, SweepRow::CSV_HEADER)?;
    for r in rows {
        table::write_floats(&mut w, &r.values())?;
    }
    Ok(())
}

/// Four trajectories at the parity point for `χᵢ = ratioᵢ·κ`.
pub fn parity_trajectories(chi_over_kappa: [f64; 2], cfg: &SweepConfig) -> Result<Vec<crate::dynamics::Trajectory>> {
    cfg.validate()?;
    let model = DispersiveModel::manual(chi_over_kappa.map(|c| c * cfg.kappa), 0.0);
    let setup = MeasurementSetup::at_parity_point([cfg.kappa; 2], &model, cfg.pulse)?;
    HAMMING_WEIGHTS.iter().map(|&h| evolve(&setup, h, cfg.tau, cfg.evolve)).collect()
}

pub fn sweep_point(chi_over_kappa: [f64; 2], cfg: &SweepConfig) -> Result<SweepRow> {
    let trajectories = parity_trajectories(chi_over_kappa, cfg)?;
    let report = analyze(&SignalSet::from_trajectories(&trajectories, cfg.tau, cfg.noise)?, cfg.phase)?;
    Ok(SweepRow {
        chi1_over_kappa: chi_over_kappa[0],
        chi2_over_kappa: chi_over_kappa[1],
        info_parity_bits: report.parity,
        info_hamming_bits: report.hamming,
        delta_info_bits: report.delta,
        missing_parity_log10: report.missing_parity.max(f64::MIN_POSITIVE).log10(),
        phi_star_rad: report.phi,
    })
}

/// Rows in the order of `points`, independent of the execution mode.
pub fn chi_sweep(points: &[[f64; 2]], cfg: &SweepConfig, exec: Execution) -> Result<Vec<SweepRow>> {
    try_map(exec, points, |&p| sweep_point(p, cfg))
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// `n × n` grid, χ₁ varying slowest.
pub fn grid_points(lo: f64, hi: f64, n: usize) -> Vec<[f64; 2]> {
    let axis = linspace(lo, hi, n);
    axis.iter().flat_map(|&a| axis.iter().map(move |&b| [a, b])).collect()
}

pub fn diagonal_points(lo: f64, hi: f64, n: usize) -> Vec<[f64; 2]> {
    linspace(lo, hi, n).into_iter().map(|c| [c, c]).collect()
}

/// χ₁ varied at fixed χ₂.
pub fn cut_points(chi2: f64, lo: f64, hi: f64, n: usize) -> Vec<[f64; 2]> {
    linspace(lo, hi, n).into_iter().map(|c| [c, chi2]).collect()
}

/// Row with the smallest missing parity information.
pub fn argmin_missing(rows: &[SweepRow]) -> Option<&SweepRow> {
    rows.iter().min_by(|a, b| a.missing_parity().total_cmp(&b.missing_parity()))
}
