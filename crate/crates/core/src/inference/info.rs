use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bayes::{mixture_density, posteriors, Posterior};
use super::signal::{SignalModel, SignalSet};
use crate::error::{Error, Result};
use crate::quadrature::simpson;

pub const OUTER_POINTS: usize = 4001;
pub const PADDING_SIGMAS: f64 = 8.0;
const DOUBLING_TOLERANCE: f64 = 1e-6;
const PHASE_GRID: usize = 256;
const PHASE_SEARCH_POINTS: usize = 1001;
const PHASE_TOLERANCE: f64 = 1e-4;

/// Average information gains in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoGains {
    pub hamming: f64,
    pub parity: f64,
}

/// How the local-oscillator phase is chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhasePolicy {
    /// Maximize the parity information.
    #[default]
    Optimal,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoGainReport {
    pub tau: f64,
    pub phi: f64,
    pub hamming: f64,
    pub parity: f64,
    /// `1 − Ī_P`.
    pub missing_parity: f64,
    /// `Ī_hw − Ī_P`.
    pub delta: f64,
}

impl InfoGainReport {
    fn new(tau: f64, phi: f64, g: InfoGains) -> Self {
        Self { tau, phi, hamming: g.hamming, parity: g.parity, missing_parity: 1.0 - g.parity, delta: g.hamming - g.parity }
    }
}

fn outer_grid(model: &SignalModel, points: usize) -> (f64, f64) {
    let lo = model.means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = model.means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = PADDING_SIGMAS * model.sigma();
    let points = points.max(3) | 1;
    (lo - pad, (hi - lo + 2.0 * pad) / (points - 1) as f64)
}

/// `∫ p(I) f(I, posterior) dI` by composite Simpson over the padded mean range.
pub fn mixture_expectation<F: Fn(f64, &Posterior) -> f64>(model: &SignalModel, points: usize, f: F) -> f64 {
    let (start, h) = outer_grid(model, points);
    let ys: Vec<f64> = (0..(points.max(3) | 1))
        .map(|k| {
            let i = start + k as f64 * h;
            mixture_density(i, model) * f(i, &posteriors(i, model))
        })
        .collect();
    simpson(&ys, h)
}

fn gains_with(model: &SignalModel, points: usize) -> InfoGains {
    let (start, h) = outer_grid(model, points);
    let n = points.max(3) | 1;
    let mut hw = Vec::with_capacity(n);
    let mut par = Vec::with_capacity(n);
    for k in 0..n {
        let i = start + k as f64 * h;
        let w = mixture_density(i, model);
        let p = posteriors(i, model);
        hw.push(w * p.hamming_information());
        par.push(w * p.parity_information());
    }
    InfoGains { hamming: simpson(&hw, h), parity: simpson(&par, h) }
}

/// `Ī_hw` and `Ī_P`, with a point-doubling convergence check.
pub fn info_gains(model: &SignalModel) -> Result<InfoGains> {
    model.validate()?;
    let coarse = gains_with(model, OUTER_POINTS);
    let fine = gains_with(model, 2 * OUTER_POINTS - 1);
    let change = (fine.hamming - coarse.hamming).abs().max((fine.parity - coarse.parity).abs());
    if !(change <= DOUBLING_TOLERANCE) {
        return Err(Error::QuadratureNonconvergent { change });
    }
    Ok(fine)
}

fn golden_maximum<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// `argmax_φ Ī_P` over `[0, π)`: coarse grid then golden-section refinement.
pub fn optimal_phase(signals: &SignalSet) -> Result<f64> {
    let objective = |phi: f64| match signals.model(phi) {
        Ok(m) => gains_with(&m, PHASE_SEARCH_POINTS).parity,
        Err(_) => f64::NEG_INFINITY,
    };
    signals.model(0.0)?;
    let step = PI / PHASE_GRID as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 0..PHASE_GRID {
        let v = objective(k as f64 * step);
        if v > best.1 {
            best = (k, v);
        }
    }
    let centre = best.0 as f64 * step;
    let phi = golden_maximum(objective, centre - step, centre + step, PHASE_TOLERANCE);
    Ok(phi.rem_euclid(PI))
}

/// Information gains at the phase selected by `policy`; `τ = 0` yields zero gains.
pub fn analyze(signals: &SignalSet, policy: PhasePolicy) -> Result<InfoGainReport> {
    if signals.tau == 0.0 {
        let phi = match policy {
            PhasePolicy::Optimal => 0.0,
            PhasePolicy::Fixed(phi) => phi,
        };
        return Ok(InfoGainReport::new(0.0, phi, InfoGains { hamming: 0.0, parity: 0.0 }));
    }
    let phi = match policy {
        PhasePolicy::Optimal => optimal_phase(signals)?,
        PhasePolicy::Fixed(phi) => phi,
    };
    Ok(InfoGainReport::new(signals.tau, phi, info_gains(&signals.model(phi)?)?))
}
