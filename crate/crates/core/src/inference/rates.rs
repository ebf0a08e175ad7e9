use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::info::{analyze, InfoGainReport, PhasePolicy};
use super::signal::{NoiseConvention, SignalSet};
use crate::dynamics::Trajectory;
use crate::error::{invalid, Error, Result};
use crate::exec::{try_map, Execution};
use crate::table;

pub const MIN_RATE_POINTS: usize = 57;
const CONSISTENCY_TOLERANCE: f64 = 1e-3;

/// `points` uniform times on `[0, τ_max]`.
pub fn tau_grid(tau_max: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n).map(|k| tau_max * k as f64 / (n - 1) as f64).collect()
}

/// Information gains at each measurement time, all from the same four trajectories.
pub fn info_series(
    trajectories: &[Trajectory],
    taus: &[f64],
    policy: PhasePolicy,
    noise: NoiseConvention,
    exec: Execution,
) -> Result<Vec<InfoGainReport>> {
    try_map(exec, taus, |&tau| analyze(&SignalSet::from_trajectories(trajectories, tau, noise)?, policy))
}

/// `Γ_{m,hw} = dĪ_hw/dτ` and `Γ_{m,P} = dĪ_P/dτ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSeries {
    pub tau: Vec<f64>,
    pub gamma_hw: Vec<f64>,
    pub gamma_p: Vec<f64>,
}

impl RateSeries {
    pub const CSV_HEADER: [&'static str; 3] = ["tau_kappa", "gamma_hw", "gamma_p"];

    /// Times scaled by κ, rates by 1/κ.
    pub fn write_csv<W: Write>(&self, mut w: W, kappa: f64) -> io::Result<()> {
        table::write_row(&mut w, Self::CSV_HEADER)?;
        for k in 0..self.tau.len() {
            table::write_floats(&mut w, &[self.tau[k] * kappa, self.gamma_hw[k] / kappa, self.gamma_p[k] / kappa])?;
        }
        Ok(())
    }
}

fn derivative(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    (0..n)
        .map(|k| match k {
            0 => (y[1] - y[0]) / h,
            _ if k == n - 1 => (y[n - 1] - y[n - 2]) / h,
            _ => (y[k + 1] - y[k - 1]) / (2.0 * h),
        })
        .collect()
}

fn trapezoid(y: &[f64], h: f64) -> f64 {
    h * (y.iter().sum::<f64>() - (y[0] + y[y.len() - 1]) / 2.0)
}

/// Finite-difference rates; the trapezoid integral of each rate must recover
/// the information gained over the grid within `10⁻³` bits.
pub fn measurement_rates(reports: &[InfoGainReport]) -> Result<RateSeries> {
    let n = reports.len();
    if n < MIN_RATE_POINTS {
        return Err(Error::GridTooCoarse(format!("{n} times, need at least {MIN_RATE_POINTS}")));
    }
    let tau: Vec<f64> = reports.iter().map(|r| r.tau).collect();
    let h = (tau[n - 1] - tau[0]) / (n - 1) as f64;
    if !(h > 0.0) || tau.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
        return Err(invalid("measurement times must form an increasing uniform grid"));
    }
    let hw: Vec<f64> = reports.iter().map(|r| r.hamming).collect();
    let par: Vec<f64> = reports.iter().map(|r| r.parity).collect();
    let gamma_hw = derivative(&hw, h);
    let gamma_p = derivative(&par, h);
    for (name, y, g) in [("Hamming", &hw, &gamma_hw), ("parity", &par, &gamma_p)] {
        let diff = (trapezoid(g, h) - (y[n - 1] - y[0])).abs();
        if diff > CONSISTENCY_TOLERANCE {
            return Err(Error::GridTooCoarse(format!(
                "integrated {name} rate misses the gain by {diff:e} bits"
            )));
        }
    }
    Ok(RateSeries { tau, gamma_hw, gamma_p })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reports(f: impl Fn(f64) -> f64, n: usize) -> Vec<InfoGainReport> {
        tau_grid(28.0, n)
            .into_iter()
            .map(|t| InfoGainReport { tau: t, phi: 0.0, hamming: 2.0 * f(t), parity: f(t), missing_parity: 1.0 - f(t), delta: f(t) })
            .collect()
    }

    #[test]
    fn grid() {
        let g = tau_grid(28.0, 57);
        assert_eq!(g.len(), 57);
        assert_eq!(g[1], 0.5);
        assert_eq!(g[56], 28.0);
    }

    #[test]
    fn constant_information_has_zero_rate() {
        let r = measurement_rates(&reports(|_| 0.3, 57)).unwrap();
        assert!(r.gamma_p.iter().chain(&r.gamma_hw).all(|&g| g == 0.0));
    }

    #[test]
    fn smooth_gain_is_consistent() {
        let r = measurement_rates(&reports(|t| 1.0 - (-t / 5.0).exp(), 57)).unwrap();
        assert!((r.gamma_p[28] - (-14.0f64 / 5.0).exp() / 5.0).abs() < 1e-3);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(measurement_rates(&reports(|t| t, 20)), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn csv_header() {
        let r = measurement_rates(&reports(|t| t / 28.0, 57)).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf, 1.0).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("tau_kappa,gamma_hw,gamma_p\n0,"));
    }
}
