use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::eigen::Spectrum;
use crate::dispersive::PlusMinus;
use crate::error::{invalid, Error, Result};
use crate::exec::{self, Execution};

/// Largest charge cutoff the adaptive probe will try (matrix dimension 65²).
pub const MAX_CHARGE_CUTOFF: usize = 32;
const CUTOFF_STEP: usize = 4;
const CONVERGENCE: f64 = 1e-8;

/// Two charge registers `n₊, n₋ ∈ [−n_max, n_max]` with the TCQ Hamiltonian
/// `Σ 4E_C(n−n_g)² − E_J cos φ + 4E_I (n₊−n_g₊)(n₋−n_g₋)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargeBasisConfig {
    pub charging_energy: PlusMinus,
    pub josephson_energy: PlusMinus,
    pub interaction_energy: f64,
    pub offset_charge: PlusMinus,
    pub charge_cutoff: usize,
}

impl ChargeBasisConfig {
    pub fn symmetric(charging_energy: f64, josephson_energy: f64, interaction_energy: f64) -> Self {
        Self {
            charging_energy: PlusMinus::new(charging_energy, charging_energy),
            josephson_energy: PlusMinus::new(josephson_energy, josephson_energy),
            interaction_energy,
            offset_charge: PlusMinus::default(),
            charge_cutoff: 8,
        }
    }

    pub fn with_offsets(mut self, plus: f64, minus: f64) -> Self {
        self.offset_charge = PlusMinus::new(plus, minus);
        self
    }

    pub fn with_cutoff(mut self, charge_cutoff: usize) -> Self {
        self.charge_cutoff = charge_cutoff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ec = self.charging_energy;
        let ej = self.josephson_energy;
        if !(ec.plus > 0.0 && ec.minus > 0.0 && ej.plus > 0.0 && ej.minus > 0.0) {
            return Err(invalid("charging and Josephson energies must be positive"));
        }
        if !self.interaction_energy.is_finite() {
            return Err(invalid("interaction energy must be finite"));
        }
        if self.charge_cutoff < 8 {
            return Err(invalid(format!("charge cutoff {} below 8", self.charge_cutoff)));
        }
        Ok(())
    }

    fn energy_scale(&self) -> f64 {
        self.charging_energy.plus.max(self.charging_energy.minus)
    }

    pub fn hamiltonian(&self, cutoff: usize) -> DMatrix<f64> {
        let dim = 2 * cutoff + 1;
        let charge = |k: usize, offset: f64| k as f64 - cutoff as f64 - offset;
        let index = |a: usize, b: usize| a * dim + b;
        let (ec, ej, ng) = (self.charging_energy, self.josephson_energy, self.offset_charge);
        let mut h = DMatrix::zeros(dim * dim, dim * dim);
        for a in 0..dim {
            let np = charge(a, ng.plus);
            for b in 0..dim {
                let nm = charge(b, ng.minus);
                let i = index(a, b);
                h[(i, i)] = 4.0 * ec.plus * np * np + 4.0 * ec.minus * nm * nm + 4.0 * self.interaction_energy * np * nm;
                if a + 1 < dim {
                    let j = index(a + 1, b);
                    h[(i, j)] = -ej.plus / 2.0;
                    h[(j, i)] = -ej.plus / 2.0;
                }
                if b + 1 < dim {
                    let j = index(a, b + 1);
                    h[(i, j)] = -ej.minus / 2.0;
                    h[(j, i)] = -ej.minus / 2.0;
                }
            }
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargeSpectrum {
    /// Lowest eigenvalues, ascending.
    pub levels: Vec<f64>,
    /// Cutoff at which the levels were taken.
    pub cutoff: usize,
    /// Largest change of the reported levels on the last cutoff increase.
    pub probe_change: f64,
}

fn lowest(h: DMatrix<f64>, count: usize) -> Vec<f64> {
    let mut values = Spectrum::values_of(h);
    values.truncate(count);
    values
}

/// Lowest `levels` eigenvalues at the first cutoff whose levels move by less
/// than `1e−8·E_C` when the cutoff is raised by 4.
pub fn tcq_charge_spectrum(cfg: &ChargeBasisConfig, levels: usize) -> Result<ChargeSpectrum> {
    cfg.validate()?;
    let tolerance = CONVERGENCE * cfg.energy_scale();
    let mut cutoff = cfg.charge_cutoff;
    let mut current = lowest(cfg.hamiltonian(cutoff), levels);
    loop {
        let next_cutoff = cutoff + CUTOFF_STEP;
        if next_cutoff > MAX_CHARGE_CUTOFF.max(cfg.charge_cutoff + CUTOFF_STEP) {
            return Err(Error::ConvergenceFailure {
                what: "charge-basis spectrum",
                detail: format!("levels still moving at cutoff {cutoff}"),
            });
        }
        let next = lowest(cfg.hamiltonian(next_cutoff), levels);
        let change = current.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if change < tolerance {
            return Ok(ChargeSpectrum { levels: current, cutoff, probe_change: change });
        }
        cutoff = next_cutoff;
        current = next;
    }
}

/// Charge-basis spectrum of a single transmon `4E_C(n−n_g)² − E_J cos φ`.
pub fn transmon_charge_spectrum(charging_energy: f64, josephson_energy: f64, offset: f64, cutoff: usize) -> Vec<f64> {
    let dim = 2 * cutoff + 1;
    let mut h = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let n = k as f64 - cutoff as f64 - offset;
        h[(k, k)] = 4.0 * charging_energy * n * n;
        if k + 1 < dim {
            h[(k, k + 1)] = -josephson_energy / 2.0;
            h[(k + 1, k)] = -josephson_energy / 2.0;
        }
    }
    Spectrum::values_of(h)
}

/// Lowest `levels` pairwise sums of the two single-transmon spectra, the
/// exact spectrum when `E_I = 0`.
pub fn decoupled_spectrum(cfg: &ChargeBasisConfig, levels: usize, cutoff: usize) -> Vec<f64> {
    let (ec, ej, ng) = (cfg.charging_energy, cfg.josephson_energy, cfg.offset_charge);
    let plus = transmon_charge_spectrum(ec.plus, ej.plus, ng.plus, cutoff);
    let minus = transmon_charge_spectrum(ec.minus, ej.minus, ng.minus, cutoff);
    let mut sums: Vec<f64> = plus.iter().take(levels).flat_map(|a| minus.iter().take(levels).map(move |b| a + b)).collect();
    sums.sort_by(f64::total_cmp);
    sums.truncate(levels);
    sums
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargeDispersion {
    /// `max − min` over the offset grid for each level.
    pub per_level: Vec<f64>,
    pub cutoff: usize,
    pub grid_points: usize,
}

impl ChargeDispersion {
    pub fn max(&self) -> f64 {
        self.per_level.iter().copied().fold(0.0, f64::max)
    }
}

/// Sweeps both offset charges over `points × points` values in `[0, 1]`.
///
/// The cutoff is fixed once by the adaptive probe at the most charge-sensitive
/// point `n_g = (1/2, 1/2)` and reused across the grid.
pub fn charge_dispersion(cfg: &ChargeBasisConfig, levels: usize, points: usize, exec: Execution) -> Result<ChargeDispersion> {
    if points < 2 {
        return Err(invalid("offset grid needs at least two points per axis"));
    }
    let probe = tcq_charge_spectrum(&cfg.with_offsets(0.5, 0.5), levels)?;
    let cutoff = probe.cutoff;
    let grid: Vec<(f64, f64)> = (0..points * points)
        .map(|k| {
            let step = 1.0 / (points - 1) as f64;
            ((k / points) as f64 * step, (k % points) as f64 * step)
        })
        .collect();
    let spectra = exec::map(exec, &grid, |&(p, m)| lowest(cfg.with_offsets(p, m).hamiltonian(cutoff), levels));
    let per_level = (0..levels)
        .map(|l| {
            let (lo, hi) = spectra
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s[l]), hi.max(s[l])));
            hi - lo
        })
        .collect();
    Ok(ChargeDispersion { per_level, cutoff, grid_points: grid.len() })
}
