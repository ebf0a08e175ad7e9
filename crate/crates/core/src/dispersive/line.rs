use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::units::{ELEMENTARY_CHARGE, HBAR};

/// A transmon capacitively coupled at `x_J` to an open-ended transmission-line resonator (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinePlacement {
    pub length: f64,
    pub position: f64,
    pub coupling_capacitance: f64,
    /// `C_Σ = C_J + C_c`.
    pub total_capacitance: f64,
    pub capacitance_per_length: f64,
    pub inductance_per_length: f64,
    pub mode: usize,
    pub cutoff: usize,
}

impl LinePlacement {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.length,
            self.coupling_capacitance,
            self.total_capacitance,
            self.capacitance_per_length,
            self.inductance_per_length,
        ];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(invalid("line lengths, capacitances and inductance must be positive"));
        }
        if !(0.0..=self.length).contains(&self.position) {
            return Err(invalid(format!("position {} outside [0, {}]", self.position, self.length)));
        }
        if self.mode < 1 || self.mode > self.cutoff {
            return Err(invalid(format!("mode {} outside 1..={}", self.mode, self.cutoff)));
        }
        if self.coupling_capacitance >= self.line_capacitance() {
            return Err(invalid("coupling capacitance must be smaller than the line capacitance"));
        }
        Ok(())
    }

    /// `Lc`, the total capacitance of the line.
    pub fn line_capacitance(&self) -> f64 {
        self.length * self.capacitance_per_length
    }

    /// `ωₙ = πn/(√(ℓc) L)`.
    pub fn mode_frequency(&self, n: usize) -> f64 {
        PI * n as f64 / ((self.inductance_per_length * self.capacitance_per_length).sqrt() * self.length)
    }

    /// `Cₙ = C_c √2 cos(πn x_J/L)`.
    pub fn mode_capacitance(&self, n: usize) -> f64 {
        self.coupling_capacitance * SQRT_2 * (PI * n as f64 * self.position / self.length).cos()
    }

    /// `C₀ … C_{n_c}`.
    pub fn mode_capacitances(&self) -> Vec<f64> {
        (0..=self.cutoff).map(|n| self.mode_capacitance(n)).collect()
    }

    /// `V_rms,n = √(ħωₙ/(2Lc))`.
    pub fn rms_voltage(&self, n: usize) -> f64 {
        (HBAR * self.mode_frequency(n) / (2.0 * self.line_capacitance())).sqrt()
    }
}

/// `gₙ(x_J) = 2e (C_c/C_Σ) V_rms,n √2 cos(πn x_J/L)`, returned in rad/s.
///
/// The transmon charge matrix element `(E_J/32E_C)^{1/4}` is not included;
/// multiply by it for the full coupling.
pub fn coupling_at_position(p: &LinePlacement) -> Result<f64> {
    p.validate()?;
    let n = p.mode;
    let energy = 2.0 * ELEMENTARY_CHARGE * p.coupling_capacitance / p.total_capacitance
        * p.rms_voltage(n)
        * SQRT_2
        * (PI * n as f64 * p.position / p.length).cos();
    Ok(energy / HBAR)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacitanceInverse {
    /// Ordering: modes `0..=n_c` then the junction node.
    pub exact: DMatrix<f64>,
    pub approximate: DMatrix<f64>,
    /// `Σ = Lc C_Σ − Σ Cₙ²`.
    pub sigma: f64,
    /// Max-norm of `exact − approximate` over the mode block.
    pub mode_block_deviation: f64,
    /// Max over all entries of `|exact − approximate|/√(aₖₖ aₗₗ)` with `a` the approximate diagonal.
    pub scaled_deviation: f64,
}

/// Capacitance matrix `[[Lc·1, −C], [−Cᵀ, C_Σ]]` for the given mode capacitances.
pub fn capacitance_matrix(mode_capacitances: &[f64], line_capacitance: f64, total_capacitance: f64) -> DMatrix<f64> {
    let n = mode_capacitances.len();
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for (k, &c) in mode_capacitances.iter().enumerate() {
        m[(k, k)] = line_capacitance;
        m[(k, n)] = -c;
        m[(n, k)] = -c;
    }
    m[(n, n)] = total_capacitance;
    m
}

/// Exact block inverse and its weak-coupling approximation.
pub fn capacitance_inverse(
    mode_capacitances: &[f64],
    line_capacitance: f64,
    total_capacitance: f64,
) -> Result<CapacitanceInverse> {
    if !(line_capacitance > 0.0 && total_capacitance > 0.0) {
        return Err(invalid("line and total capacitance must be positive"));
    }
    let c = DVector::from_column_slice(mode_capacitances);
    let lc = line_capacitance;
    let sigma = lc * total_capacitance - c.norm_squared();
    if !(sigma > 0.0) {
        return Err(Error::SingularCapacitanceMatrix { sigma });
    }
    let n = c.len();
    let mut exact = DMatrix::zeros(n + 1, n + 1);
    let mut approximate = DMatrix::zeros(n + 1, n + 1);
    for k in 0..n {
        for l in 0..n {
            let diagonal = if k == l { 1.0 / lc } else { 0.0 };
            exact[(k, l)] = diagonal + c[k] * c[l] / (lc * sigma);
            approximate[(k, l)] = diagonal;
        }
        exact[(k, n)] = c[k] / sigma;
        exact[(n, k)] = c[k] / sigma;
        approximate[(k, n)] = c[k] / (lc * total_capacitance);
        approximate[(n, k)] = c[k] / (lc * total_capacitance);
    }
    exact[(n, n)] = lc / sigma;
    approximate[(n, n)] = 1.0 / total_capacitance;

    let diff = &exact - &approximate;
    let mode_block_deviation = diff.view((0, 0), (n, n)).amax();
    let scale: Vec<f64> = (0..=n).map(|k| approximate[(k, k)].sqrt()).collect();
    let mut scaled_deviation = 0.0f64;
    for k in 0..=n {
        for l in 0..=n {
            scaled_deviation = scaled_deviation.max(diff[(k, l)].abs() / (scale[k] * scale[l]));
        }
    }
    Ok(CapacitanceInverse { exact, approximate, sigma, mode_block_deviation, scaled_deviation })
}
