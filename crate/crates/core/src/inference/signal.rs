use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{invalid, Error, Result};
use crate::quadrature::simpson;

const RICHARDSON_TOLERANCE: f64 = 1e-6;

/// Shot-noise model of the integrated homodyne record.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseConvention {
    /// Variance τ.
    #[default]
    VarianceTau,
    /// Variance τ², the exponent of the printed density taken literally.
    VarianceTauSquared,
}

impl NoiseConvention {
    pub fn variance(self, tau: f64) -> f64 {
        match self {
            Self::VarianceTau => tau,
            Self::VarianceTauSquared => tau * tau,
        }
    }
}

/// Gaussian model of `I` conditioned on the Hamming weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalModel {
    pub tau: f64,
    pub phi: f64,
    /// `I_{h_w}(τ)` for `h_w = 0..=3`.
    pub means: [f64; 4],
    pub variance: f64,
}

impl SignalModel {
    pub fn new(tau: f64, phi: f64, means: [f64; 4], noise: NoiseConvention) -> Result<Self> {
        let m = Self { tau, phi, means, variance: noise.variance(tau) };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid(format!("measurement time must be positive, got {}", self.tau)));
        }
        if !(self.variance > 0.0 && self.variance.is_finite()) {
            return Err(invalid(format!("noise variance must be positive, got {}", self.variance)));
        }
        if self.means.iter().any(|m| !m.is_finite()) {
            return Err(invalid("signal means must be finite"));
        }
        Ok(())
    }

    pub fn sigma(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Complex integrals `Z_{h_w} = ∫₀^τ β_out dt`, from which the mean at any
/// phase follows as `I = 2 Re(e^{−iφ} Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalSet {
    pub tau: f64,
    pub z: [Complex64; 4],
    pub noise: NoiseConvention,
}

impl SignalSet {
    pub fn from_trajectories(trajectories: &[Trajectory], tau: f64, noise: NoiseConvention) -> Result<Self> {
        if trajectories.len() != 4 {
            return Err(invalid(format!("need four trajectories, got {}", trajectories.len())));
        }
        let mut z = [Complex64::new(0.0, 0.0); 4];
        for t in trajectories {
            if t.hamming_weight > 3 {
                return Err(invalid(format!("Hamming weight {} outside 0..=3", t.hamming_weight)));
            }
            z[usize::from(t.hamming_weight)] = output_integral(t, tau)?;
        }
        Ok(Self { tau, z, noise })
    }

    pub fn means(&self, phi: f64) -> [f64; 4] {
        let rot = Complex64::from_polar(1.0, -phi);
        self.z.map(|z| 2.0 * (rot * z).re)
    }

    pub fn model(&self, phi: f64) -> Result<SignalModel> {
        SignalModel::new(self.tau, phi, self.means(phi), self.noise)
    }
}

fn prefix_len(traj: &Trajectory, tau: f64) -> Result<usize> {
    let h = traj.spacing();
    if traj.len() < 2 || !(h > 0.0) {
        return Err(invalid("trajectory needs at least two samples"));
    }
    if !(tau >= 0.0) {
        return Err(invalid(format!("measurement time must be non-negative, got {tau}")));
    }
    let k = (tau - traj.times[0]) / h;
    let idx = k.round();
    if (k - idx).abs() > 1e-6 || idx as usize >= traj.len() {
        return Err(invalid(format!(
            "tau = {tau} is not a sample of the trajectory grid (spacing {h}, end {})",
            traj.times[traj.len() - 1]
        )));
    }
    Ok(idx as usize + 1)
}

/// `∫₀^τ β_out dt` by composite Simpson, checked against the same rule on
/// every other sample.
pub fn output_integral(traj: &Trajectory, tau: f64) -> Result<Complex64> {
    let n = prefix_len(traj, tau)?;
    let h = traj.spacing();
    let y = &traj.output[..n];
    let fine = simpson(y, h);
    let scale = simpson(&y.iter().map(|b| b.norm()).collect::<Vec<_>>(), h);
    if scale == 0.0 {
        return Ok(fine);
    }
    // Check on the largest even-interval prefix so both rules share nodes.
    let even = if (n - 1) % 2 == 0 { n } else { n - 1 };
    if even < 5 {
        return Err(Error::GridTooCoarse(format!("only {} intervals up to tau = {tau}", n - 1)));
    }
    let half: Vec<Complex64> = y[..even].iter().step_by(2).copied().collect();
    let diff = (simpson(&y[..even], h) - simpson(&half, 2.0 * h)).norm();
    if diff > RICHARDSON_TOLERANCE * scale {
        return Err(Error::GridTooCoarse(format!(
            "halving the grid changes the integral by {:e} relative",
            diff / scale
        )));
    }
    Ok(fine)
}

/// `I_{h_w}(τ) = ∫₀^τ (β_out e^{−iφ} + β_out* e^{iφ}) dt`.
pub fn integrated_signal(traj: &Trajectory, phi: f64, tau: f64) -> Result<f64> {
    Ok(2.0 * (Complex64::from_polar(1.0, -phi) * output_integral(traj, tau)?).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn constant(c: Complex64, points: usize, h: f64) -> Trajectory {
        Trajectory {
            hamming_weight: 0,
            times: (0..points).map(|k| k as f64 * h).collect(),
            alpha: [vec![Complex64::new(0.0, 0.0); points], vec![Complex64::new(0.0, 0.0); points]],
            input: vec![0.0; points],
            output: vec![c; points],
        }
    }

    #[test]
    fn zero_field_gives_zero() {
        let t = constant(Complex64::new(0.0, 0.0), 101, 0.01);
        assert_eq!(integrated_signal(&t, 0.3, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn constant_real_field() {
        let t = constant(Complex64::new(0.7, 0.0), 2801, 0.01);
        assert_relative_eq!(integrated_signal(&t, 0.0, 28.0).unwrap(), 2.0 * 0.7 * 28.0, max_relative = 1e-13);
        assert_relative_eq!(integrated_signal(&t, 0.0, 10.0).unwrap(), 2.0 * 0.7 * 10.0, max_relative = 1e-13);
    }

    #[test]
    fn phase_shift_by_pi_negates() {
        let t = constant(Complex64::new(0.3, -0.8), 2801, 0.01);
        let a = integrated_signal(&t, 0.4, 28.0).unwrap();
        let b = integrated_signal(&t, 0.4 + std::f64::consts::PI, 28.0).unwrap();
        assert_relative_eq!(a, -b, max_relative = 1e-12);
    }

    #[test]
    fn off_grid_time_rejected() {
        let t = constant(Complex64::new(1.0, 0.0), 101, 0.01);
        assert!(integrated_signal(&t, 0.0, 0.555).is_err());
        assert!(integrated_signal(&t, 0.0, 2.0).is_err());
    }

    #[test]
    fn undersampled_oscillation_rejected() {
        let mut t = constant(Complex64::new(0.0, 0.0), 201, 0.1);
        for (k, b) in t.output.iter_mut().enumerate() {
            *b = Complex64::from_polar(1.0, 9.0 * k as f64 * 0.1);
        }
        assert!(matches!(output_integral(&t, 20.0), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn variance_conventions() {
        assert_eq!(NoiseConvention::VarianceTau.variance(28.0), 28.0);
        assert_eq!(NoiseConvention::VarianceTauSquared.variance(28.0), 784.0);
        assert!(SignalModel::new(0.0, 0.0, [0.0; 4], NoiseConvention::default()).is_err());
    }
}
