use num_complex::Complex64;

use super::setup::{hamming_prefactor, MeasurementSetup};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Steady cavity amplitudes under the constant drive `ε_ss` detuned by ν
/// from the frame, from `(iM + vvᵀ/2) α = −i v ε_ss`.
pub fn steady_state(setup: &MeasurementSetup, hamming_weight: u8, drive_offset: f64) -> Result<[Complex64; 2]> {
    setup.validate()?;
    MeasurementSetup::check_weight(hamming_weight)?;
    let m = setup.frequency_matrix(hamming_weight, drive_offset);
    let v = setup.coupling_vector();
    let a: [[Complex64; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| Complex64::new(v[i] * v[j] / 2.0, m[i][j])));
    let rhs = [-I * v[0] * setup.pulse.amplitude, -I * v[1] * setup.pulse.amplitude];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if det.norm() <= f64::EPSILON * scale * scale {
        return Err(Error::SingularResponseMatrix);
    }
    Ok([(rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det, (a[0][0] * rhs[1] - a[1][0] * rhs[0]) / det])
}

/// Closed-form reflection coefficient `r = 1 − 2n/(n + 2i·D)` with
/// `n = κ₁u₂ + κ₂u₁ − 2√(κ₁κ₂) sχ₁₂`, `D = u₁u₂ − (sχ₁₂)²` and
/// `uᵢ = Δ_{di} + sχᵢ − ν`.
pub fn reflection(setup: &MeasurementSetup, hamming_weight: u8, drive_offset: f64) -> Result<Complex64> {
    setup.validate()?;
    MeasurementSetup::check_weight(hamming_weight)?;
    let s = hamming_prefactor(hamming_weight);
    let [k1, k2] = setup.kappa;
    let u1 = setup.detuning[0] + s * setup.chi[0] - drive_offset;
    let u2 = setup.detuning[1] + s * setup.chi[1] - drive_offset;
    let c = s * setup.switch;
    let numerator = k1 * u2 + k2 * u1 - 2.0 * (k1 * k2).sqrt() * c;
    let det = u1 * u2 - c * c;
    let denominator = Complex64::new(numerator, 2.0 * det);
    let natural = [k1, k2, u1.abs(), u2.abs(), c.abs()].into_iter().fold(0.0, f64::max);
    if denominator.norm() < 1e-15 * natural * natural {
        return Err(Error::DegenerateResponse { magnitude: denominator.norm() });
    }
    Ok(1.0 - 2.0 * numerator / denominator)
}

/// Slowest decay rate `min(−Re λ)` over the eigenvalues λ of the homogeneous generator.
pub fn slowest_decay_rate(setup: &MeasurementSetup, hamming_weight: u8) -> f64 {
    let a = setup.generator(hamming_weight);
    let half_trace = (a[0][0] + a[1][1]) / 2.0;
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let root = (half_trace * half_trace - det).sqrt();
    (-(half_trace + root).re).min(-(half_trace - root).re)
}
