use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::setup::MeasurementSetup;
use crate::error::{invalid, Error, Result};
use crate::table;

const PROBE_TOLERANCE: f64 = 1e-8;
const STEP_LIMIT: f64 = 0.01;
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Fixed-step RK4 settings; times in the same unit as `1/κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    pub dt: f64,
    /// Integration steps between stored samples.
    pub stride: usize,
    /// Rerun at `dt/2` and require agreement to `1e−8` relative.
    pub probe: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { dt: 1e-3, stride: 10, probe: true }
    }
}

impl EvolveOptions {
    /// Default step `10⁻³/κ_max` for rates in arbitrary units.
    pub fn for_setup(setup: &MeasurementSetup) -> Self {
        Self { dt: 1e-3 / setup.kappa[0].max(setup.kappa[1]), ..Self::default() }
    }

    pub fn without_probe(mut self) -> Self {
        self.probe = false;
        self
    }
}

/// Sampled cavity amplitudes and fields for one Hamming weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub hamming_weight: u8,
    /// Uniform grid starting at 0.
    pub times: Vec<f64>,
    pub alpha: [Vec<Complex64>; 2],
    pub input: Vec<f64>,
    pub output: Vec<Complex64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
        }
    }

    pub const CSV_HEADER: [&'static str; 7] = ["t", "re_a1", "im_a1", "re_a2", "im_a2", "re_bout", "im_bout"];

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        table::write_row(&mut w, Self::CSV_HEADER)?;
        for k in 0..self.len() {
            let (a1, a2, b) = (self.alpha[0][k], self.alpha[1][k], self.output[k]);
            table::write_floats(&mut w, &[self.times[k], a1.re, a1.im, a2.re, a2.im, b.re, b.im])?;
        }
        Ok(())
    }

    /// Reads a file written by [`Trajectory::write_csv`]; the input drive is
    /// reconstructed from the output and cavity fields.
    pub fn read_csv<R: BufRead>(reader: R, hamming_weight: u8, setup: &MeasurementSetup) -> Result<Self> {
        let v = setup.coupling_vector();
        let mut t = Trajectory {
            hamming_weight,
            times: Vec::new(),
            alpha: [Vec::new(), Vec::new()],
            input: Vec::new(),
            output: Vec::new(),
        };
        for (n, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| invalid(format!("trajectory read failed: {e}")))?;
            if n == 0 {
                if line.split(',').collect::<Vec<_>>() != Self::CSV_HEADER {
                    return Err(invalid(format!("unexpected trajectory header {line:?}")));
                }
                continue;
            }
            let x = table::parse_floats(&line, 7).map_err(|e| invalid(format!("line {}: {e}", n + 1)))?;
            let (a1, a2, b) = (Complex64::new(x[1], x[2]), Complex64::new(x[3], x[4]), Complex64::new(x[5], x[6]));
            t.times.push(x[0]);
            t.alpha[0].push(a1);
            t.alpha[1].push(a2);
            t.output.push(b);
            t.input.push((b + I * (a1 * v[0] + a2 * v[1])).re);
        }
        Ok(t)
    }
}

/// `β_out = β_in − i(√κ₁α₁ + √κ₂α₂)` on the trajectory grid.
pub fn output_field(traj: &Trajectory, setup: &MeasurementSetup) -> Vec<Complex64> {
    let v = setup.coupling_vector();
    (0..traj.len())
        .map(|k| Complex64::from(traj.input[k]) - I * (traj.alpha[0][k] * v[0] + traj.alpha[1][k] * v[1]))
        .collect()
}

struct Samples {
    times: Vec<f64>,
    alpha: [Vec<Complex64>; 2],
}

fn integrate(setup: &MeasurementSetup, hamming_weight: u8, steps: usize, dt: f64, stride: usize) -> Samples {
    let a = setup.generator(hamming_weight);
    let v = setup.coupling_vector();
    let pulse = setup.pulse;
    let rhs = |t: f64, y: [Complex64; 2]| -> [Complex64; 2] {
        let drive = -I * pulse.envelope(t);
        [
            a[0][0] * y[0] + a[0][1] * y[1] + drive * v[0],
            a[1][0] * y[0] + a[1][1] * y[1] + drive * v[1],
        ]
    };
    let axpy = |y: [Complex64; 2], h: f64, k: [Complex64; 2]| [y[0] + k[0] * h, y[1] + k[1] * h];

    let samples = steps / stride + 1;
    let mut out = Samples { times: Vec::with_capacity(samples), alpha: [Vec::with_capacity(samples), Vec::with_capacity(samples)] };
    let mut y = [Complex64::new(0.0, 0.0); 2];
    out.times.push(0.0);
    out.alpha[0].push(y[0]);
    out.alpha[1].push(y[1]);
    for n in 0..steps {
        let t = n as f64 * dt;
        let k1 = rhs(t, y);
        let k2 = rhs(t + dt / 2.0, axpy(y, dt / 2.0, k1));
        let k3 = rhs(t + dt / 2.0, axpy(y, dt / 2.0, k2));
        let k4 = rhs(t + dt, axpy(y, dt, k3));
        for i in 0..2 {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
        if (n + 1) % stride == 0 {
            out.times.push((n + 1) as f64 * dt);
            out.alpha[0].push(y[0]);
            out.alpha[1].push(y[1]);
        }
    }
    out
}

/// Integrates the Hamming-weight-conditioned cavity equations from vacuum up
/// to `t_final`, storing every `stride`-th step.
///
/// The step is shrunk so that `t_final` is an exact multiple of
/// `dt·stride`.
pub fn evolve(setup: &MeasurementSetup, hamming_weight: u8, t_final: f64, opts: EvolveOptions) -> Result<Trajectory> {
    setup.validate()?;
    MeasurementSetup::check_weight(hamming_weight)?;
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(invalid(format!("final time must be positive, got {t_final}")));
    }
    if !(opts.dt > 0.0) || opts.stride == 0 {
        return Err(invalid("time step and stride must be positive"));
    }
    let blocks = (t_final / (opts.dt * opts.stride as f64) - 1e-9).ceil().max(1.0) as usize;
    let steps = blocks * opts.stride;
    let dt = t_final / steps as f64;
    let rate = setup.rate_scale(hamming_weight);
    if dt * rate > STEP_LIMIT {
        return Err(Error::StepTooLarge(format!(
            "dt = {dt:e} exceeds {STEP_LIMIT} / {rate:e} for Hamming weight {hamming_weight}"
        )));
    }

    let coarse = integrate(setup, hamming_weight, steps, dt, opts.stride);
    if opts.probe {
        let fine = integrate(setup, hamming_weight, 2 * steps, dt / 2.0, 2 * opts.stride);
        let mut peak = 0.0f64;
        let mut diff = 0.0f64;
        for i in 0..2 {
            for (c, f) in coarse.alpha[i].iter().zip(&fine.alpha[i]) {
                peak = peak.max(c.norm());
                diff = diff.max((c - f).norm());
            }
        }
        if diff > PROBE_TOLERANCE * peak {
            return Err(Error::StepTooLarge(format!(
                "halving dt changed amplitudes by {:e} relative",
                diff / peak
            )));
        }
    }

    let input: Vec<f64> = coarse.times.iter().map(|&t| setup.pulse.envelope(t)).collect();
    let mut traj = Trajectory { hamming_weight, times: coarse.times, alpha: coarse.alpha, input, output: Vec::new() };
    traj.output = output_field(&traj, setup);
    Ok(traj)
}
