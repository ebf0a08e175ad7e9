use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::eigen::Spectrum;
use crate::dispersive::{tcq_mixing, AnharmonicityConvention, PlusMinus, TcqSpec};
use crate::error::{invalid, Error, Result};

/// Dressed parameters of the coupled-Duffing TCQ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedParameters {
    pub frequency: PlusMinus,
    pub anharmonicity: PlusMinus,
    pub cross_anharmonicity: f64,
}

impl DressedParameters {
    fn values(&self) -> [f64; 5] {
        [
            self.frequency.plus,
            self.frequency.minus,
            self.anharmonicity.plus,
            self.anharmonicity.minus,
            self.cross_anharmonicity,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DressedCheck {
    pub exact: DressedParameters,
    pub perturbative: DressedParameters,
    /// `|exact − perturbative|/|exact|` per parameter, in the order
    /// ω̃₊, ω̃₋, δ̃₊, δ̃₋, δ̃_c; absolute when the exact value is zero.
    pub relative_error: [f64; 5],
}

impl DressedCheck {
    pub fn max_relative_error(&self) -> f64 {
        self.relative_error.iter().copied().fold(0.0, f64::max)
    }
}

/// Truncated two-mode Fock space with `cutoff` excitations per mode.
struct TwoModes {
    cutoff: usize,
}

impl TwoModes {
    fn dim(&self) -> usize {
        (self.cutoff + 1) * (self.cutoff + 1)
    }

    fn index(&self, plus: usize, minus: usize) -> usize {
        plus * (self.cutoff + 1) + minus
    }

    fn hamiltonian(&self, spec: &TcqSpec) -> DMatrix<f64> {
        let (w, d) = (spec.frequency, spec.anharmonicity);
        let mut h = DMatrix::zeros(self.dim(), self.dim());
        for p in 0..=self.cutoff {
            for m in 0..=self.cutoff {
                let i = self.index(p, m);
                let (pf, mf) = (p as f64, m as f64);
                h[(i, i)] = w.plus * pf + w.minus * mf + d.plus / 2.0 * pf * (pf - 1.0) + d.minus / 2.0 * mf * (mf - 1.0);
                // J b₊†b₋ : |p, m⟩ → √((p+1)m) |p+1, m−1⟩
                if p < self.cutoff && m > 0 {
                    let j = self.index(p + 1, m - 1);
                    let v = spec.coupling * ((pf + 1.0) * mf).sqrt();
                    h[(j, i)] = v;
                    h[(i, j)] = v;
                }
            }
        }
        h
    }

    /// Applies `c₊ b₊† + c₋ b₋†` to a state vector.
    fn create(&self, state: &DVector<f64>, c_plus: f64, c_minus: f64) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim());
        for p in 0..=self.cutoff {
            for m in 0..=self.cutoff {
                let amp = state[self.index(p, m)];
                if amp == 0.0 {
                    continue;
                }
                if p < self.cutoff {
                    out[self.index(p + 1, m)] += c_plus * ((p + 1) as f64).sqrt() * amp;
                }
                if m < self.cutoff {
                    out[self.index(p, m + 1)] += c_minus * ((m + 1) as f64).sqrt() * amp;
                }
            }
        }
        out
    }

    /// Normalized `(d₊†)^p (d₋†)^m |0⟩` for the dressed modes
    /// `d₊ = cos λ b₊ − sin λ b₋`, `d₋ = sin λ b₊ + cos λ b₋`.
    fn dressed_state(&self, plus: usize, minus: usize, lambda: f64) -> DVector<f64> {
        let (c, s) = (lambda.cos(), lambda.sin());
        let mut v = DVector::zeros(self.dim());
        v[0] = 1.0;
        for _ in 0..plus {
            v = self.create(&v, c, -s);
        }
        for _ in 0..minus {
            v = self.create(&v, s, c);
        }
        let n = v.norm();
        v / n
    }
}

/// Diagonalizes the truncated coupled-Duffing Hamiltonian and extracts the
/// dressed parameters from level differences.
pub fn dressed_tcq_check(spec: &TcqSpec, cutoff: usize, convention: AnharmonicityConvention) -> Result<DressedCheck> {
    if cutoff < 6 {
        return Err(invalid(format!("Fock cutoff {cutoff} below 6")));
    }
    let dressed = tcq_mixing(spec, convention)?;
    let modes = TwoModes { cutoff };
    let spectrum = Spectrum::of(modes.hamiltonian(spec));

    let energy = |plus: usize, minus: usize| -> Result<f64> {
        let reference = modes.dressed_state(plus, minus, dressed.mixing_angle);
        let (k, overlap) = spectrum.best_match(&reference);
        if overlap < 0.5 {
            return Err(Error::LevelIdentificationFailure { label: format!("|{plus}+ {minus}-⟩"), overlap });
        }
        Ok(spectrum.values[k])
    };
    let e00 = energy(0, 0)?;
    let e10 = energy(1, 0)?;
    let e01 = energy(0, 1)?;
    let e20 = energy(2, 0)?;
    let e02 = energy(0, 2)?;
    let e11 = energy(1, 1)?;

    let exact = DressedParameters {
        frequency: PlusMinus::new(e10 - e00, e01 - e00),
        anharmonicity: PlusMinus::new(e20 - 2.0 * e10 + e00, e02 - 2.0 * e01 + e00),
        cross_anharmonicity: e11 - e10 - e01 + e00,
    };
    let perturbative = DressedParameters {
        frequency: dressed.frequency,
        anharmonicity: dressed.anharmonicity,
        cross_anharmonicity: dressed.cross_anharmonicity,
    };
    let (x, p) = (exact.values(), perturbative.values());
    let relative_error = std::array::from_fn(|k| {
        let diff = (x[k] - p[k]).abs();
        if x[k] == 0.0 {
            diff
        } else {
            diff / x[k].abs()
        }
    });
    Ok(DressedCheck { exact, perturbative, relative_error })
}
