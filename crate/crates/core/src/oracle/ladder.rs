use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::eigen::Spectrum;
use crate::dispersive::{
    duffing_dispersive, tcq_dispersive, tcq_state_shifts, DispersiveModel, DressedTcq, DuffingLevels,
    QubitCavityCoupling,
};
use crate::error::{invalid, Error, Result};

/// Qubit side of the ladder Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LadderQubit {
    /// Duffing oscillator truncated to `levels` states, coupled with `gᵢ(aᵢb† + h.c.)`.
    Duffing { levels: DuffingLevels, count: usize, g: [f64; 2] },
    /// The six lowest dressed TCQ levels with couplings `g̃_{i±}`.
    Tcq { dressed: DressedTcq },
}

/// Qubit ⊗ two truncated resonators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    pub qubit: LadderQubit,
    pub resonator_frequencies: [f64; 2],
    pub photon_cutoff: usize,
}

struct Transition {
    from: usize,
    to: usize,
    amplitude: [f64; 2],
}

struct QubitLevels {
    energies: Vec<f64>,
    transitions: Vec<Transition>,
}

const TCQ_LEVELS: [(usize, usize); 6] = [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)];

impl LadderQubit {
    fn levels(&self) -> QubitLevels {
        match *self {
            LadderQubit::Duffing { levels, count, g } => {
                let energies = (0..count)
                    .map(|m| {
                        let m = m as f64;
                        m * levels.frequency + levels.anharmonicity * m * (m - 1.0) / 2.0
                    })
                    .collect();
                let transitions = (1..count)
                    .map(|m| {
                        let s = (m as f64).sqrt();
                        Transition { from: m - 1, to: m, amplitude: [g[0] * s, g[1] * s] }
                    })
                    .collect();
                QubitLevels { energies, transitions }
            }
            LadderQubit::Tcq { dressed } => {
                let (w, d, dc) = (dressed.frequency, dressed.anharmonicity, dressed.cross_anharmonicity);
                let energies = TCQ_LEVELS
                    .iter()
                    .map(|&(p, m)| {
                        let (p, m) = (p as f64, m as f64);
                        p * w.plus + m * w.minus + d.plus * p * (p - 1.0) / 2.0 + d.minus * m * (m - 1.0) / 2.0 + dc * p * m
                    })
                    .collect();
                let position = |p: usize, m: usize| TCQ_LEVELS.iter().position(|&l| l == (p, m));
                let mut transitions = Vec::new();
                for (from, &(p, m)) in TCQ_LEVELS.iter().enumerate() {
                    if let Some(to) = position(p + 1, m) {
                        let s = ((p + 1) as f64).sqrt();
                        transitions.push(Transition { from, to, amplitude: dressed.g.map(|g| g.plus * s) });
                    }
                    if let Some(to) = position(p, m + 1) {
                        let s = ((m + 1) as f64).sqrt();
                        transitions.push(Transition { from, to, amplitude: dressed.g.map(|g| g.minus * s) });
                    }
                }
                QubitLevels { energies, transitions }
            }
        }
    }

    /// Perturbative model for the same parameters.
    fn perturbative(&self, resonator_frequencies: [f64; 2]) -> Result<DispersiveModel> {
        match *self {
            LadderQubit::Duffing { levels, g, .. } => {
                let detuning = resonator_frequencies.map(|w| levels.frequency - w);
                duffing_dispersive(levels, &QubitCavityCoupling { g, detuning })
            }
            LadderQubit::Tcq { dressed } => Ok(tcq_dispersive(&tcq_state_shifts(&dressed, resonator_frequencies)?)),
        }
    }
}

impl LadderConfig {
    pub fn validate(&self) -> Result<()> {
        if let LadderQubit::Duffing { count, .. } = self.qubit {
            if count < 3 {
                return Err(invalid(format!("qubit cutoff {count} below 3 levels")));
            }
        }
        if self.photon_cutoff < 2 {
            return Err(invalid(format!("photon cutoff {} below 2", self.photon_cutoff)));
        }
        Ok(())
    }

    fn with_second_frequency(&self, omega: f64) -> Self {
        Self { resonator_frequencies: [self.resonator_frequencies[0], omega], ..*self }
    }
}

struct Ladder {
    qubit_dim: usize,
    photons: usize,
}

impl Ladder {
    fn dim(&self) -> usize {
        self.qubit_dim * (self.photons + 1) * (self.photons + 1)
    }

    fn index(&self, q: usize, n1: usize, n2: usize) -> usize {
        (q * (self.photons + 1) + n1) * (self.photons + 1) + n2
    }

    fn hamiltonian(&self, levels: &QubitLevels, omega: [f64; 2]) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.dim(), self.dim());
        let p = self.photons;
        for q in 0..self.qubit_dim {
            for n1 in 0..=p {
                for n2 in 0..=p {
                    let i = self.index(q, n1, n2);
                    h[(i, i)] = levels.energies[q] + n1 as f64 * omega[0] + n2 as f64 * omega[1];
                }
            }
        }
        // aᵢ σ_{to,from}: absorbs a photon of resonator i while raising the qubit.
        for t in &levels.transitions {
            for n1 in 0..=p {
                for n2 in 0..=p {
                    let src = self.index(t.from, n1, n2);
                    if n1 > 0 {
                        let dst = self.index(t.to, n1 - 1, n2);
                        let v = t.amplitude[0] * (n1 as f64).sqrt();
                        h[(dst, src)] += v;
                        h[(src, dst)] += v;
                    }
                    if n2 > 0 {
                        let dst = self.index(t.to, n1, n2 - 1);
                        let v = t.amplitude[1] * (n2 as f64).sqrt();
                        h[(dst, src)] += v;
                        h[(src, dst)] += v;
                    }
                }
            }
        }
        h
    }

    fn basis(&self, q: usize, n1: usize, n2: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        v[self.index(q, n1, n2)] = 1.0;
        v
    }
}

fn energy_of(spectrum: &Spectrum, ladder: &Ladder, q: usize, n1: usize, n2: usize) -> Result<f64> {
    let (k, overlap) = spectrum.best_match(&ladder.basis(q, n1, n2));
    if overlap < 0.5 {
        return Err(Error::LevelIdentificationFailure { label: format!("|q{q}, {n1}, {n2}⟩"), overlap });
    }
    Ok(spectrum.values[k])
}

fn build(cfg: &LadderConfig) -> Result<(QubitLevels, Ladder)> {
    cfg.validate()?;
    let levels = cfg.qubit.levels();
    let ladder = Ladder { qubit_dim: levels.energies.len(), photons: cfg.photon_cutoff };
    Ok((levels, ladder))
}

/// Dispersive shifts read off exact spectra next to their perturbative values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiComparison {
    pub oracle: [f64; 2],
    pub perturbative: [f64; 2],
    pub relative_error: [f64; 2],
    /// `χ₁₂` and `χ̄₁₂` from the off-diagonal of the effective single-photon block.
    pub oracle_switch: f64,
    pub oracle_static: f64,
}

/// Effective Hamiltonian of the bare states `bare` (indices into the ladder
/// basis): the eigenvectors with the largest weight in that subspace are
/// projected onto it, symmetrically orthonormalized and recombined with their
/// exact energies.
fn effective_block(spectrum: &Spectrum, bare: &[usize], label: &str) -> Result<DMatrix<f64>> {
    let k = bare.len();
    let mut weights: Vec<(f64, usize)> = (0..spectrum.values.len())
        .map(|j| (bare.iter().map(|&b| spectrum.vectors[(b, j)].powi(2)).sum::<f64>(), j))
        .collect();
    weights.sort_by(|x, y| y.0.total_cmp(&x.0));
    if weights[k - 1].0 < 0.5 {
        return Err(Error::LevelIdentificationFailure { label: label.to_string(), overlap: weights[k - 1].0 });
    }
    let chosen: Vec<usize> = weights[..k].iter().map(|w| w.1).collect();
    let x = DMatrix::from_fn(k, k, |a, j| spectrum.vectors[(bare[a], chosen[j])]);
    let gram = SymmetricEigen::new(x.transpose() * &x);
    let inv_sqrt = &gram.eigenvectors
        * DMatrix::from_diagonal(&gram.eigenvalues.map(|v| 1.0 / v.sqrt()))
        * gram.eigenvectors.transpose();
    let orth = x * inv_sqrt;
    let energies = DMatrix::from_diagonal(&DVector::from_iterator(k, chosen.iter().map(|&j| spectrum.values[j])));
    let h = &orth * energies * orth.transpose();
    Ok((&h + h.transpose()) / 2.0)
}

/// Shifts from the effective single-photon block of the exact spectrum, for
/// the qubit in its two lowest states: `χᵢ` is half the change of the
/// diagonal entry `H_ii − E(q, 0, 0)`, `χ₁₂` and `χ̄₁₂` half the difference
/// and the mean of the off-diagonal entry.
pub fn chi_oracle(cfg: &LadderConfig) -> Result<ChiComparison> {
    let (levels, ladder) = build(cfg)?;
    let spectrum = Spectrum::of(ladder.hamiltonian(&levels, cfg.resonator_frequencies));
    let mut blocks = Vec::with_capacity(2);
    for q in 0..2 {
        let vacuum = energy_of(&spectrum, &ladder, q, 0, 0)?;
        let bare = [ladder.index(q, 1, 0), ladder.index(q, 0, 1)];
        let h = effective_block(&spectrum, &bare, &format!("single-photon block of q{q}"))?;
        blocks.push((h[(0, 0)] - vacuum, h[(1, 1)] - vacuum, h[(0, 1)]));
    }
    let (g, e) = (blocks[0], blocks[1]);
    let oracle = [(e.0 - g.0) / 2.0, (e.1 - g.1) / 2.0];
    let model = cfg.qubit.perturbative(cfg.resonator_frequencies)?;
    let perturbative = model.chi;
    let relative_error = std::array::from_fn(|i| {
        let diff = (oracle[i] - perturbative[i]).abs();
        if perturbative[i] == 0.0 {
            diff
        } else {
            diff / perturbative[i].abs()
        }
    });
    Ok(ChiComparison {
        oracle,
        perturbative,
        relative_error,
        oracle_switch: (e.2 - g.2) / 2.0,
        oracle_static: (e.2 + g.2) / 2.0,
    })
}

/// Minimal single-photon splittings at the resonator crossing, per qubit state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchComparison {
    /// Half the minimal splitting with the qubit in ground and excited state.
    pub oracle_half_splitting: [f64; 2],
    /// `|χ̄₁₂ − χ₁₂|` and `|χ̄₁₂ + χ₁₂|` at `ω₂ = ω₁`.
    pub perturbative_half_splitting: [f64; 2],
    /// `|h_e − h_g|/2`, the qubit-dependent part of the oracle splitting.
    pub state_dependent: f64,
    /// Second resonator frequency at which each minimum occurs.
    pub crossing: [f64; 2],
}

fn single_photon_splitting(cfg: &LadderConfig, q: usize) -> Result<f64> {
    let (levels, ladder) = build(cfg)?;
    let spectrum = Spectrum::of(ladder.hamiltonian(&levels, cfg.resonator_frequencies));
    let (a, b) = (ladder.index(q, 1, 0), ladder.index(q, 0, 1));
    let mut weights: Vec<(f64, usize)> = (0..spectrum.values.len())
        .map(|k| (spectrum.vectors[(a, k)].powi(2) + spectrum.vectors[(b, k)].powi(2), k))
        .collect();
    weights.sort_by(|x, y| y.0.total_cmp(&x.0));
    if weights[1].0 < 0.5 {
        return Err(Error::LevelIdentificationFailure {
            label: format!("single-photon doublet of q{q}"),
            overlap: weights[1].0,
        });
    }
    Ok((spectrum.values[weights[0].1] - spectrum.values[weights[1].1]).abs())
}

/// Scans the second resonator across the first and records the minimal
/// single-photon splitting for the qubit in ground and in excited state.
pub fn switch_oracle(cfg: &LadderConfig) -> Result<SwitchComparison> {
    cfg.validate()?;
    let w1 = cfg.resonator_frequencies[0];
    let level_data = cfg.qubit.levels();
    // Second-order shifts are bounded by Σ c²/|Δ| over the qubit transitions.
    let reach: f64 = level_data
        .transitions
        .iter()
        .map(|t| {
            let gap = (level_data.energies[t.to] - level_data.energies[t.from] - w1).abs();
            (t.amplitude[0].powi(2) + t.amplitude[1].powi(2)) / gap
        })
        .sum();
    let half_width = 4.0 * reach + 1e-9 * w1.abs();
    let perturbative = cfg.qubit.perturbative([w1, w1])?;

    let mut half = [0.0; 2];
    let mut crossing = [0.0; 2];
    for q in 0..2 {
        let f = |w2: f64| single_photon_splitting(&cfg.with_second_frequency(w2), q);
        let (w, split) = golden_minimum(f, w1 - half_width, w1 + half_width, 1e-13 * w1.abs().max(1.0))?;
        half[q] = split / 2.0;
        crossing[q] = w;
    }
    Ok(SwitchComparison {
        oracle_half_splitting: half,
        perturbative_half_splitting: [
            (perturbative.static_coupling - perturbative.switch).abs(),
            (perturbative.static_coupling + perturbative.switch).abs(),
        ],
        state_dependent: (half[1] - half[0]).abs() / 2.0,
        crossing,
    })
}

fn golden_minimum<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tolerance: f64) -> Result<(f64, f64)> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..200 {
        if (b - a).abs() < tolerance {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersive::{tcq_mixing, zero_switch_couplings, AnharmonicityConvention, BranchAssignment, PlusMinus, TcqSpec};
    use crate::oracle::eigen::max_asymmetry;

    fn transmon(g: [f64; 2]) -> LadderConfig {
        LadderConfig {
            qubit: LadderQubit::Duffing { levels: DuffingLevels { frequency: 6.0, anharmonicity: -0.3 }, count: 3, g },
            resonator_frequencies: [7.0, 7.3],
            photon_cutoff: 2,
        }
    }

    #[test]
    fn matrices_are_symmetric() {
        let cfg = transmon([0.05, 0.04]);
        let (levels, ladder) = build(&cfg).unwrap();
        assert_eq!(max_asymmetry(&ladder.hamiltonian(&levels, cfg.resonator_frequencies)), 0.0);
    }

    #[test]
    fn uncoupled_qubit_has_no_shift() {
        let c = chi_oracle(&transmon([0.0, 0.0])).unwrap();
        assert!(c.oracle.iter().all(|v| v.abs() < 1e-12));
        assert_eq!(c.perturbative, [0.0, 0.0]);
    }

    #[test]
    fn weak_coupling_matches_perturbation_theory() {
        let c = chi_oracle(&transmon([0.05, 0.05])).unwrap();
        for i in 0..2 {
            assert!(c.relative_error[i] < 0.05, "{c:?}");
            assert!(c.oracle[i] * c.perturbative[i] > 0.0);
        }
    }

    #[test]
    fn cutoffs_are_checked() {
        let mut cfg = transmon([0.05, 0.05]);
        cfg.photon_cutoff = 1;
        assert!(chi_oracle(&cfg).is_err());
    }

    #[test]
    fn zero_switch_tcq_has_no_state_dependent_splitting() {
        let spec = TcqSpec {
            frequency: PlusMinus::new(6.0, 6.0),
            anharmonicity: PlusMinus::new(-0.3, -0.3),
            coupling: -0.4,
            g: [PlusMinus::default(); 2],
        };
        let dressed = tcq_mixing(&spec, AnharmonicityConvention::Rotated)
            .unwrap()
            .with_couplings(zero_switch_couplings([0.03, 0.03], BranchAssignment::MinusOnFirst));
        let cfg = LadderConfig { qubit: LadderQubit::Tcq { dressed }, resonator_frequencies: [7.5, 7.5], photon_cutoff: 2 };
        let s = switch_oracle(&cfg).unwrap();
        let chi = chi_oracle(&LadderConfig { resonator_frequencies: [7.5, 7.6], ..cfg }).unwrap();
        assert!(s.state_dependent < 1e-2 * chi.oracle[0].abs(), "{s:?}");
        assert_eq!(s.perturbative_half_splitting, [0.0, 0.0]);
    }
}
