use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, SQRT_2};

use serde::{Deserialize, Serialize};

use super::model::{DispersiveModel, Provenance, ValidityWarning};
use super::{check_denominator, DISPERSIVE_RATIO_LIMIT};
use crate::error::{invalid, Error, Result};

/// A quantity attached to the `+` and `−` modes of a TCQ.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PlusMinus {
    pub plus: f64,
    pub minus: f64,
}

impl PlusMinus {
    pub const fn new(plus: f64, minus: f64) -> Self {
        Self { plus, minus }
    }

    pub fn get(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.plus * self.plus + self.minus * self.minus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

/// Two coupled Duffing oscillators with linear couplings to two resonators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcqSpec {
    pub frequency: PlusMinus,
    pub anharmonicity: PlusMinus,
    /// Transverse coupling J.
    pub coupling: f64,
    /// Bare couplings `g_{i±}` for resonators 1 and 2.
    pub g: [PlusMinus; 2],
}

impl TcqSpec {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.frequency.plus,
            self.frequency.minus,
            self.anharmonicity.plus,
            self.anharmonicity.minus,
            self.coupling,
            self.g[0].plus,
            self.g[0].minus,
            self.g[1].plus,
            self.g[1].minus,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("TCQ parameters must be finite"));
        }
        if self.anharmonicity.plus > 0.0 || self.anharmonicity.minus > 0.0 {
            return Err(invalid("TCQ anharmonicities must be non-positive"));
        }
        Ok(())
    }
}

/// Rule used for the dressed couplings at general mixing angle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingConvention {
    /// `g̃₊ = g₊cosλ − g₋sinλ`, `g̃₋ = g₊sinλ + g₋cosλ` (follows from the mode rotation).
    #[default]
    Unitary,
    /// `g̃± = g₊cosλ ∓ g₋sinλ`; agrees with `Unitary` only at λ = ±π/4 up to sign.
    Compact,
}

/// Rule used for the dressed self-anharmonicities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnharmonicityConvention {
    /// `δ̃± = (δ₊+δ₋)(1+cos²2λ)/4 ± (δ₊−δ₋)cos2λ/2`, the quartic term carried through the rotation.
    #[default]
    Rotated,
    /// `δ̃± = (δ₊+δ₋)(1+cos²2λ)/2 ± (δ₊−δ₋)cos2λ/2`, twice the rotated symmetric part.
    Printed,
}

/// TCQ after the mode rotation that removes the transverse coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedTcq {
    pub mixing_angle: f64,
    pub zeta: f64,
    pub frequency: PlusMinus,
    pub anharmonicity: PlusMinus,
    pub cross_anharmonicity: f64,
    /// Dressed couplings `g̃_{i±}`; zero until [`effective_couplings`] fills them.
    pub g: [PlusMinus; 2],
}

impl DressedTcq {
    /// `Δ̃_{i±} = ω̃_± − ωᵢ`.
    pub fn detuning(&self, resonator_frequency: f64, branch: Branch) -> f64 {
        self.frequency.get(branch) - resonator_frequency
    }

    pub fn with_couplings(mut self, g: [PlusMinus; 2]) -> Self {
        self.g = g;
        self
    }

    /// `|δ/(ω̃₊ − ω̃₋)|` using the larger bare-like dressed anharmonicity.
    pub fn splitting_ratio(&self) -> f64 {
        let delta = self.anharmonicity.plus.abs().max(self.anharmonicity.minus.abs());
        delta / (self.frequency.plus - self.frequency.minus).abs()
    }

    fn anharmonicity_scale(&self) -> f64 {
        self.anharmonicity
            .plus
            .abs()
            .max(self.anharmonicity.minus.abs())
            .max(self.cross_anharmonicity.abs())
    }
}

/// `(cos λ, sin λ)` with the λ = ±π/4 case made exact.
pub(crate) fn rotation(lambda: f64) -> (f64, f64) {
    if lambda == FRAC_PI_4 {
        (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
    } else if lambda == -FRAC_PI_4 {
        (FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
    } else {
        (lambda.cos(), lambda.sin())
    }
}

fn double_angle(lambda: f64) -> (f64, f64) {
    if lambda.abs() == FRAC_PI_4 {
        (0.0, lambda.signum())
    } else {
        ((2.0 * lambda).cos(), (2.0 * lambda).sin())
    }
}

/// Mixing angle and dressed frequencies/anharmonicities. Couplings are left at zero.
pub fn tcq_mixing(spec: &TcqSpec, convention: AnharmonicityConvention) -> Result<DressedTcq> {
    spec.validate()?;
    let (w, d, j) = (spec.frequency, spec.anharmonicity, spec.coupling);
    let zeta = w.plus - w.minus - 2.0 * (d.plus - d.minus);
    let mixing_angle = if zeta == 0.0 {
        if j == 0.0 {
            0.0
        } else {
            -j.signum() * FRAC_PI_4
        }
    } else {
        0.5 * (-2.0 * j / zeta).atan()
    };
    let (cos2, sin2) = double_angle(mixing_angle);
    // ω̃± = (ω₊+ω₋)/2 ± (ω₊−ω₋)cos2λ/2 ∓ J sin2λ, written around ω± so λ = 0 is exact.
    let transfer = (w.plus - w.minus) * (1.0 - cos2) / 2.0 + j * sin2;
    let frequency = PlusMinus::new(w.plus - transfer, w.minus + transfer);

    let sum = d.plus + d.minus;
    let symmetric = match convention {
        AnharmonicityConvention::Rotated => sum * (1.0 + cos2 * cos2) / 4.0,
        AnharmonicityConvention::Printed => sum * (1.0 + cos2 * cos2) / 2.0,
    };
    let asymmetric = (d.plus - d.minus) * cos2 / 2.0;
    let anharmonicity = PlusMinus::new(symmetric + asymmetric, symmetric - asymmetric);
    let cross_anharmonicity = sum * sin2 * sin2 / 2.0;

    Ok(DressedTcq {
        mixing_angle,
        zeta,
        frequency,
        anharmonicity,
        cross_anharmonicity,
        g: [PlusMinus::default(); 2],
    })
}

/// Rotates the bare couplings into the dressed basis.
pub fn effective_couplings(spec: &TcqSpec, dressed: &DressedTcq, convention: CouplingConvention) -> DressedTcq {
    let (c, s) = rotation(dressed.mixing_angle);
    let g = spec.g.map(|g| match convention {
        CouplingConvention::Unitary => PlusMinus::new(g.plus * c - g.minus * s, g.plus * s + g.minus * c),
        CouplingConvention::Compact => PlusMinus::new(g.plus * c - g.minus * s, g.plus * c + g.minus * s),
    });
    dressed.with_couplings(g)
}

/// Bare couplings that produce the requested dressed couplings at mixing angle λ.
pub fn bare_couplings_for(dressed: [PlusMinus; 2], mixing_angle: f64) -> [PlusMinus; 2] {
    let (c, s) = rotation(mixing_angle);
    dressed.map(|g| PlusMinus::new(c * g.plus + s * g.minus, -s * g.plus + c * g.minus))
}

/// Which resonator couples to the `−` (qubit) transitions in a zero-switch configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchAssignment {
    /// Resonator 1 on `−`, resonator 2 on `+`.
    #[default]
    MinusOnFirst,
    /// Resonator 1 on `+`, resonator 2 on `−`.
    PlusOnFirst,
}

impl BranchAssignment {
    pub fn branch_of(self, resonator: usize) -> Branch {
        match (self, resonator) {
            (BranchAssignment::MinusOnFirst, 0) | (BranchAssignment::PlusOnFirst, 1) => Branch::Minus,
            _ => Branch::Plus,
        }
    }
}

/// Dressed couplings `g̃ = √2 gᵢ` on each resonator's assigned branch and zero on the other.
pub fn zero_switch_couplings(g: [f64; 2], assignment: BranchAssignment) -> [PlusMinus; 2] {
    std::array::from_fn(|i| match assignment.branch_of(i) {
        Branch::Plus => PlusMinus::new(SQRT_2 * g[i], 0.0),
        Branch::Minus => PlusMinus::new(0.0, SQRT_2 * g[i]),
    })
}

/// Resonator shifts resolved by TCQ state; the qubit is `{|0₊0₋⟩, |0₊1₋⟩}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateResolvedShifts {
    /// `χ_{i,0₊1₋}`: resonator i pulls up by this much with the qubit excited.
    pub chi_excited: [f64; 2],
    /// `χ_{i,0₊0₋}`: resonator i pulls down by this much with the qubit in ground.
    pub chi_ground: [f64; 2],
    pub switch_excited: f64,
    pub switch_ground: f64,
    /// `Ω̃₋ = ω̃₋ + Σᵢ g̃²_{i−}/Δ̃_{i−}`.
    pub qubit_frequency: f64,
    pub resonator_frequencies: [f64; 2],
    pub warnings: Vec<ValidityWarning>,
}

pub fn tcq_state_shifts(dressed: &DressedTcq, resonator_frequencies: [f64; 2]) -> Result<StateResolvedShifts> {
    let scale = dressed.anharmonicity_scale();
    let dm = dressed.anharmonicity.minus;
    let dc = dressed.cross_anharmonicity;
    let mut lower = [PlusMinus::default(); 2];
    let mut upper = [PlusMinus::default(); 2];
    for i in 0..2 {
        let plus = dressed.detuning(resonator_frequencies[i], Branch::Plus);
        let minus = dressed.detuning(resonator_frequencies[i], Branch::Minus);
        lower[i] = PlusMinus::new(
            check_denominator("dressed detuning (+)", plus, scale)?,
            check_denominator("dressed detuning (-)", minus, scale)?,
        );
        upper[i] = PlusMinus::new(
            check_denominator("dressed detuning (+) plus cross anharmonicity", plus + dc, scale)?,
            check_denominator("dressed detuning (-) plus anharmonicity", minus + dm, scale)?,
        );
    }
    let g = dressed.g;

    let chi_excited: [f64; 2] = std::array::from_fn(|i| {
        let (gp, gm) = (g[i].plus, g[i].minus);
        gm * gm / lower[i].minus - 2.0 * gm * gm / upper[i].minus - gp * gp / upper[i].plus
    });
    let chi_ground: [f64; 2] = std::array::from_fn(|i| {
        let (gp, gm) = (g[i].plus, g[i].minus);
        gp * gp / lower[i].plus + gm * gm / lower[i].minus
    });

    let pp = g[0].plus * g[1].plus;
    let mm = g[0].minus * g[1].minus;
    let inv_sum = |a: f64, b: f64| 1.0 / a + 1.0 / b;
    let switch_excited = mm / 2.0 * inv_sum(lower[0].minus, lower[1].minus)
        - mm * inv_sum(upper[0].minus, upper[1].minus)
        - pp / 2.0 * inv_sum(upper[0].plus, upper[1].plus);
    let switch_ground =
        pp / 2.0 * inv_sum(lower[0].plus, lower[1].plus) + mm / 2.0 * inv_sum(lower[0].minus, lower[1].minus);

    let qubit_frequency = dressed.frequency.minus
        + g[0].minus * g[0].minus / lower[0].minus
        + g[1].minus * g[1].minus / lower[1].minus;

    let mut warnings = Vec::new();
    let ratio = dressed.splitting_ratio();
    if ratio >= DISPERSIVE_RATIO_LIMIT {
        warnings.push(ValidityWarning::WeakMixingSplitting { ratio });
    }
    for i in 0..2 {
        let direct = (g[i].plus / lower[i].plus).abs().max((g[i].minus / lower[i].minus).abs());
        if direct >= DISPERSIVE_RATIO_LIMIT {
            warnings.push(ValidityWarning::CouplingRatio { resonator: i + 1, ratio: direct });
        }
        let ladder = (SQRT_2 * g[i].minus / upper[i].minus)
            .abs()
            .max((g[i].plus / upper[i].plus).abs());
        if ladder >= DISPERSIVE_RATIO_LIMIT {
            warnings.push(ValidityWarning::LadderRatio { resonator: i + 1, ratio: ladder });
        }
    }

    Ok(StateResolvedShifts {
        chi_excited,
        chi_ground,
        switch_excited,
        switch_ground,
        qubit_frequency,
        resonator_frequencies,
        warnings,
    })
}

pub fn tcq_dispersive(shifts: &StateResolvedShifts) -> DispersiveModel {
    let chi = std::array::from_fn(|i| (shifts.chi_excited[i] + shifts.chi_ground[i]) / 2.0);
    let resonator_frequencies = std::array::from_fn(|i| {
        shifts.resonator_frequencies[i] + (shifts.chi_excited[i] - shifts.chi_ground[i]) / 2.0
    });
    DispersiveModel {
        qubit_frequency: shifts.qubit_frequency,
        resonator_frequencies,
        chi,
        static_coupling: (shifts.switch_excited - shifts.switch_ground) / 2.0,
        switch: (shifts.switch_excited + shifts.switch_ground) / 2.0,
        provenance: Provenance::Tcq,
        warnings: shifts.warnings.clone(),
    }
}

/// Bare coupling magnitudes `(g₁, g₂)` that realize the target shifts in a
/// zero-switch configuration, with `g̃ = √2 g` on each resonator's branch.
pub fn solve_couplings_for_chi(
    targets: [f64; 2],
    dressed: &DressedTcq,
    resonator_frequencies: [f64; 2],
    assignment: BranchAssignment,
) -> Result<[f64; 2]> {
    let scale = dressed.anharmonicity_scale();
    let mut g = [0.0; 2];
    for i in 0..2 {
        if targets[i] == 0.0 {
            continue;
        }
        let branch = assignment.branch_of(i);
        let detuning = dressed.detuning(resonator_frequencies[i], branch);
        // χ = w·g̃² with w the closed-form weight of the branch.
        let (weight, label) = match branch {
            Branch::Minus => {
                let dm = dressed.anharmonicity.minus;
                let shifted = check_denominator("dressed detuning (-) plus anharmonicity", detuning + dm, scale)?;
                (dm / (check_denominator("dressed detuning (-)", detuning, scale)? * shifted), "minus")
            }
            Branch::Plus => {
                let dc = dressed.cross_anharmonicity;
                let shifted =
                    check_denominator("dressed detuning (+) plus cross anharmonicity", detuning + dc, scale)?;
                (0.5 * dc / (check_denominator("dressed detuning (+)", detuning, scale)? * shifted), "plus")
            }
        };
        let g_squared = targets[i] / weight;
        if !(g_squared > 0.0 && g_squared.is_finite()) {
            return Err(Error::NegativeDiscriminant { branch: label, target: targets[i], g_squared });
        }
        g[i] = (g_squared / 2.0).sqrt();
    }
    Ok(g)
}
