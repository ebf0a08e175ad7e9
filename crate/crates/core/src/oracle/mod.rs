//! Exact-diagonalization references for the perturbative formulas.

mod charge;
mod duffing;
mod eigen;
mod ladder;

pub use charge::{
    charge_dispersion, decoupled_spectrum, tcq_charge_spectrum, transmon_charge_spectrum, ChargeBasisConfig,
    ChargeDispersion, ChargeSpectrum, MAX_CHARGE_CUTOFF,
};
pub use duffing::{dressed_tcq_check, DressedCheck, DressedParameters};
pub use eigen::Spectrum;
pub use ladder::{chi_oracle, switch_oracle, ChiComparison, LadderConfig, LadderQubit, SwitchComparison};
