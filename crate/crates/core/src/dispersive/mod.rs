//! Effective dispersive models for transmon and TCQ readout registers.

mod line;
mod model;
mod parity;
mod purcell;
mod tcq;
mod transmon;

pub use line::{capacitance_inverse, capacitance_matrix, coupling_at_position, CapacitanceInverse, LinePlacement};
pub use model::{DispersiveModel, Provenance, ValidityWarning};
pub use parity::{parity_detunings, ParityDetunings};
pub use purcell::{purcell_time, PurcellTime};
pub use tcq::{
    bare_couplings_for, effective_couplings, solve_couplings_for_chi, tcq_dispersive, tcq_mixing,
    tcq_state_shifts, zero_switch_couplings, AnharmonicityConvention, Branch,
    BranchAssignment, CouplingConvention, DressedTcq, PlusMinus, StateResolvedShifts, TcqSpec,
};
pub use transmon::{
    duffing_dispersive, transmon_dispersive, transmon_levels, DuffingLevels, QubitCavityCoupling,
    TransmonSpec,
};

/// Ratio above which dispersive-regime warnings are attached.
pub const DISPERSIVE_RATIO_LIMIT: f64 = 0.3;
/// E_J/E_C below which a transmon is flagged as charge sensitive.
pub const CHARGE_INSENSITIVE_RATIO: f64 = 20.0;
/// Denominators within this fraction of |δ| of zero are treated as resonant.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

pub(crate) fn check_denominator(context: &'static str, value: f64, scale: f64) -> crate::Result<f64> {
    let tolerance = DEGENERACY_TOLERANCE * scale.abs();
    if !value.is_finite() || value.abs() <= tolerance {
        return Err(crate::Error::DegenerateDenominator { context, value, tolerance });
    }
    Ok(value)
}
