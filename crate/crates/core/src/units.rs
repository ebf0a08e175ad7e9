//! Unit conversions. Everything inside the crate is an angular frequency
//! (rad/s) or a rate (1/s); configuration files quote ordinary frequencies
//! in MHz.

use std::f64::consts::TAU;

/// Elementary charge in coulomb.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Ordinary frequency in MHz to angular frequency in rad/s.
pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    TAU * f_mhz * 1e6
}

/// Angular frequency in rad/s to ordinary frequency in MHz.
pub fn angular_to_mhz(omega: f64) -> f64 {
    omega / (TAU * 1e6)
}
