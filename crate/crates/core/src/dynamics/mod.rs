//! Driven two-resonator dynamics conditioned on the register's Hamming weight.
//!
//! Convention: in the drive frame
//! `dα₁/dt = −i(Δ_{d1} + sχ₁)α₁ − i sχ₁₂ α₂ − κ₁/2 α₁ − √(κ₁κ₂)/2 α₂ − i√κ₁ β_in`
//! (and 1 ↔ 2) with `s = 3 − 2h_w`, and `β_out = β_in − i(√κ₁α₁ + √κ₂α₂)`.

mod evolve;
mod pulse;
mod response;
mod setup;

pub use evolve::{evolve, output_field, EvolveOptions, Trajectory};
pub use pulse::DrivePulse;
pub use response::{reflection, slowest_decay_rate, steady_state};
pub use setup::{hamming_prefactor, MeasurementSetup, HAMMING_WEIGHTS};
