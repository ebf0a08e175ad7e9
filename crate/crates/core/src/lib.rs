//! Dispersive parity readout of a three-qubit register through two coupled
//! resonators: effective dispersive models for transmons and tunable-coupling
//! qubits, exact-diagonalization oracles, driven cavity dynamics and Bayesian
//! information gain of the homodyne record.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersive;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod inference;
pub mod oracle;
pub mod quadrature;
pub mod table;
pub mod units;

pub use error::{Error, ErrorClass, Result};
pub use exec::Execution;
