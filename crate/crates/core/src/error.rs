use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate denominator in {context}: {value:e} is within tolerance {tolerance:e} of zero")]
    DegenerateDenominator {
        context: &'static str,
        value: f64,
        tolerance: f64,
    },

    #[error("parity condition unsatisfiable: chi1*chi2 - chi12^2 = {discriminant:e} <= 0")]
    ParityConditionUnsatisfiable { discriminant: f64 },

    #[error("target chi = {target:e} has the wrong sign for the {branch} branch (g^2 would be {g_squared:e})")]
    NegativeDiscriminant {
        branch: &'static str,
        target: f64,
        g_squared: f64,
    },

    #[error("capacitance matrix is singular: Sigma = {sigma:e}")]
    SingularCapacitanceMatrix { sigma: f64 },

    #[error("{what} did not converge: {detail}")]
    ConvergenceFailure { what: &'static str, detail: String },

    #[error("could not identify level {label}: best overlap {overlap:.3} < 0.5")]
    LevelIdentificationFailure { label: String, overlap: f64 },

    #[error("time step too large: {0}")]
    StepTooLarge(String),

    #[error("response matrix is singular")]
    SingularResponseMatrix,

    #[error("reflection denominator vanishes (|den| = {magnitude:e})")]
    DegenerateResponse { magnitude: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("quadrature did not converge: change {change:e} bits on doubling")]
    QuadratureNonconvergent { change: f64 },
}

/// Coarse classification used to map failures onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Physics,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter(_) => ErrorClass::Input,
            Error::DegenerateDenominator { .. }
            | Error::ParityConditionUnsatisfiable { .. }
            | Error::NegativeDiscriminant { .. }
            | Error::SingularCapacitanceMatrix { .. }
            | Error::SingularResponseMatrix
            | Error::DegenerateResponse { .. } => ErrorClass::Physics,
            Error::ConvergenceFailure { .. }
            | Error::LevelIdentificationFailure { .. }
            | Error::StepTooLarge(_)
            | Error::GridTooCoarse(_)
            | Error::QuadratureNonconvergent { .. } => ErrorClass::Numerical,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
