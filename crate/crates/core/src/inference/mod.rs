//! Bayesian analysis of the integrated homodyne record: conditional
//! Gaussians, Hamming-weight and parity posteriors, average information gains,
//! measurement rates and χ sweeps.

mod bayes;
mod info;
mod rates;
mod signal;
mod sweep;

pub use bayes::{conditional_density, mixture_density, posteriors, Posterior};
pub use info::{analyze, info_gains, mixture_expectation, optimal_phase, InfoGainReport, InfoGains, PhasePolicy, OUTER_POINTS};
pub use rates::{info_series, measurement_rates, tau_grid, RateSeries, MIN_RATE_POINTS};
pub use signal::{integrated_signal, output_integral, NoiseConvention, SignalModel, SignalSet};
pub use sweep::{
    argmin_missing, chi_sweep, cut_points, diagonal_points, grid_points, linspace, parity_trajectories, sweep_point,
    write_sweep_csv, SweepConfig, SweepRow,
};
