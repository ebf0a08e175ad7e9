//! Command-line front end: scenario files, presets and the subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod presets;
pub mod scenario;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use parity_scope::Execution;

pub use commands::simulate::HwSelection;
pub use commands::Context;
pub use config::ScenarioConfig;
pub use error::CliError;

/// Environment variable fixing the worker count.
pub const WORKERS_ENV: &str = "PARITY_SCOPE_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "parity-scope", version, about = "Dispersive parity readout through two coupled resonators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Built-in scenario, see `scenario-list`.
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "config")]
    pub preset: Option<String>,
    /// Output directory, overriding the scenario's `output`.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dispersive parameters, couplings, Purcell times and the parity condition.
    Dispersive,
    /// Cavity trajectories, output fields, information gains and rates.
    Simulate {
        /// Hamming weight to integrate: 0, 1, 2, 3 or `all`.
        #[arg(long, default_value = "all")]
        hw: HwSelection,
    },
    /// Parity information over a grid of χ/κ.
    Sweep,
    /// Exact-diagonalization checks of the perturbative models.
    Validate,
    /// Lists the built-in scenarios.
    ScenarioList,
}

/// Sets up the global worker pool from [`WORKERS_ENV`] when present.
pub fn init_workers() -> Result<(), CliError> {
    let Ok(value) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    config::parse(&text, &path.display().to_string())
}

fn scenario(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    match (&cli.config, &cli.preset) {
        (Some(path), _) => load_config(path),
        (None, Some(name)) => presets::load(name),
        (None, None) => Err(CliError::Config("pass --config PATH or --preset NAME".into())),
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Command::ScenarioList = cli.command {
        for p in presets::PRESETS {
            let cfg = presets::load(p.name)?;
            println!("{:24} {}", p.name, cfg.description);
        }
        return Ok(());
    }
    init_workers()?;
    let cfg = scenario(cli)?;
    let ctx = Context { out: Some(cfg.output_dir(cli.out.as_ref())), quiet: cli.quiet, exec: Execution::default() };
    match cli.command {
        Command::Dispersive => commands::dispersive::run(&cfg, &ctx).map(drop),
        Command::Simulate { hw } => commands::simulate::run(&cfg, hw, &ctx).map(drop),
        Command::Sweep => commands::sweep::run(&cfg, &ctx).map(drop),
        Command::Validate => commands::validate::run(&cfg, &ctx).map(drop),
        Command::ScenarioList => unreachable!(),
    }
}
