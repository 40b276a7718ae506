//! Experiment runner for the growth random walk: JSON configs, a
//! deterministic worker pool over seeds, and CSV/JSONL/DOT outputs that
//! each start with a provenance header.

use std::path::Path;

pub mod commands;
pub mod config;
mod error;
pub mod output;
pub mod pool;
pub mod provenance;
pub mod tree_io;

pub use commands::{Report, RunContext};
pub use error::{CliError, CliResult};

use config::{load_config, CouplingConfig, ExportConfig, MeasureConfig, SimulateConfig, SweepConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Sweep,
    Measure,
    Coupling,
    Export,
}

/// Loads the config at `path`, runs the command, and turns detected
/// invariant violations into [`CliError::Invariant`] after the files are
/// written.
pub fn dispatch(command: Command, path: &Path, ctx: &RunContext) -> CliResult<Report> {
    if ctx.workers == Some(0) {
        return Err(CliError::Validation("`workers`: must be >= 1".into()));
    }
    let report = match command {
        Command::Simulate => commands::simulate::run(&load_config::<SimulateConfig>(path)?, ctx)?,
        Command::Sweep => commands::sweep::run(&load_config::<SweepConfig>(path)?, ctx)?,
        Command::Measure => commands::measure::run(&load_config::<MeasureConfig>(path)?, ctx)?,
        Command::Coupling => commands::coupling::run(&load_config::<CouplingConfig>(path)?, ctx)?,
        Command::Export => commands::export::run(&load_config::<ExportConfig>(path)?, ctx)?,
    };
    if report.violations.is_empty() {
        Ok(report)
    } else {
        Err(CliError::Invariant(report.violations.join("; ")))
    }
}
