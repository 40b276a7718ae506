//! The subcommands. Each validates its config, fans trajectories out over
//! the worker pool, then writes its files from a single thread.

use std::path::{Path, PathBuf};

use crate::config::CommandConfig;
use crate::error::CliResult;
use crate::output::{resolve_out_dir, OutputSet};

pub mod coupling;
pub mod export;
pub mod measure;
pub mod simulate;
pub mod sweep;

/// Command-line overrides of the config's execution fields.
#[derive(Clone, Debug, Default)]
pub struct RunContext {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl RunContext {
    pub fn new(out: Option<&Path>, workers: Option<usize>) -> Self {
        Self {
            out: out.map(Path::to_path_buf),
            workers,
        }
    }

    pub(crate) fn workers<C: CommandConfig>(&self, config: &C) -> Option<usize> {
        self.workers.or(config.workers())
    }

    pub(crate) fn outputs<C: CommandConfig>(&self, config: &C) -> CliResult<OutputSet> {
        OutputSet::create(resolve_out_dir(self.out.as_deref(), config.out()))
    }
}

/// Files written by a command and any invariant violations it detected.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub files: Vec<PathBuf>,
    /// One line per violated invariant.
    pub violations: Vec<String>,
}
