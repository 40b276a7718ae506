//! The growth random walk: tree storage, initial trees, kernel and runner.

pub mod kernel;
pub mod provider;
pub mod runner;
pub mod tree;

pub use kernel::{bgrw_step, one_step_distribution, Move, StepOutcome};
pub use provider::{make_initial_tree, make_initial_tree_with_cap, path_with_tip_leaf, Growth, InitialTree};
pub use runner::{run_trajectory, run_trajectory_from, BgrwConfig, Observer, PathTipDetector, RunOptions};
pub use tree::{TreeProvider, TreeState, DEFAULT_MATERIALIZATION_CAP, NO_PARENT};
