//! Path-wise couplings: walk against loop process, block stopping times
//! with their minorant walk, and runs of ones.

pub mod blocks;
pub mod loop_coupling;
pub mod runs;

pub use blocks::{
    block_cap, block_stopping_times, block_stopping_times_from, count_undominated, minorant_walk,
    BlockRecord, BlockTag, BlockTracker, MinorantPoint,
};
pub use loop_coupling::{
    couple_bgrw_loop, couple_bgrw_loop_from, couple_bgrw_loop_logged, AlignmentEntry, CoupledRun,
};
pub use runs::{
    consecutive_ones_bound, consecutive_ones_bound_rational, run_probability_exact,
    run_probability_exact_rational, RunTable, ENUMERATION_LIMIT,
};
