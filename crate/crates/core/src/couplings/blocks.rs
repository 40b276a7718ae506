use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::process::runner::{run_trajectory_from, BgrwConfig, Observer};
use crate::process::tree::TreeState;

/// How a block ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockTag {
    /// The record for `sigma_0 = 0`.
    Start,
    /// Distance grew by `r`.
    Up,
    /// Distance shrank by `r`.
    Down,
    /// The step cap elapsed first.
    Timeout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub k: u64,
    /// `sigma_k`.
    pub sigma: u64,
    /// Walker distance to the target at `sigma_k`.
    pub distance: u32,
    pub tag: BlockTag,
}

/// `ceil(exp(sqrt(r)))`, the step cap of one block.
pub fn block_cap(r: u32) -> u64 {
    (r as f64).sqrt().exp().ceil() as u64
}

/// Splits a trajectory into blocks as an [`Observer`].
///
/// Distance is measured to the tree's root; to measure it to another vertex,
/// re-root the initial tree with [`TreeState::with_root`] first.
#[derive(Clone, Debug)]
pub struct BlockTracker {
    r: u32,
    cap: u64,
    records: Vec<BlockRecord>,
}

impl BlockTracker {
    pub fn new(r: u32) -> Result<Self> {
        if r == 0 {
            return Err(invalid("r", "must be >= 1"));
        }
        Ok(Self {
            r,
            cap: block_cap(r),
            records: Vec::new(),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn records(&self) -> &[BlockRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<BlockRecord> {
        self.records
    }

    fn push(&mut self, sigma: u64, distance: u32, tag: BlockTag) {
        let k = self.records.len() as u64;
        self.records.push(BlockRecord { k, sigma, distance, tag });
    }
}

impl Observer for BlockTracker {
    fn observe(&mut self, state: &TreeState) -> ControlFlow<()> {
        let t = state.time();
        let d = state.walker_depth();
        let Some(last) = self.records.last().copied() else {
            self.push(t, d, BlockTag::Start);
            return ControlFlow::Continue(());
        };
        let change = d as i64 - last.distance as i64;
        let r = self.r as i64;
        if change == r {
            self.push(t, d, BlockTag::Up);
        } else if change == -r {
            self.push(t, d, BlockTag::Down);
        } else if t - last.sigma >= self.cap {
            self.push(t, d, BlockTag::Timeout);
        }
        ControlFlow::Continue(())
    }
}

/// Blocks of one trajectory, starting with the `Start` record. A block still
/// open at the horizon is dropped.
pub fn block_stopping_times(config: &BgrwConfig, r: u32, budget: u64) -> Result<Vec<BlockRecord>> {
    config.validate()?;
    block_stopping_times_from(config.initial_state()?, config, r, budget)
}

pub fn block_stopping_times_from(
    state: TreeState,
    config: &BgrwConfig,
    r: u32,
    budget: u64,
) -> Result<Vec<BlockRecord>> {
    if config.horizon > budget {
        return Err(Error::Budget {
            what: "block scan horizon",
            needed: config.horizon,
            budget,
        });
    }
    let mut tracker = BlockTracker::new(r)?;
    let mut quiet = config.clone();
    quiet.options.record_series = false;
    run_trajectory_from(state, &quiet, &mut [&mut tracker])?;
    Ok(tracker.into_records())
}

/// One point of the minorant walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorantPoint {
    pub k: u64,
    pub s_hat: i64,
    pub distance: u32,
    /// `distance >= r * s_hat`.
    pub dominated: bool,
}

/// `S_0 = floor(d_0 / r)`, then `+1` after an up block and `-1` after any
/// other block.
pub fn minorant_walk(blocks: &[BlockRecord], r: u32) -> Vec<MinorantPoint> {
    let r = r.max(1) as i64;
    let mut out = Vec::with_capacity(blocks.len());
    let mut s = 0i64;
    for (i, b) in blocks.iter().enumerate() {
        s = if i == 0 {
            b.distance as i64 / r
        } else if b.tag == BlockTag::Up {
            s + 1
        } else {
            s - 1
        };
        out.push(MinorantPoint {
            k: b.k,
            s_hat: s,
            distance: b.distance,
            dominated: b.distance as i64 >= r * s,
        });
    }
    out
}

pub fn count_undominated(points: &[MinorantPoint]) -> u64 {
    points.iter().filter(|p| !p.dominated).count() as u64
}
