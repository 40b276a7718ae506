use serde::{Deserialize, Serialize};

use crate::process::tree::TreeState;
use crate::VertexId;

/// Outcome of a first-passage search over a finite horizon.
///
/// Times past the horizon are reported as `Censored`, never as the horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstPassage {
    Hit(u64),
    Censored,
}

impl FirstPassage {
    pub fn time(self) -> Option<u64> {
        match self {
            FirstPassage::Hit(t) => Some(t),
            FirstPassage::Censored => None,
        }
    }

    pub fn is_hit(self) -> bool {
        matches!(self, FirstPassage::Hit(_))
    }

    /// `min(time, cap)`, with censored runs counted at the cap.
    pub fn truncated(self, cap: u64) -> u64 {
        self.time().map_or(cap, |t| t.min(cap))
    }
}

/// Everything the estimators need from one trajectory.
///
/// Series are indexed by time `t = 0..=steps`. `distance` is the walker's
/// distance to the root (the anchor `x_0` for single-vertex starts).
#[derive(Clone, Debug, Default)]
pub struct TrajectorySummary {
    pub p: f64,
    pub steps: u64,
    pub initial_vertices: usize,
    /// Largest degree in the initial tree (materialized part).
    pub initial_max_degree: usize,
    pub distance: Vec<u32>,
    pub degree: Vec<u32>,
    pub vertex_count: Vec<u32>,
    /// `(target, number of times t in 0..=steps with X_t = target)`.
    pub visits: Vec<(VertexId, u64)>,
    /// `(l, tau_l)`.
    pub tau: Vec<(u32, FirstPassage)>,
    /// `(threshold, first t with distance >= threshold)`.
    pub milestones: Vec<(u32, FirstPassage)>,
    pub final_distance: u32,
    pub final_vertices: usize,
    pub final_tree: Option<TreeState>,
}

impl TrajectorySummary {
    pub fn visits_to(&self, target: VertexId) -> Option<u64> {
        self.visits.iter().find(|(v, _)| *v == target).map(|(_, c)| *c)
    }

    pub fn tau(&self, l: u32) -> Option<FirstPassage> {
        self.tau.iter().find(|(x, _)| *x == l).map(|(_, f)| *f)
    }

    pub fn milestone(&self, threshold: u32) -> Option<FirstPassage> {
        self.milestones
            .iter()
            .find(|(x, _)| *x == threshold)
            .map(|(_, f)| *f)
    }
}
