use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::process::tree::{TreeState, DEFAULT_MATERIALIZATION_CAP};
use crate::VertexId;

/// Number of children of a provider vertex as a function of its depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Growth {
    /// `c` children at every depth (`c = 1` is the half-line).
    Constant(u32),
    /// `(h + offset)^exponent` children at depth `h`.
    Polynomial { offset: u32, exponent: u32 },
}

impl Growth {
    pub fn children(&self, depth: u32) -> u64 {
        match *self {
            Growth::Constant(c) => c as u64,
            Growth::Polynomial { offset, exponent } => {
                (depth as u64 + offset as u64).saturating_pow(exponent)
            }
        }
    }
}

/// Initial tree specifications.
///
/// | spec          | root     | walker        |
/// |---------------|----------|---------------|
/// | `single`      | 0        | 0             |
/// | `path(l)`     | 0        | `l` (the tip) |
/// | `path_with_leaf(l)` | 0  | `l`, which has one extra leaf |
/// | `star(k)`     | center 0 | center 0      |
/// | `halfline`    | `v_0`    | `v_0`         |
/// | `hardtree`    | root     | root          |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialTree {
    Single,
    Path(u32),
    PathWithLeaf(u32),
    Star(u32),
    Halfline,
    /// Every vertex at depth `h` has `(h + offset)^exponent` children.
    Hardtree { offset: u32, exponent: u32 },
}

impl InitialTree {
    pub fn validate(&self) -> Result<()> {
        match *self {
            InitialTree::Path(0) => Err(invalid("initial.path", "length must be >= 1")),
            InitialTree::PathWithLeaf(0) => Err(invalid("initial.path_with_leaf", "length must be >= 1")),
            InitialTree::Star(0) => Err(invalid("initial.star", "needs at least one leaf")),
            InitialTree::Hardtree { offset: 0, .. } => Err(invalid(
                "initial.hardtree.offset",
                "must be >= 1 so that every vertex has a child",
            )),
            _ => Ok(()),
        }
    }

    /// Short label used in file names and reports.
    pub fn label(&self) -> String {
        match *self {
            InitialTree::Single => "single".into(),
            InitialTree::Path(l) => format!("path{l}"),
            InitialTree::PathWithLeaf(l) => format!("pathleaf{l}"),
            InitialTree::Star(k) => format!("star{k}"),
            InitialTree::Halfline => "halfline".into(),
            InitialTree::Hardtree { offset, exponent } => format!("hardtree{offset}_{exponent}"),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, InitialTree::Halfline | InitialTree::Hardtree { .. })
    }
}

/// Builds the initial state for `spec` with the default materialization cap.
pub fn make_initial_tree(spec: InitialTree) -> Result<TreeState> {
    make_initial_tree_with_cap(spec, DEFAULT_MATERIALIZATION_CAP)
}

pub fn make_initial_tree_with_cap(spec: InitialTree, cap: usize) -> Result<TreeState> {
    spec.validate()?;
    match spec {
        InitialTree::Single => TreeState::from_edges(1, &[], 0, 0),
        InitialTree::Path(l) => {
            let edges: Vec<(VertexId, VertexId)> = (1..=l).map(|i| (i - 1, i)).collect();
            TreeState::from_edges(l as usize + 1, &edges, 0, l)
        }
        InitialTree::PathWithLeaf(l) => path_with_tip_leaf(l),
        InitialTree::Star(k) => {
            let edges: Vec<(VertexId, VertexId)> = (1..=k).map(|i| (0, i)).collect();
            TreeState::from_edges(k as usize + 1, &edges, 0, 0)
        }
        InitialTree::Halfline => TreeState::lazy(Growth::Constant(1), cap),
        InitialTree::Hardtree { offset, exponent } => {
            TreeState::lazy(Growth::Polynomial { offset, exponent }, cap)
        }
    }
}

/// Path of length `l` plus one extra leaf on the tip, walker on the tip.
///
/// The smallest tree on which the walker has an ancestor at distance `l`
/// and degree two, as the backbone transform requires.
pub fn path_with_tip_leaf(l: u32) -> Result<TreeState> {
    if l == 0 {
        return Err(invalid("l", "length must be >= 1"));
    }
    let mut edges: Vec<(VertexId, VertexId)> = (1..=l).map(|i| (i - 1, i)).collect();
    edges.push((l, l + 1));
    TreeState::from_edges(l as usize + 2, &edges, 0, l)
}
