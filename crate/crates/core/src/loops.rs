//! The loop process on a backbone.
//!
//! A backbone of length `l` is the path `0..=l` with loops hanging off its
//! vertices, at least one of them at `l`. At each step the walker first adds
//! a loop at its position with probability `p`, then picks uniformly among
//! the edges attached to its position in the updated backbone: a loop keeps
//! it in place, a path edge moves it. A loop counts as one attached edge.

use rand::Rng;

use crate::error::{check_unit, invalid, Error, Result};
use crate::process::tree::TreeState;
use crate::statistics::proportion::Proportion;
use crate::statistics::summary::FirstPassage;
use crate::VertexId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackboneState {
    loops: Vec<u64>,
    walker: u32,
    time: u64,
}

/// Result of one loop-process step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopOutcome {
    pub added_loop: bool,
    /// New position; equal to the old one when a loop was chosen.
    pub to: u32,
}

impl BackboneState {
    pub fn new(loops: Vec<u64>, walker: u32) -> Result<Self> {
        if loops.len() < 2 {
            return Err(invalid("length", "backbone length must be >= 1"));
        }
        if *loops.last().expect("nonempty") == 0 {
            return Err(invalid("loops", "the far endpoint needs at least one loop"));
        }
        if walker as usize >= loops.len() {
            return Err(invalid("walker", "not a backbone vertex"));
        }
        Ok(Self {
            loops,
            walker,
            time: 0,
        })
    }

    /// The path of length `l` with a single loop at `l`, walker at `l`.
    pub fn minimal(l: u32) -> Result<Self> {
        if l == 0 {
            return Err(invalid("l", "backbone length must be >= 1"));
        }
        let mut loops = vec![0; l as usize + 1];
        loops[l as usize] = 1;
        Self::new(loops, l)
    }

    pub fn length(&self) -> u32 {
        (self.loops.len() - 1) as u32
    }

    pub fn loops(&self) -> &[u64] {
        &self.loops
    }

    pub fn walker(&self) -> u32 {
        self.walker
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn path_edges(&self, i: u32) -> u64 {
        (i > 0) as u64 + (i < self.length()) as u64
    }

    /// Edges attached to `i`, loops counted once.
    pub fn attached_edges(&self, i: u32) -> u64 {
        self.path_edges(i) + self.loops[i as usize]
    }

    pub(crate) fn add_loop(&mut self, i: u32) {
        self.loops[i as usize] += 1;
    }

    pub(crate) fn place(&mut self, i: u32) {
        self.walker = i;
        self.time += 1;
    }

    /// One step. Draw order: the Bernoulli(`p`) loop coin, then a uniform
    /// index over the attached edges (loops first, then the path edge towards
    /// 0, then the one towards `l`).
    pub fn step<R: Rng + ?Sized>(&mut self, p: f64, rng: &mut R) -> LoopOutcome {
        let i = self.walker;
        let added_loop = rng.gen_bool(p);
        if added_loop {
            self.add_loop(i);
        }
        let loops = self.loops[i as usize];
        let j = rng.gen_range(0..self.attached_edges(i));
        let to = if j < loops {
            i
        } else if j == loops && i > 0 {
            i - 1
        } else {
            i + 1
        };
        self.place(to);
        LoopOutcome { added_loop, to }
    }
}

pub fn loop_step<R: Rng + ?Sized>(state: &mut BackboneState, p: f64, rng: &mut R) -> LoopOutcome {
    state.step(p, rng)
}

/// The backbone seen from `walker` towards its ancestor `ancestor`.
///
/// Path vertices are labeled by their distance from `ancestor`; every edge
/// from a path vertex to an off-path neighbor becomes one loop at that
/// vertex, and everything farther from the path is dropped.
pub fn backbone_transform(tree: &TreeState, walker: VertexId, ancestor: VertexId) -> Result<BackboneState> {
    let path = ancestor_path(tree, walker, ancestor)?;
    if tree.degree(walker) < 2 {
        return Err(invalid("walker", "degree must be >= 2"));
    }
    let l = path.len() - 1;
    let mut loops = Vec::with_capacity(path.len());
    for (i, &v) in path.iter().enumerate() {
        if !tree.is_expanded(v) {
            return Err(Error::Unmaterialized(v));
        }
        let on_path = (i > 0) as usize + (i < l) as usize;
        loops.push((tree.degree(v) - on_path) as u64);
    }
    BackboneState::new(loops, l as u32)
}

/// Vertices from `ancestor` (index 0) down to `walker` (index `l`).
pub(crate) fn ancestor_path(tree: &TreeState, walker: VertexId, ancestor: VertexId) -> Result<Vec<VertexId>> {
    for v in [walker, ancestor] {
        if !tree.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    if walker == ancestor {
        return Err(invalid("ancestor", "must differ from the walker"));
    }
    let mut path = vec![walker];
    let mut cur = walker;
    while tree.depth(cur) > tree.depth(ancestor) {
        cur = tree.parent(cur).expect("nonzero depth has a parent");
        path.push(cur);
    }
    if cur != ancestor {
        return Err(invalid("ancestor", "not on the walker's path to the root"));
    }
    path.reverse();
    Ok(path)
}

/// First `t >= 1` at which the walker, started at `l` on the minimal
/// backbone, stands on vertex 0; censored past `horizon`.
pub fn simulate_eta_loop<R: Rng + ?Sized>(l: u32, p: f64, horizon: u64, rng: &mut R) -> Result<FirstPassage> {
    check_unit("p", p)?;
    if horizon == 0 {
        return Err(invalid("horizon", "must be >= 1"));
    }
    let mut state = BackboneState::minimal(l)?;
    Ok(run_until_origin(&mut state, p, horizon, rng))
}

pub(crate) fn run_until_origin<R: Rng + ?Sized>(
    state: &mut BackboneState,
    p: f64,
    horizon: u64,
    rng: &mut R,
) -> FirstPassage {
    while state.time() < horizon {
        if state.step(p, rng).to == 0 {
            return FirstPassage::Hit(state.time());
        }
    }
    FirstPassage::Censored
}

/// `ceil(exp(sqrt(l)))`.
pub fn eta_threshold(l: u32) -> u64 {
    (l as f64).sqrt().exp().ceil() as u64
}

/// Default step budget for [`eta_loop_tail_estimate`].
pub const DEFAULT_STEP_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailEstimate {
    pub l: u32,
    /// `ceil(exp(sqrt(l)))`.
    pub threshold: u64,
    /// Runs with `eta_0 <= threshold`.
    pub hits: Proportion,
}

/// Fraction of minimal-backbone runs that reach 0 within `ceil(exp(sqrt(l)))`
/// steps.
pub fn eta_loop_tail_estimate<R: Rng + ?Sized>(
    l: u32,
    p: f64,
    trials: u64,
    budget: u64,
    rng: &mut R,
) -> Result<TailEstimate> {
    if trials == 0 {
        return Err(invalid("trials", "must be >= 1"));
    }
    let threshold = eta_threshold(l);
    if threshold > budget {
        return Err(Error::Budget {
            what: "exp(sqrt(l)) step threshold",
            needed: threshold,
            budget,
        });
    }
    let mut hits = 0;
    for _ in 0..trials {
        if simulate_eta_loop(l, p, threshold, rng)?.is_hit() {
            hits += 1;
        }
    }
    Ok(TailEstimate {
        l,
        threshold,
        hits: Proportion::new(hits, trials),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::provider::path_with_tip_leaf;
    use crate::rng;

    fn path_tree(extra: &[(VertexId, VertexId)]) -> TreeState {
        // v0..v5 plus a leaf on v5, then extras
        let mut edges: Vec<(VertexId, VertexId)> = (1..=5).map(|i| (i - 1, i)).collect();
        edges.push((5, 6));
        edges.extend_from_slice(extra);
        TreeState::from_edges(edges.len() + 1, &edges, 0, 5).unwrap()
    }

    #[test]
    fn transform_bare_path() {
        let t = path_tree(&[]);
        let b = backbone_transform(&t, 5, 0).unwrap();
        assert_eq!(b.loops(), &[0, 0, 0, 0, 0, 1]);
        assert_eq!(b.walker(), 5);
    }

    #[test]
    fn transform_hanging_leaf() {
        let t = path_tree(&[(2, 7)]);
        assert_eq!(backbone_transform(&t, 5, 0).unwrap().loops(), &[0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn transform_drops_far_vertices() {
        let t = path_tree(&[(2, 7), (7, 8)]);
        assert_eq!(backbone_transform(&t, 5, 0).unwrap().loops(), &[0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn transform_counts_ancestor_side_as_loops() {
        let t = path_tree(&[]);
        let b = backbone_transform(&t, 5, 2).unwrap();
        assert_eq!(b.loops(), &[1, 0, 0, 1]);
    }

    #[test]
    fn transform_preconditions() {
        let t = path_tree(&[(2, 7)]);
        assert!(backbone_transform(&t, 5, 7).is_err());
        assert!(backbone_transform(&t, 5, 5).is_err());
        let bare = TreeState::from_edges(3, &[(0, 1), (1, 2)], 0, 2).unwrap();
        assert!(backbone_transform(&bare, 2, 0).is_err());
        assert!(backbone_transform(&path_with_tip_leaf(3).unwrap(), 3, 0).is_ok());
    }

    #[test]
    fn stay_probability_without_growth() {
        // interior vertex with two path edges and three loops
        let b = BackboneState::new(vec![0, 3, 0, 1], 1).unwrap();
        let mut r = rng::stream(3, 0);
        let n = 200_000;
        let (mut stay, mut down, mut up) = (0, 0, 0);
        for _ in 0..n {
            let mut s = b.clone();
            match s.step(0.0, &mut r).to {
                1 => stay += 1,
                0 => down += 1,
                _ => up += 1,
            }
        }
        let f = |c: i32| c as f64 / n as f64;
        assert!((f(stay) - 0.6).abs() < 0.005);
        assert!((f(down) - 0.2).abs() < 0.005);
        assert!((f(up) - 0.2).abs() < 0.005);
    }

    #[test]
    fn new_loop_can_be_chosen_immediately() {
        let b = BackboneState::minimal(1).unwrap();
        let mut r = rng::stream(5, 0);
        let mut stayed = 0;
        for _ in 0..10_000 {
            let mut s = b.clone();
            let o = s.step(1.0, &mut r);
            assert!(o.added_loop);
            assert_eq!(s.loops()[1], 2);
            if o.to == 1 {
                stayed += 1;
            }
        }
        // 2 loops + 1 path edge: stay with probability 2/3
        assert!((stayed as f64 / 10_000.0 - 2.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn threshold_arithmetic() {
        assert_eq!(eta_threshold(1), 3);
        assert_eq!(eta_threshold(4), 8);
        assert_eq!(eta_threshold(25), 149);
    }

    #[test]
    fn preconditions() {
        let mut r = rng::stream(0, 0);
        assert!(eta_loop_tail_estimate(4, 0.5, 0, DEFAULT_STEP_BUDGET, &mut r).is_err());
        assert!(matches!(
            eta_loop_tail_estimate(400, 0.5, 1, 1000, &mut r),
            Err(Error::Budget { .. })
        ));
        assert!(simulate_eta_loop(0, 0.5, 10, &mut r).is_err());
        assert!(BackboneState::new(vec![0, 0], 1).is_err());
    }

    #[test]
    fn horizon_one_censors_a_stay() {
        // with p = 1 and l = 2 the walker cannot reach 0 in one step
        let mut r = rng::stream(9, 0);
        assert_eq!(simulate_eta_loop(2, 1.0, 1, &mut r).unwrap(), FirstPassage::Censored);
    }
}
