//! The growth-then-move transition kernel.
//!
//! One step from `(T, x)`: with probability `p` attach a new leaf to `x`, then
//! move the walker to a uniformly chosen neighbor of `x` in the (possibly
//! enlarged) tree. An isolated walker always gets its leaf.

use rand::Rng;

use crate::error::{check_unit, Result};
use crate::process::tree::TreeState;
use crate::VertexId;

/// Where the walker goes after the growth coin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// An existing neighbor of the walker.
    Neighbor(VertexId),
    /// The leaf created in this step.
    NewLeaf,
}

/// One realized transition, before it is applied to a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepOutcome {
    pub created: bool,
    pub next: Move,
}

impl TreeState {
    /// Draws a transition from the current state without mutating it.
    ///
    /// Draw order is fixed: one Bernoulli(`p`) coin, then one uniform index
    /// into the walker's neighbor list, with the new leaf (if any) last.
    #[inline]
    pub fn sample_step<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> StepOutcome {
        let degree = self.walker_degree();
        // an isolated walker always grows, whatever the coin says
        let created = rng.gen_bool(p) || degree == 0;
        let choices = degree + created as usize;
        let j = rng.gen_range(0..choices);
        let next = if j == degree {
            Move::NewLeaf
        } else {
            Move::Neighbor(self.neighbors(self.walker())[j])
        };
        StepOutcome { created, next }
    }

    /// Applies a transition drawn for the current state. Returns the
    /// walker's new position.
    #[inline]
    pub fn apply_step(&mut self, outcome: StepOutcome) -> Result<VertexId> {
        let leaf = outcome.created.then(|| self.add_leaf(self.walker()));
        let to = match outcome.next {
            Move::Neighbor(v) => v,
            Move::NewLeaf => leaf.expect("new-leaf move requires a created leaf"),
        };
        self.move_walker(to)?;
        Ok(to)
    }

    /// One kernel step.
    ///
    /// Only lazy trees can fail, when the walker's new position would
    /// materialize more provider vertices than the cap allows.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&mut self, p: f64, rng: &mut R) -> Result<StepOutcome> {
        let outcome = self.sample_step(p, rng);
        self.apply_step(outcome)?;
        Ok(outcome)
    }
}

/// Free-function form of [`TreeState::step`].
pub fn bgrw_step<R: Rng + ?Sized>(state: &mut TreeState, p: f64, rng: &mut R) -> Result<StepOutcome> {
    state.step(p, rng)
}

/// Exact law of one transition from `state`.
///
/// Accepts `p = 0` (useful as an oracle) even though simulations require
/// `p > 0`. Outcomes with zero probability are omitted.
pub fn one_step_distribution(state: &TreeState, p: f64) -> Result<Vec<(StepOutcome, f64)>> {
    check_unit("p", p)?;
    let d = state.walker_degree();
    let mut out = Vec::with_capacity(2 * d + 1);
    if d == 0 {
        return Ok(vec![(StepOutcome { created: true, next: Move::NewLeaf }, 1.0)]);
    }
    if p > 0.0 {
        let w = p / (d + 1) as f64;
        for &v in state.neighbors(state.walker()) {
            out.push((StepOutcome { created: true, next: Move::Neighbor(v) }, w));
        }
        out.push((StepOutcome { created: true, next: Move::NewLeaf }, w));
    }
    if p < 1.0 {
        let w = (1.0 - p) / d as f64;
        for &v in state.neighbors(state.walker()) {
            out.push((StepOutcome { created: false, next: Move::Neighbor(v) }, w));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::provider::{make_initial_tree, InitialTree};
    use crate::rng;

    #[test]
    fn forced_leaf_from_single_vertex() {
        let mut t = make_initial_tree(InitialTree::Single).unwrap();
        let mut r = rng::stream(1, 0);
        let o = t.step(1.0, &mut r).unwrap();
        assert_eq!(o, StepOutcome { created: true, next: Move::NewLeaf });
        assert_eq!(t.vertex_count(), 2);
        assert_eq!(t.edges(), vec![(0, 1)]);
        assert_eq!(t.walker(), 1);
        assert_eq!(t.walker_depth(), 1);
        assert_eq!(t.time(), 1);
    }

    #[test]
    fn isolated_walker_distribution() {
        let t = make_initial_tree(InitialTree::Single).unwrap();
        let d = one_step_distribution(&t, 1.0).unwrap();
        assert_eq!(d, vec![(StepOutcome { created: true, next: Move::NewLeaf }, 1.0)]);
    }

    #[test]
    fn isolated_walker_always_grows() {
        let t = make_initial_tree(InitialTree::Single).unwrap();
        let d = one_step_distribution(&t, 0.25).unwrap();
        assert_eq!(d, vec![(StepOutcome { created: true, next: Move::NewLeaf }, 1.0)]);
        for seed in 0..50 {
            let mut t = t.clone();
            t.step(0.25, &mut rng::stream(seed, 0)).unwrap();
            assert_eq!((t.vertex_count(), t.walker()), (2, 1));
        }
    }

    #[test]
    fn no_growth_is_uniform_over_neighbors() {
        let t = make_initial_tree(InitialTree::Star(5)).unwrap();
        let d = one_step_distribution(&t, 0.0).unwrap();
        assert_eq!(d.len(), 5);
        assert!(d.iter().all(|(o, w)| !o.created && *w == 0.2));
    }

    #[test]
    fn degree_three_half() {
        let t = make_initial_tree(InitialTree::Star(3)).unwrap();
        let d = one_step_distribution(&t, 0.5).unwrap();
        assert_eq!(d.len(), 7);
        let eighths = d.iter().filter(|(_, w)| *w == 0.125).count();
        let sixths = d.iter().filter(|(_, w)| (*w - 1.0 / 6.0).abs() < 1e-15).count();
        assert_eq!((eighths, sixths), (4, 3));
        let total: f64 = d.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_p() {
        let t = make_initial_tree(InitialTree::Single).unwrap();
        assert!(one_step_distribution(&t, 1.5).is_err());
    }
}
