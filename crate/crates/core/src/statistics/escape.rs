use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{check_growth_probability, invalid, Error, Result};
use crate::process::provider::{Growth, InitialTree};
use crate::process::runner::{run_trajectory, BgrwConfig, Observer, PathTipDetector};
use crate::process::tree::TreeState;
use crate::statistics::proportion::Proportion;
use crate::VertexId;

/// Fraction of half-line runs from `v_0` that visit `v_r` within `n` steps.
/// Run `i` uses stream `i` of `seed`.
pub fn pi_estimate(r: u32, n: u64, p: f64, trials: u64, seed: u64) -> Result<Proportion> {
    check_growth_probability(p)?;
    if r == 0 {
        return Err(invalid("r", "must be >= 1"));
    }
    if trials == 0 {
        return Err(invalid("trials", "must be >= 1"));
    }
    let mut hits = 0;
    if (r as u64) <= n {
        for i in 0..trials {
            let config = quiet(BgrwConfig::new(p, n, seed, InitialTree::Halfline).with_stream(i));
            let mut hit = false;
            let mut watch = |s: &TreeState| {
                if s.walker_depth() == r && s.is_provided(s.walker()) {
                    hit = true;
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            };
            run_trajectory(&config, &mut [&mut watch])?;
            hits += hit as u64;
        }
    }
    Ok(Proportion::new(hits, trials))
}

fn quiet(mut config: BgrwConfig) -> BgrwConfig {
    config.options.record_series = false;
    config
}

/// Outcome of one run of the one-ended proxy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProxyOutcome {
    /// `tau_l` did not happen before the horizon.
    TauCensored,
    /// The marked vertex was visited again at this time after `tau_l`.
    Revisited(u64),
    NeverRevisited,
}

/// Waits for `tau_l`, marks the path vertex at distance `l - s` from the
/// walker, then watches for a visit to it.
#[derive(Clone, Debug)]
pub struct OneEndedWatch {
    detector: PathTipDetector,
    offset: u32,
    marked: Option<(VertexId, u64)>,
    outcome: Option<ProxyOutcome>,
    error: Option<Error>,
}

impl OneEndedWatch {
    pub fn new(l: u32, s: u32) -> Result<Self> {
        if s == 0 || s > l {
            return Err(invalid("s", "need 1 <= s <= l"));
        }
        Ok(Self {
            detector: PathTipDetector::new(l),
            offset: l - s,
            marked: None,
            outcome: None,
            error: None,
        })
    }

    pub fn finish(self) -> Result<ProxyOutcome> {
        if let Some(e) = self.error {
            return Err(e);
        }
        Ok(self.outcome.unwrap_or(if self.marked.is_some() {
            ProxyOutcome::NeverRevisited
        } else {
            ProxyOutcome::TauCensored
        }))
    }
}

/// The vertex `steps` edges from the walker along its path.
fn along_path(state: &TreeState, steps: u32) -> VertexId {
    let mut prev = VertexId::MAX;
    let mut cur = state.walker();
    for _ in 0..steps {
        let next = state
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&v| v != prev)
            .expect("path continues");
        prev = cur;
        cur = next;
    }
    cur
}

impl Observer for OneEndedWatch {
    fn radius(&self) -> u32 {
        self.detector.length()
    }

    fn observe(&mut self, state: &TreeState) -> ControlFlow<()> {
        match self.marked {
            None => match self.detector.matches(state) {
                Ok(true) => {
                    let v = along_path(state, self.offset);
                    self.marked = Some((v, state.time()));
                    if v == state.walker() {
                        self.outcome = Some(ProxyOutcome::Revisited(0));
                        return ControlFlow::Break(());
                    }
                }
                Ok(false) => {}
                Err(e) => {
                    self.error = Some(e);
                    return ControlFlow::Break(());
                }
            },
            Some((v, t0)) => {
                if state.walker() == v {
                    self.outcome = Some(ProxyOutcome::Revisited(state.time() - t0));
                    return ControlFlow::Break(());
                }
            }
        }
        ControlFlow::Continue(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneEndedReport {
    pub l: u32,
    pub s: u32,
    /// Runs with no revisit, among those where `tau_l` happened.
    pub never_revisited: Proportion,
    pub tau_censored: u64,
}

/// One run of the proxy experiment.
pub fn one_ended_run(config: &BgrwConfig, l: u32, s: u32) -> Result<ProxyOutcome> {
    let mut watch = OneEndedWatch::new(l, s)?;
    run_trajectory(&quiet(config.clone()), &mut [&mut watch])?;
    watch.finish()
}

/// Runs `trials` trajectories (streams `0..trials` of `seed`) from `initial`
/// and reports how often the marked vertex is never visited again before
/// `horizon`.
pub fn one_ended_proxy(
    l: u32,
    s: u32,
    horizon: u64,
    trials: u64,
    p: f64,
    initial: InitialTree,
    seed: u64,
) -> Result<OneEndedReport> {
    if trials == 0 {
        return Err(invalid("trials", "must be >= 1"));
    }
    OneEndedWatch::new(l, s)?;
    let outcomes = (0..trials)
        .map(|i| one_ended_run(&BgrwConfig::new(p, horizon, seed, initial).with_stream(i), l, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize_proxy(l, s, &outcomes))
}

pub fn summarize_proxy(l: u32, s: u32, outcomes: &[ProxyOutcome]) -> OneEndedReport {
    let censored = outcomes.iter().filter(|o| **o == ProxyOutcome::TauCensored).count() as u64;
    let never = outcomes.iter().filter(|o| **o == ProxyOutcome::NeverRevisited).count() as u64;
    OneEndedReport {
        l,
        s,
        never_revisited: Proportion::new(never, outcomes.len() as u64 - censored),
        tau_censored: censored,
    }
}

/// `prod_{h < n} (1 - 1/(g(h) + 1))`, the product of the chances of not
/// stepping back up at each level when no leaf is ever created.
pub fn hardtree_escape_bound(growth: Growth, n: u64) -> f64 {
    (0..n)
        .map(|h| 1.0 - 1.0 / (growth.children(h as u32) as f64 + 1.0))
        .product()
}

/// Exact probability that the first `n` steps each move to a provided child
/// of the walker, a sub-event of `dist(X_t, root) = t` for all `t <= n`.
pub fn hardtree_descent_probability(growth: Growth, p: f64, n: u64) -> f64 {
    (0..n)
        .map(|h| {
            let g = growth.children(h as u32) as f64;
            let d = g + (h > 0) as u8 as f64;
            g * (p / (d + 1.0) + (1.0 - p) / d)
        })
        .product()
}

/// Whether the walker went one level deeper at every step.
pub fn walked_straight_down(config: &BgrwConfig) -> Result<bool> {
    let mut straight = true;
    let mut watch = |s: &TreeState| {
        if s.walker_depth() as u64 != s.time() {
            straight = false;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    };
    run_trajectory(&quiet(config.clone()), &mut [&mut watch])?;
    Ok(straight)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_unreachable_and_bounded() {
        assert_eq!(pi_estimate(11, 10, 0.5, 20, 1).unwrap().successes, 0);
        let one = pi_estimate(1, 5, 0.5, 200, 1).unwrap();
        assert!(one.fraction() <= 1.0 && one.fraction() > 0.5);
        assert!(pi_estimate(0, 5, 0.5, 1, 1).is_err());
    }

    #[test]
    fn pi_first_step_from_the_end() {
        // from v_0 the first step goes to v_1 with probability p/2 + 1 - p
        let est = pi_estimate(1, 1, 0.5, 20_000, 3).unwrap();
        assert!((est.fraction() - 0.75).abs() < 3.0 * est.radius());
    }

    #[test]
    fn proxy_degenerate_offset() {
        let r = one_ended_proxy(5, 5, 100, 10, 0.5, InitialTree::Path(5), 1).unwrap();
        assert_eq!(r.never_revisited.successes, 0);
        assert_eq!(r.never_revisited.trials, 10);
        assert!(one_ended_proxy(5, 0, 100, 10, 0.5, InitialTree::Path(5), 1).is_err());
        assert!(one_ended_proxy(5, 6, 100, 10, 0.5, InitialTree::Path(5), 1).is_err());
    }

    #[test]
    fn proxy_marks_the_far_vertex() {
        // from path(4), s = 1 marks the vertex 3 edges from the tip
        let c = BgrwConfig::new(0.5, 0, 1, InitialTree::Path(4));
        let mut w = OneEndedWatch::new(4, 1).unwrap();
        run_trajectory(&c, &mut [&mut w]).unwrap();
        assert_eq!(w.marked, Some((1, 0)));
    }

    #[test]
    fn proxy_censored_tau() {
        let c = BgrwConfig::new(0.5, 3, 1, InitialTree::Single);
        assert_eq!(one_ended_run(&c, 10, 2).unwrap(), ProxyOutcome::TauCensored);
    }

    #[test]
    fn hardtree_products() {
        let g = Growth::Polynomial { offset: 2, exponent: 2 };
        let bound = hardtree_escape_bound(g, 1000);
        assert!(bound > 0.5 && bound < 1.0);
        let exact = hardtree_descent_probability(g, 0.0, 1000);
        // without growth, the two agree except at the root, which has no parent
        assert!((exact * (1.0 - 1.0 / 5.0) - bound).abs() < 1e-12);
    }
}
