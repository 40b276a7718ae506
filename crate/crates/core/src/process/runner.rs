use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{check_growth_probability, invalid, Error, Result};
use crate::process::provider::{make_initial_tree_with_cap, InitialTree};
use crate::process::tree::{TreeState, DEFAULT_MATERIALIZATION_CAP};
use crate::rng;
use crate::statistics::summary::{FirstPassage, TrajectorySummary};
use crate::topology::{canonical_encode, extract_ball, path_code, CanonicalCode};
use crate::VertexId;

/// Parameters of one trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BgrwConfig {
    /// Leaf-creation probability, in `(0, 1]`.
    pub p: f64,
    /// Maximum number of steps.
    pub horizon: u64,
    /// Master seed.
    pub seed: u64,
    /// Trajectory index; the random stream is derived from `(seed, stream)`.
    #[serde(default)]
    pub stream: u64,
    pub initial: InitialTree,
    #[serde(default)]
    pub options: RunOptions,
}

/// What to record and when to stop early.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOptions {
    /// Keep per-step distance, degree and vertex-count series.
    pub record_series: bool,
    /// Move the final tree into the summary.
    pub keep_final_tree: bool,
    /// Stop once the tree has this many vertices.
    pub stop_at_vertices: Option<u64>,
    /// Stop once every requested first-passage record has resolved.
    pub stop_when_resolved: bool,
    /// Full BFS audit every this many steps.
    pub audit_every: Option<u64>,
    /// Vertices of the initial tree whose visits are counted.
    pub targets: Vec<VertexId>,
    /// Lengths `l` for which `tau_l` is recorded.
    pub tau_lengths: Vec<u32>,
    /// Distance thresholds for first-passage milestones.
    pub milestones: Vec<u32>,
    pub materialization_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            record_series: true,
            keep_final_tree: false,
            stop_at_vertices: None,
            stop_when_resolved: false,
            audit_every: None,
            targets: Vec::new(),
            tau_lengths: Vec::new(),
            milestones: Vec::new(),
            materialization_cap: DEFAULT_MATERIALIZATION_CAP,
        }
    }
}

impl BgrwConfig {
    pub fn new(p: f64, horizon: u64, seed: u64, initial: InitialTree) -> Self {
        Self {
            p,
            horizon,
            seed,
            stream: 0,
            initial,
            options: RunOptions::default(),
        }
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    pub fn with_options(mut self, options: RunOptions) -> Self {
        self.options = options;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_growth_probability(self.p)?;
        self.initial.validate()?;
        if self.options.tau_lengths.contains(&0) {
            return Err(invalid("tau_lengths", "lengths must be >= 1"));
        }
        if self.options.milestones.contains(&0) {
            return Err(invalid("milestones", "thresholds must be >= 1"));
        }
        if self.options.audit_every == Some(0) {
            return Err(invalid("audit_every", "must be >= 1"));
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<TreeState> {
        make_initial_tree_with_cap(self.initial, self.options.materialization_cap)
    }
}

/// Read-only hook called on the initial state and after every step.
pub trait Observer {
    /// Radius around the walker that must be materialized on lazy trees
    /// before [`Observer::observe`] runs.
    fn radius(&self) -> u32 {
        0
    }

    fn observe(&mut self, state: &TreeState) -> ControlFlow<()>;
}

impl<F> Observer for F
where
    F: FnMut(&TreeState) -> ControlFlow<()>,
{
    fn observe(&mut self, state: &TreeState) -> ControlFlow<()> {
        self(state)
    }
}

/// Detects `tau_l`: the walker's `l`-ball is a path of length `l` with the
/// walker at an endpoint.
#[derive(Clone, Debug)]
pub struct PathTipDetector {
    length: u32,
    code: CanonicalCode,
}

impl PathTipDetector {
    pub fn new(length: u32) -> Self {
        Self {
            length,
            code: path_code(length),
        }
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// Ball check. Only leaves can be path tips, and a leaf whose next
    /// `l - 1` vertices all have degree two has exactly the path as its
    /// `l`-ball; the canonical comparison confirms the match.
    pub fn matches(&self, state: &TreeState) -> Result<bool> {
        let w = state.walker();
        if state.degree(w) != 1 {
            return Ok(false);
        }
        let mut prev = w;
        let mut cur = state.neighbors(w)[0];
        for _ in 1..self.length {
            if !state.is_expanded(cur) {
                return Err(Error::Unmaterialized(cur));
            }
            let nbrs = state.neighbors(cur);
            if nbrs.len() != 2 {
                return Ok(false);
            }
            let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
            prev = cur;
            cur = next;
        }
        let ball = extract_ball(state, w, self.length)?;
        Ok(canonical_encode(&ball) == self.code)
    }
}

struct Recorder {
    series: bool,
    distance: Vec<u32>,
    degree: Vec<u32>,
    vertex_count: Vec<u32>,
    visits: Vec<(VertexId, u64)>,
    tau: Vec<(PathTipDetector, FirstPassage)>,
    milestones: Vec<(u32, FirstPassage)>,
    unresolved: usize,
}

impl Recorder {
    fn new(options: &RunOptions, initial: &TreeState) -> Result<Self> {
        for &t in &options.targets {
            if !initial.contains(t) {
                return Err(Error::UnknownVertex(t));
            }
        }
        Ok(Self {
            series: options.record_series,
            distance: Vec::new(),
            degree: Vec::new(),
            vertex_count: Vec::new(),
            visits: options.targets.iter().map(|&t| (t, 0)).collect(),
            tau: options
                .tau_lengths
                .iter()
                .map(|&l| (PathTipDetector::new(l), FirstPassage::Censored))
                .collect(),
            milestones: options
                .milestones
                .iter()
                .map(|&m| (m, FirstPassage::Censored))
                .collect(),
            unresolved: options.tau_lengths.len() + options.milestones.len(),
        })
    }

    fn radius(&self) -> u32 {
        self.tau.iter().map(|(d, _)| d.length()).max().unwrap_or(0)
    }

    fn record(&mut self, state: &TreeState) -> Result<()> {
        let t = state.time();
        let w = state.walker();
        let dist = state.walker_depth();
        if self.series {
            self.distance.push(dist);
            self.degree.push(state.walker_degree() as u32);
            self.vertex_count.push(state.vertex_count() as u32);
        }
        for (target, count) in &mut self.visits {
            if *target == w {
                *count += 1;
            }
        }
        if self.unresolved > 0 {
            for (threshold, hit) in &mut self.milestones {
                if *hit == FirstPassage::Censored && dist >= *threshold {
                    *hit = FirstPassage::Hit(t);
                    self.unresolved -= 1;
                }
            }
            for (detector, hit) in &mut self.tau {
                if *hit == FirstPassage::Censored && detector.matches(state)? {
                    *hit = FirstPassage::Hit(t);
                    self.unresolved -= 1;
                }
            }
        }
        Ok(())
    }
}

/// Runs one trajectory from the configured initial tree.
pub fn run_trajectory(
    config: &BgrwConfig,
    observers: &mut [&mut dyn Observer],
) -> Result<TrajectorySummary> {
    config.validate()?;
    let state = config.initial_state()?;
    run_trajectory_from(state, config, observers)
}

/// Runs one trajectory from an explicit initial state; `config.initial` is
/// ignored.
pub fn run_trajectory_from(
    mut state: TreeState,
    config: &BgrwConfig,
    observers: &mut [&mut dyn Observer],
) -> Result<TrajectorySummary> {
    check_growth_probability(config.p)?;
    let options = &config.options;
    state.set_materialization_cap(options.materialization_cap);
    let mut rng = rng::stream(config.seed, config.stream);
    let mut recorder = Recorder::new(options, &state)?;
    let radius = observers
        .iter()
        .map(|o| o.radius())
        .max()
        .unwrap_or(0)
        .max(recorder.radius());
    let lazy = state.is_lazy();
    if lazy {
        state.ensure_expanded_within(state.walker(), radius)?;
    }

    let initial_vertices = state.vertex_count();
    let initial_max_degree = (0..initial_vertices as VertexId)
        .map(|v| state.degree(v))
        .max()
        .unwrap_or(0);
    if options.record_series {
        let cap = config.horizon.min(1 << 24) as usize + 1;
        recorder.distance.reserve(cap);
        recorder.degree.reserve(cap);
        recorder.vertex_count.reserve(cap);
    }

    let target_vertices = options.stop_at_vertices.unwrap_or(u64::MAX);
    let mut stop = recorder_observe(&mut recorder, observers, &state)?;
    let mut steps = 0;
    while steps < config.horizon && !stop && (state.vertex_count() as u64) < target_vertices {
        if options.stop_when_resolved && recorder.unresolved == 0 {
            break;
        }
        state.step(config.p, &mut rng)?;
        steps += 1;
        if lazy && radius > 0 {
            state.ensure_expanded_within(state.walker(), radius)?;
        }
        stop = recorder_observe(&mut recorder, observers, &state)?;
        if let Some(every) = options.audit_every {
            if steps % every == 0 {
                state.audit()?;
            }
        }
    }

    Ok(TrajectorySummary {
        p: config.p,
        steps,
        initial_vertices,
        initial_max_degree,
        final_distance: state.walker_depth(),
        final_vertices: state.vertex_count(),
        distance: recorder.distance,
        degree: recorder.degree,
        vertex_count: recorder.vertex_count,
        visits: recorder.visits,
        tau: recorder
            .tau
            .into_iter()
            .map(|(d, hit)| (d.length(), hit))
            .collect(),
        milestones: recorder.milestones,
        final_tree: options.keep_final_tree.then_some(state),
    })
}

fn recorder_observe(
    recorder: &mut Recorder,
    observers: &mut [&mut dyn Observer],
    state: &TreeState,
) -> Result<bool> {
    recorder.record(state)?;
    let mut stop = false;
    for o in observers.iter_mut() {
        stop |= o.observe(state).is_break();
    }
    Ok(stop)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(p: f64, horizon: u64, initial: InitialTree) -> BgrwConfig {
        BgrwConfig::new(p, horizon, 11, initial)
    }

    #[test]
    fn zero_horizon_records_initial_state() {
        let s = run_trajectory(&config(0.5, 0, InitialTree::Star(3)), &mut []).unwrap();
        assert_eq!(s.steps, 0);
        assert_eq!(s.distance, vec![0]);
        assert_eq!(s.degree, vec![3]);
        assert_eq!(s.vertex_count, vec![4]);
    }

    #[test]
    fn p_one_adds_a_leaf_every_step() {
        let s = run_trajectory(&config(1.0, 500, InitialTree::Single), &mut []).unwrap();
        assert_eq!(s.final_vertices, 501);
    }

    #[test]
    fn observers_see_every_state_and_can_stop() {
        let mut seen = 0u64;
        let mut count = |st: &TreeState| {
            seen += 1;
            if st.time() == 9 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        };
        let s = run_trajectory(&config(0.5, 100, InitialTree::Single), &mut [&mut count]).unwrap();
        assert_eq!(s.steps, 9);
        assert_eq!(seen, 10);
    }

    #[test]
    fn tau_at_time_zero_for_path_start() {
        let mut c = config(0.5, 10, InitialTree::Path(4));
        c.options.tau_lengths = vec![4];
        let s = run_trajectory(&c, &mut []).unwrap();
        assert_eq!(s.tau(4), Some(FirstPassage::Hit(0)));
    }

    #[test]
    fn tau_one_is_one_for_forced_growth() {
        let mut c = config(1.0, 10, InitialTree::Single);
        c.options.tau_lengths = vec![1];
        let s = run_trajectory(&c, &mut []).unwrap();
        assert_eq!(s.tau(1), Some(FirstPassage::Hit(1)));
    }

    #[test]
    fn stop_at_vertex_count() {
        let mut c = config(0.3, u64::MAX, InitialTree::Single);
        c.options.stop_at_vertices = Some(200);
        c.options.keep_final_tree = true;
        let s = run_trajectory(&c, &mut []).unwrap();
        assert_eq!(s.final_vertices, 200);
        s.final_tree.unwrap().audit().unwrap();
    }

    #[test]
    fn unknown_target_is_rejected() {
        let mut c = config(0.5, 10, InitialTree::Single);
        c.options.targets = vec![3];
        assert_eq!(run_trajectory(&c, &mut []).unwrap_err(), Error::UnknownVertex(3));
    }

    #[test]
    fn lazy_cap_is_an_error() {
        let mut c = config(0.5, 1000, InitialTree::Hardtree { offset: 2, exponent: 2 });
        c.options.materialization_cap = 50;
        assert!(matches!(
            run_trajectory(&c, &mut []),
            Err(Error::MaterializationCap { cap: 50 })
        ));
    }

    #[test]
    fn zero_probability_rejected() {
        assert!(run_trajectory(&config(0.0, 10, InitialTree::Single), &mut []).is_err());
    }
}
