use crate::error::{invalid, Result};
use crate::loops::{ancestor_path, backbone_transform, run_until_origin};
use crate::process::runner::BgrwConfig;
use crate::process::tree::TreeState;
use crate::rng;
use crate::statistics::summary::FirstPassage;
use crate::VertexId;

const OFF_PATH: u32 = u32::MAX;

/// Lane of the independent Bernoulli stream used once the walk is over.
pub const CONTINUATION_LANE: u64 = 1;

/// One loop-process step taken while the walk stood on the path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlignmentEntry {
    /// Walk time after the step.
    pub t: u64,
    /// Whether the walker is on the path after the step.
    pub on_path: bool,
    /// Loop walker label after the step.
    pub loop_walker: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoupledRun {
    pub horizon: u64,
    pub ell: u32,
    /// First `t >= 1` with the walker at the ancestor.
    pub eta_y: FirstPassage,
    /// First loop time `k >= 1` with the loop walker at 0.
    pub eta_loop: FirstPassage,
    /// Loop steps driven by the walk (the others came from the continuation).
    pub driven_steps: u64,
    /// Whether the walker ever stepped off the path before the run ended.
    pub left_path: bool,
    /// Steps at which the loop walker's label or loop count disagreed with
    /// the walk. Always 0 for a correct construction.
    pub misalignments: u64,
    pub log: Option<Vec<AlignmentEntry>>,
}

impl CoupledRun {
    /// `eta_y >= eta_loop` whenever both are resolved.
    pub fn ordered(&self) -> bool {
        match (self.eta_y, self.eta_loop) {
            (FirstPassage::Hit(a), FirstPassage::Hit(b)) => a >= b,
            _ => true,
        }
    }

    pub fn both_resolved(&self) -> bool {
        self.eta_y.is_hit() && self.eta_loop.is_hit()
    }
}

/// Couples the walk started from `config.initial` with a loop process on the
/// backbone towards the walker's ancestor at distance `ell`.
///
/// The loop process advances once per walk step taken from a path vertex: a
/// leaf created there is a loop added, a move along the path moves the loop
/// walker, a move off the path keeps it in place. Once the walk reaches its
/// horizon, the loop process continues on the independent stream
/// `lane(seed, stream, CONTINUATION_LANE)` up to loop time `horizon`.
pub fn couple_bgrw_loop(config: &BgrwConfig, ell: u32) -> Result<CoupledRun> {
    config.validate()?;
    couple_bgrw_loop_from(config.initial_state()?, config, ell, false)
}

/// [`couple_bgrw_loop`] with the per-step alignment log.
pub fn couple_bgrw_loop_logged(config: &BgrwConfig, ell: u32) -> Result<CoupledRun> {
    config.validate()?;
    couple_bgrw_loop_from(config.initial_state()?, config, ell, true)
}

pub fn couple_bgrw_loop_from(
    mut state: TreeState,
    config: &BgrwConfig,
    ell: u32,
    record_log: bool,
) -> Result<CoupledRun> {
    if ell == 0 {
        return Err(invalid("ell", "must be >= 1"));
    }
    let x0 = state.walker();
    if state.depth(x0) < ell {
        return Err(invalid("ell", "the walker has no ancestor at this distance"));
    }
    let mut ancestor = x0;
    for _ in 0..ell {
        ancestor = state.parent(ancestor).expect("depth checked");
    }
    let path = ancestor_path(&state, x0, ancestor)?;
    let mut backbone = backbone_transform(&state, x0, ancestor)?;

    let mut label = vec![OFF_PATH; state.vertex_count()];
    for (i, &v) in path.iter().enumerate() {
        label[v as usize] = i as u32;
    }
    let label_of = |v: VertexId| label.get(v as usize).copied().unwrap_or(OFF_PATH);

    let p = config.p;
    let mut rng = rng::stream(config.seed, config.stream);
    let mut log = record_log.then(Vec::new);
    let mut eta_y = FirstPassage::Censored;
    let mut eta_loop = FirstPassage::Censored;
    let mut left_path = false;
    let mut misalignments = 0;
    let mut driven_steps = 0;

    while state.time() < config.horizon {
        let lx = label_of(state.walker());
        let outcome = state.step(p, &mut rng)?;
        if lx == OFF_PATH {
            continue;
        }
        if backbone.walker() != lx {
            misalignments += 1;
        }
        if outcome.created {
            backbone.add_loop(lx);
        }
        let ln = label_of(state.walker());
        let on_path = ln != OFF_PATH;
        left_path |= !on_path;
        backbone.place(if on_path { ln } else { lx });
        driven_steps += 1;
        let x = path[lx as usize];
        if backbone.loops()[lx as usize] + backbone.path_edges(lx) != state.degree(x) as u64 {
            misalignments += 1;
        }
        if let Some(log) = log.as_mut() {
            log.push(AlignmentEntry {
                t: state.time(),
                on_path,
                loop_walker: backbone.walker(),
            });
        }
        if eta_loop == FirstPassage::Censored && backbone.walker() == 0 {
            eta_loop = FirstPassage::Hit(backbone.time());
        }
        if state.walker() == ancestor {
            eta_y = FirstPassage::Hit(state.time());
            break;
        }
    }

    if eta_loop == FirstPassage::Censored {
        let mut w = rng::lane(config.seed, config.stream, CONTINUATION_LANE);
        eta_loop = run_until_origin(&mut backbone, p, config.horizon, &mut w);
    }

    Ok(CoupledRun {
        horizon: config.horizon,
        ell,
        eta_y,
        eta_loop,
        driven_steps,
        left_path,
        misalignments,
        log,
    })
}
