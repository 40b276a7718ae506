use bgrw_core::process::{run_trajectory, BgrwConfig};
use bgrw_core::statistics::TrajectorySummary;

use super::{Report, RunContext};
use crate::config::{CommandConfig, SimulateConfig};
use crate::error::{validation, CliResult};
use crate::output::Csv;
use crate::pool::par_map;
use crate::tree_io::TreeSnapshot;

/// Per-seed results of `simulate`.
#[derive(Clone, Debug)]
pub struct SimulatedRun {
    pub seed: u64,
    pub summary: TrajectorySummary,
    pub snapshot: TreeSnapshot,
    pub height: u32,
}

/// Runs seed `i` on stream `i` of the master seed.
pub fn simulate_runs(config: &SimulateConfig, workers: Option<usize>) -> CliResult<Vec<SimulatedRun>> {
    config.validate()?;
    if workers == Some(0) {
        return Err(validation("workers", "must be >= 1"));
    }
    par_map(workers, config.seeds, |i| {
        let mut c = BgrwConfig::new(config.p, config.effective_horizon(), config.master_seed, config.initial)
            .with_stream(i);
        c.options.record_series = config.trajectory;
        c.options.keep_final_tree = true;
        c.options.stop_at_vertices = config.stop_at_vertices;
        let mut summary = run_trajectory(&c, &mut [])?;
        let tree = summary.final_tree.take().expect("final tree requested");
        Ok(SimulatedRun {
            seed: i,
            height: tree.height(),
            snapshot: TreeSnapshot::from_state(&tree),
            summary,
        })
    })
}

pub fn run(config: &SimulateConfig, ctx: &RunContext) -> CliResult<Report> {
    config.validate()?;
    let runs = simulate_runs(config, ctx.workers(config))?;
    let prov = config.provenance();
    let mut out = ctx.outputs(config)?;

    let mut summary = Csv::new(&prov, &["seed", "steps", "vertices", "height", "final_distance"]);
    for r in &runs {
        let s = &r.summary;
        summary.row(&[
            r.seed.to_string(),
            s.steps.to_string(),
            s.final_vertices.to_string(),
            r.height.to_string(),
            s.final_distance.to_string(),
        ]);
        if config.trajectory {
            let mut csv = Csv::new(&prov, &["t", "dist_to_root", "walker_degree", "vertex_count"]);
            for t in 0..=s.steps as usize {
                csv.row(&[
                    t.to_string(),
                    s.distance[t].to_string(),
                    s.degree[t].to_string(),
                    s.vertex_count[t].to_string(),
                ]);
            }
            out.write(&format!("trajectory_{:04}.csv", r.seed), &csv.into_string())?;
        }
        if config.trees {
            let mut snap = r.snapshot.clone();
            snap.provenance = Some(prov.clone());
            out.write(&format!("tree_{:04}.json", r.seed), &snap.to_json())?;
            out.write(&format!("tree_{:04}.dot", r.seed), &snap.to_dot())?;
        }
    }
    out.write("simulate_summary.csv", &summary.into_string())?;
    Ok(Report {
        files: out.into_files(),
        violations: Vec::new(),
    })
}
