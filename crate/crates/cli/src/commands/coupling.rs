use bgrw_core::couplings::{count_undominated, couple_bgrw_loop, minorant_walk, BlockRecord, BlockTag, BlockTracker};
use bgrw_core::process::{run_trajectory, BgrwConfig, InitialTree};
use bgrw_core::statistics::FirstPassage;

use super::{Report, RunContext};
use crate::config::{CommandConfig, CouplingConfig};
use crate::error::CliResult;
use crate::output::{fmt_f64, Csv};
use crate::pool::par_map;

/// Blocks of one trajectory at one radius, with the minorant check.
#[derive(Clone, Debug)]
pub struct BlockRun {
    pub trial: u64,
    pub r: u32,
    pub records: Vec<BlockRecord>,
    pub undominated: u64,
}

impl BlockRun {
    /// Completed blocks, excluding the start record.
    pub fn blocks(&self) -> u64 {
        self.records.len().saturating_sub(1) as u64
    }

    pub fn tagged(&self, tag: BlockTag) -> u64 {
        self.records.iter().filter(|b| b.tag == tag).count() as u64
    }
}

/// Verdict on one invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub invariant: String,
    pub checked: u64,
    pub violations: u64,
}

#[derive(Clone, Debug)]
pub struct CouplingResults {
    pub runs: Vec<bgrw_core::couplings::CoupledRun>,
    pub blocks: Vec<BlockRun>,
}

impl CouplingResults {
    pub fn verdicts(&self, config: &CouplingConfig) -> Vec<Verdict> {
        let mut v = vec![
            Verdict {
                invariant: "eta_y_after_eta_loop".into(),
                checked: self.runs.iter().filter(|r| r.both_resolved()).count() as u64,
                violations: self.runs.iter().filter(|r| !r.ordered()).count() as u64,
            },
            Verdict {
                invariant: "loop_alignment".into(),
                checked: self.runs.iter().map(|r| r.driven_steps).sum(),
                violations: self.runs.iter().map(|r| r.misalignments).sum(),
            },
        ];
        for &r in &config.block_radii {
            let runs = self.blocks.iter().filter(|b| b.r == r);
            let (checked, violations) = runs.fold((0, 0), |(c, x), b| (c + b.records.len() as u64, x + b.undominated));
            v.push(Verdict {
                invariant: format!("minorant_r{r}"),
                checked,
                violations,
            });
        }
        v
    }
}

/// Coupled run `i` uses stream `i`; block trajectory `j` starts from a
/// single vertex on stream `trials + j` and is cut at every radius.
pub fn coupling_results(config: &CouplingConfig, workers: Option<usize>) -> CliResult<CouplingResults> {
    config.validate()?;
    let initial = config.coupling_initial();
    let runs = par_map(workers, config.trials, |i| {
        let c = BgrwConfig::new(config.p, config.horizon, config.master_seed, initial).with_stream(i);
        Ok(couple_bgrw_loop(&c, config.ell)?)
    })?;
    let block_trials = if config.block_radii.is_empty() { 0 } else { config.block_trials };
    let per_trial = par_map(workers, block_trials, |j| {
        let mut c = BgrwConfig::new(config.p, config.block_horizon, config.master_seed, InitialTree::Single)
            .with_stream(config.trials + j);
        c.options.record_series = false;
        let mut trackers = config
            .block_radii
            .iter()
            .map(|&r| BlockTracker::new(r))
            .collect::<Result<Vec<_>, _>>()?;
        {
            let mut obs: Vec<&mut dyn bgrw_core::process::Observer> =
                trackers.iter_mut().map(|t| t as &mut dyn bgrw_core::process::Observer).collect();
            run_trajectory(&c, &mut obs)?;
        }
        Ok(trackers
            .into_iter()
            .map(|t| {
                let r = t.r();
                let records = t.into_records();
                let undominated = count_undominated(&minorant_walk(&records, r));
                BlockRun {
                    trial: j,
                    r,
                    records,
                    undominated,
                }
            })
            .collect::<Vec<_>>())
    })?;
    Ok(CouplingResults {
        runs,
        blocks: per_trial.into_iter().flatten().collect(),
    })
}

fn passage(f: FirstPassage) -> String {
    f.time().map_or_else(|| "censored".to_string(), |t| t.to_string())
}

fn tag_name(tag: BlockTag) -> &'static str {
    match tag {
        BlockTag::Start => "start",
        BlockTag::Up => "up",
        BlockTag::Down => "down",
        BlockTag::Timeout => "timeout",
    }
}

pub fn run(config: &CouplingConfig, ctx: &RunContext) -> CliResult<Report> {
    config.validate()?;
    let results = coupling_results(config, ctx.workers(config))?;
    let prov = config.provenance();
    let mut out = ctx.outputs(config)?;

    let mut csv = Csv::new(
        &prov,
        &["run", "eta_y", "eta_loop", "driven_steps", "left_path", "misalignments", "ordered"],
    );
    for (i, r) in results.runs.iter().enumerate() {
        csv.row(&[
            i.to_string(),
            passage(r.eta_y),
            passage(r.eta_loop),
            r.driven_steps.to_string(),
            r.left_path.to_string(),
            r.misalignments.to_string(),
            r.ordered().to_string(),
        ]);
    }
    out.write("coupled_runs.csv", &csv.into_string())?;

    if !config.block_radii.is_empty() {
        let mut csv = Csv::new(
            &prov,
            &["trial", "r", "blocks", "up", "down", "timeout", "up_fraction", "undominated"],
        );
        for b in &results.blocks {
            let n = b.blocks();
            let up = b.tagged(BlockTag::Up);
            csv.row(&[
                b.trial.to_string(),
                b.r.to_string(),
                n.to_string(),
                up.to_string(),
                b.tagged(BlockTag::Down).to_string(),
                b.tagged(BlockTag::Timeout).to_string(),
                fmt_f64(if n == 0 { 0.0 } else { up as f64 / n as f64 }),
                b.undominated.to_string(),
            ]);
        }
        out.write("blocks.csv", &csv.into_string())?;

        if config.block_log {
            let mut csv = Csv::new(
                &prov,
                &["trial", "r", "k", "sigma", "distance", "tag", "s_hat", "dominated"],
            );
            for b in &results.blocks {
                for (rec, pt) in b.records.iter().zip(minorant_walk(&b.records, b.r)) {
                    csv.row(&[
                        b.trial.to_string(),
                        b.r.to_string(),
                        rec.k.to_string(),
                        rec.sigma.to_string(),
                        rec.distance.to_string(),
                        tag_name(rec.tag).into(),
                        pt.s_hat.to_string(),
                        pt.dominated.to_string(),
                    ]);
                }
            }
            out.write("block_log.csv", &csv.into_string())?;
        }
    }

    let verdicts = results.verdicts(config);
    let mut csv = Csv::new(&prov, &["invariant", "checked", "violations", "status"]);
    let mut violations = Vec::new();
    for v in &verdicts {
        let ok = v.violations == 0;
        csv.row(&[
            v.invariant.clone(),
            v.checked.to_string(),
            v.violations.to_string(),
            (if ok { "ok" } else { "violated" }).into(),
        ]);
        if !ok {
            violations.push(format!("{}: {} violations", v.invariant, v.violations));
        }
    }
    out.write("verdict.csv", &csv.into_string())?;
    Ok(Report {
        files: out.into_files(),
        violations,
    })
}
