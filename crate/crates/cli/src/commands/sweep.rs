use bgrw_core::process::{run_trajectory, BgrwConfig};
use bgrw_core::statistics::{speed_estimate, SpeedEstimate};

use super::{Report, RunContext};
use crate::config::{CommandConfig, SweepConfig};
use crate::error::CliResult;
use crate::output::{fmt_f64, Csv};
use crate::pool::par_map;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub seed: u64,
    pub estimate: SpeedEstimate,
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Run `j` for `p_list[j / seeds]`, seed `j % seeds` uses stream `j`.
pub fn sweep_rows(config: &SweepConfig, workers: Option<usize>) -> CliResult<Vec<SweepRow>> {
    config.validate()?;
    let seeds = config.seeds;
    par_map(workers, config.p_list.len() as u64 * seeds, |j| {
        let p = config.p_list[(j / seeds) as usize];
        let c = BgrwConfig::new(p, config.horizon, config.master_seed, config.initial).with_stream(j);
        let s = run_trajectory(&c, &mut [])?;
        Ok(SweepRow {
            p,
            seed: j % seeds,
            estimate: speed_estimate(&s)?,
        })
    })
}

pub fn run(config: &SweepConfig, ctx: &RunContext) -> CliResult<Report> {
    config.validate()?;
    let rows = sweep_rows(config, ctx.workers(config))?;
    let prov = config.provenance();
    let mut out = ctx.outputs(config)?;

    let mut csv = Csv::new(&prov, &["p", "seed", "speed_estimate", "windowed_estimate"]);
    for r in &rows {
        csv.row(&[
            fmt_f64(r.p),
            r.seed.to_string(),
            fmt_f64(r.estimate.endpoint),
            fmt_f64(r.estimate.windowed),
        ]);
    }
    out.write("sweep.csv", &csv.into_string())?;

    let mut summary = Csv::new(
        &prov,
        &["p", "runs", "mean_speed", "std_speed", "mean_windowed", "std_windowed"],
    );
    for chunk in rows.chunks(config.seeds as usize) {
        let end: Vec<f64> = chunk.iter().map(|r| r.estimate.endpoint).collect();
        let win: Vec<f64> = chunk.iter().map(|r| r.estimate.windowed).collect();
        let (me, se) = mean_std(&end);
        let (mw, sw) = mean_std(&win);
        summary.row(&[
            fmt_f64(chunk[0].p),
            chunk.len().to_string(),
            fmt_f64(me),
            fmt_f64(se),
            fmt_f64(mw),
            fmt_f64(sw),
        ]);
    }
    out.write("sweep_summary.csv", &summary.into_string())?;
    Ok(Report {
        files: out.into_files(),
        violations: Vec::new(),
    })
}
