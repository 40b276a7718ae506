use bgrw_core::process::{run_trajectory, BgrwConfig};
use bgrw_core::statistics::{tv_distance, EmpiricalMeasure, MeasureRecorder};
use serde::Serialize;

use super::{Report, RunContext};
use crate::config::{CommandConfig, MeasureConfig};
use crate::error::CliResult;
use crate::output::{fmt_f64, Csv};
use crate::pool::par_map;
use crate::provenance::Provenance;

/// Measures of one initial condition: per seed, and merged.
#[derive(Clone, Debug)]
pub struct ConditionMeasures {
    pub label: String,
    /// `per_seed[s][i]` is seed `s` at `radii[i]`.
    pub per_seed: Vec<Vec<EmpiricalMeasure>>,
    pub merged: Vec<EmpiricalMeasure>,
}

/// One line of the TV report.
#[derive(Clone, Debug, PartialEq)]
pub struct TvRow {
    pub radius: u32,
    /// `initial` (merged measures of two initial conditions) or `seed`
    /// (two seeds of one initial condition).
    pub kind: &'static str,
    pub a: String,
    pub b: String,
    pub tv: f64,
}

/// Run `j` covers initial condition `j / seeds`, seed `j % seeds`, on
/// stream `j`, so different initial conditions never share random numbers.
pub fn measure_conditions(config: &MeasureConfig, workers: Option<usize>) -> CliResult<Vec<ConditionMeasures>> {
    config.validate()?;
    let seeds = config.seeds;
    let runs = par_map(workers, config.initial.len() as u64 * seeds, |j| {
        let initial = config.initial[(j / seeds) as usize];
        let mut c = BgrwConfig::new(config.p, config.horizon, config.master_seed, initial).with_stream(j);
        c.options.record_series = false;
        let mut rec = MeasureRecorder::new(&config.radii, config.stride)?;
        run_trajectory(&c, &mut [&mut rec])?;
        Ok(rec.finish()?)
    })?;
    let mut out = Vec::new();
    for (i, chunk) in runs.chunks(seeds as usize).enumerate() {
        let mut merged: Vec<EmpiricalMeasure> = config.radii.iter().map(|&r| EmpiricalMeasure::new(r)).collect();
        for seed in chunk {
            for (m, s) in merged.iter_mut().zip(seed) {
                m.merge_from(s)?;
            }
        }
        out.push(ConditionMeasures {
            label: condition_label(config, i),
            per_seed: chunk.to_vec(),
            merged,
        });
    }
    Ok(out)
}

/// The initial tree's label, with its position appended when labels repeat.
fn condition_label(config: &MeasureConfig, i: usize) -> String {
    let label = config.initial[i].label();
    if config.initial.iter().filter(|t| t.label() == label).count() > 1 {
        format!("{label}#{i}")
    } else {
        label
    }
}

pub fn tv_rows(config: &MeasureConfig, conditions: &[ConditionMeasures]) -> CliResult<Vec<TvRow>> {
    let mut rows = Vec::new();
    for (ri, &radius) in config.radii.iter().enumerate() {
        for (a, ca) in conditions.iter().enumerate() {
            for cb in &conditions[a + 1..] {
                rows.push(TvRow {
                    radius,
                    kind: "initial",
                    a: ca.label.clone(),
                    b: cb.label.clone(),
                    tv: tv_distance(&ca.merged[ri], &cb.merged[ri])?,
                });
            }
        }
        for c in conditions {
            for (a, sa) in c.per_seed.iter().enumerate() {
                for (b, sb) in c.per_seed.iter().enumerate().skip(a + 1) {
                    rows.push(TvRow {
                        radius,
                        kind: "seed",
                        a: format!("{}/{a}", c.label),
                        b: format!("{}/{b}", c.label),
                        tv: tv_distance(&sa[ri], &sb[ri])?,
                    });
                }
            }
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct Header<'a> {
    provenance: &'a Provenance,
}

#[derive(Serialize)]
struct Record<'a> {
    initial: &'a str,
    radius: u32,
    canonical_code: String,
    count: u64,
    frequency: f64,
}

pub fn run(config: &MeasureConfig, ctx: &RunContext) -> CliResult<Report> {
    config.validate()?;
    let conditions = measure_conditions(config, ctx.workers(config))?;
    let prov = config.provenance();
    let mut out = ctx.outputs(config)?;

    let mut jsonl = serde_json::to_string(&Header { provenance: &prov }).expect("serializes");
    jsonl.push('\n');
    for c in &conditions {
        for m in &c.merged {
            for (code, count) in m.counts() {
                let rec = Record {
                    initial: &c.label,
                    radius: m.radius(),
                    canonical_code: code.to_hex(),
                    count,
                    frequency: count as f64 / m.total() as f64,
                };
                jsonl.push_str(&serde_json::to_string(&rec).expect("serializes"));
                jsonl.push('\n');
            }
        }
    }
    out.write("measure.jsonl", &jsonl)?;

    if config.tv_report {
        let mut csv = Csv::new(&prov, &["radius", "kind", "a", "b", "tv"]);
        for r in tv_rows(config, &conditions)? {
            csv.row(&[r.radius.to_string(), r.kind.into(), r.a, r.b, fmt_f64(r.tv)]);
        }
        out.write("tv_report.csv", &csv.into_string())?;
    }
    Ok(Report {
        files: out.into_files(),
        violations: Vec::new(),
    })
}
