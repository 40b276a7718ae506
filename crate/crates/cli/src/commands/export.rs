use std::fs;

use super::{Report, RunContext};
use crate::config::{CommandConfig, ExportConfig, TreeFormat};
use crate::error::{CliError, CliResult};
use crate::provenance::Provenance;
use crate::tree_io::TreeSnapshot;

pub fn read_snapshot(text: &str, format: TreeFormat) -> CliResult<TreeSnapshot> {
    match format {
        TreeFormat::Json => TreeSnapshot::from_json(text),
        TreeFormat::Dot => TreeSnapshot::from_dot(text),
    }
}

pub fn render_snapshot(snap: &TreeSnapshot, format: TreeFormat) -> String {
    match format {
        TreeFormat::Json => snap.to_json(),
        TreeFormat::Dot => snap.to_dot(),
    }
}

/// Converts the input tree; the master seed of its header carries over.
pub fn run(config: &ExportConfig, ctx: &RunContext) -> CliResult<Report> {
    config.validate()?;
    let (from, to) = (config.source_format()?, config.target_format()?);
    let text = fs::read_to_string(&config.input)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", config.input.display())))?;
    let mut snap = read_snapshot(&text, from)?;
    let seed = match from {
        TreeFormat::Json => snap.provenance.as_ref().and_then(|p| p.master_seed),
        TreeFormat::Dot => Provenance::seed_from_header(&text),
    };
    let mut prov = config.provenance();
    prov.master_seed = seed;
    snap.provenance = Some(prov);

    let name = config.output.clone().unwrap_or_else(|| {
        let stem = config.input.file_stem().map_or("tree".into(), |s| s.to_string_lossy().into_owned());
        format!("{stem}.{}", to.extension())
    });
    let mut out = ctx.outputs(config)?;
    out.write(&name, &render_snapshot(&snap, to))?;
    Ok(Report {
        files: out.into_files(),
        violations: Vec::new(),
    })
}
