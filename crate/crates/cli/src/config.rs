//! Per-command JSON configs.
//!
//! Every field has a default and unknown fields are rejected. `out` and
//! `workers` only steer where and how a run executes, so they are left out
//! of the normalized form that feeds the config hash.

use std::path::{Path, PathBuf};

use bgrw_core::process::InitialTree;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{validation, CliError, CliResult};
use crate::provenance::Provenance;

fn half() -> f64 {
    0.5
}

fn one() -> u64 {
    1
}

fn yes() -> bool {
    true
}

fn single() -> InitialTree {
    InitialTree::Single
}

/// Parses a config, reporting serde's line and column on failure.
pub fn parse_config<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
}

pub fn load_config<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Common surface of the command configs.
pub trait CommandConfig: Serialize {
    const COMMAND: &'static str;

    fn master_seed(&self) -> Option<u64>;
    fn out(&self) -> Option<&Path>;
    fn workers(&self) -> Option<usize>;
    /// Checks every parameter before anything is computed.
    fn validate(&self) -> CliResult<()>;

    fn provenance(&self) -> Provenance {
        let normalized = serde_json::to_string(self).expect("configs serialize");
        Provenance::new(Self::COMMAND, &normalized, self.master_seed())
    }
}

fn check_p(name: &str, p: f64) -> CliResult<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(validation(name, format!("{p} is not in (0, 1]")))
    }
}

fn check_positive(name: &str, v: u64) -> CliResult<()> {
    if v == 0 {
        Err(validation(name, "must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_workers(workers: Option<usize>) -> CliResult<()> {
    if workers == Some(0) {
        Err(validation("workers", "must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_initial(initial: &InitialTree) -> CliResult<()> {
    initial.validate().map_err(CliError::from)
}

/// Runs trajectories and writes their series and final trees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default = "half")]
    pub p: f64,
    /// Step horizon. Defaults to 1000 when `stop_at_vertices` is absent.
    #[serde(default)]
    pub horizon: Option<u64>,
    /// Stop when the tree has this many vertices instead.
    #[serde(default)]
    pub stop_at_vertices: Option<u64>,
    #[serde(default = "one")]
    pub seeds: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "single")]
    pub initial: InitialTree,
    /// Write the per-step trajectory CSV.
    #[serde(default = "yes")]
    pub trajectory: bool,
    /// Write the final tree as JSON and DOT.
    #[serde(default = "yes")]
    pub trees: bool,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

pub const DEFAULT_SIMULATE_HORIZON: u64 = 1000;

impl Default for SimulateConfig {
    fn default() -> Self {
        parse_config("{}").expect("defaults parse")
    }
}

impl SimulateConfig {
    /// Step horizon after applying the stop-condition rules.
    pub fn effective_horizon(&self) -> u64 {
        match (self.horizon, self.stop_at_vertices) {
            (Some(h), _) => h,
            (None, Some(_)) => u64::MAX,
            (None, None) => DEFAULT_SIMULATE_HORIZON,
        }
    }
}

impl CommandConfig for SimulateConfig {
    const COMMAND: &'static str = "simulate";

    fn master_seed(&self) -> Option<u64> {
        Some(self.master_seed)
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    fn workers(&self) -> Option<usize> {
        self.workers
    }

    fn validate(&self) -> CliResult<()> {
        check_p("p", self.p)?;
        check_positive("seeds", self.seeds)?;
        check_initial(&self.initial)?;
        check_workers(self.workers)?;
        if self.horizon.is_some() && self.stop_at_vertices.is_some() {
            return Err(validation(
                "stop_at_vertices",
                "cannot be combined with `horizon`; pick one stop condition",
            ));
        }
        if let Some(n) = self.stop_at_vertices {
            check_positive("stop_at_vertices", n)?;
            if n > u32::MAX as u64 {
                return Err(validation("stop_at_vertices", "exceeds the vertex id range"));
            }
            if !self.initial.is_finite() {
                return Err(validation(
                    "stop_at_vertices",
                    "needs a finite initial tree (lazy trees count provided vertices)",
                ));
            }
        }
        Ok(())
    }
}

/// Speed estimates over a grid of `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_p_list")]
    pub p_list: Vec<f64>,
    #[serde(default = "default_sweep_horizon")]
    pub horizon: u64,
    #[serde(default = "default_sweep_seeds")]
    pub seeds: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "single")]
    pub initial: InitialTree,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

fn default_p_list() -> Vec<f64> {
    vec![0.1, 0.5, 0.9]
}

fn default_sweep_horizon() -> u64 {
    10_000
}

fn default_sweep_seeds() -> u64 {
    20
}

impl CommandConfig for SweepConfig {
    const COMMAND: &'static str = "sweep";

    fn master_seed(&self) -> Option<u64> {
        Some(self.master_seed)
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    fn workers(&self) -> Option<usize> {
        self.workers
    }

    fn validate(&self) -> CliResult<()> {
        if self.p_list.is_empty() {
            return Err(validation("p_list", "must not be empty"));
        }
        for &p in &self.p_list {
            check_p("p_list", p)?;
        }
        check_positive("horizon", self.horizon)?;
        check_positive("seeds", self.seeds)?;
        check_initial(&self.initial)?;
        check_workers(self.workers)
    }
}

/// Empirical `r`-ball measures seen from the walker.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    #[serde(default = "half")]
    pub p: f64,
    #[serde(default = "default_measure_horizon")]
    pub horizon: u64,
    #[serde(default = "one")]
    pub seeds: u64,
    #[serde(default)]
    pub master_seed: u64,
    /// One measure per initial condition; each pairs up in the TV report.
    #[serde(default = "default_initials")]
    pub initial: Vec<InitialTree>,
    #[serde(default = "default_radii")]
    pub radii: Vec<u32>,
    /// Record every `stride`-th time.
    #[serde(default = "one")]
    pub stride: u64,
    #[serde(default = "yes")]
    pub tv_report: bool,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

fn default_measure_horizon() -> u64 {
    100_000
}

fn default_initials() -> Vec<InitialTree> {
    vec![InitialTree::Single]
}

fn default_radii() -> Vec<u32> {
    vec![1]
}

/// Largest radius accepted; balls grow fast beyond this.
pub const MAX_MEASURE_RADIUS: u32 = 64;

impl CommandConfig for MeasureConfig {
    const COMMAND: &'static str = "measure";

    fn master_seed(&self) -> Option<u64> {
        Some(self.master_seed)
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    fn workers(&self) -> Option<usize> {
        self.workers
    }

    fn validate(&self) -> CliResult<()> {
        check_p("p", self.p)?;
        check_positive("seeds", self.seeds)?;
        check_positive("stride", self.stride)?;
        if self.initial.is_empty() {
            return Err(validation("initial", "need at least one initial tree"));
        }
        for i in &self.initial {
            check_initial(i)?;
        }
        if self.radii.is_empty() {
            return Err(validation("radii", "must not be empty"));
        }
        if let Some(&r) = self.radii.iter().find(|&&r| r > MAX_MEASURE_RADIUS) {
            return Err(validation("radii", format!("{r} exceeds {MAX_MEASURE_RADIUS}")));
        }
        let mut sorted = self.radii.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.radii.len() {
            return Err(validation("radii", "contains duplicates"));
        }
        check_workers(self.workers)
    }
}

/// Path-wise invariant checks: walk against loop process, and the block
/// minorant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    #[serde(default = "half")]
    pub p: f64,
    #[serde(default = "default_ell")]
    pub ell: u32,
    /// Coupled runs.
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_coupling_horizon")]
    pub horizon: u64,
    /// Initial tree of the coupled runs; `path_with_leaf(ell)` when absent.
    #[serde(default)]
    pub initial: Option<InitialTree>,
    #[serde(default = "default_block_radii")]
    pub block_radii: Vec<u32>,
    #[serde(default = "default_block_trials")]
    pub block_trials: u64,
    #[serde(default = "default_block_horizon")]
    pub block_horizon: u64,
    /// Write every block record, not only per-trajectory summaries.
    #[serde(default)]
    pub block_log: bool,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

fn default_ell() -> u32 {
    10
}

fn default_trials() -> u64 {
    10_000
}

fn default_coupling_horizon() -> u64 {
    100_000
}

fn default_block_radii() -> Vec<u32> {
    vec![4, 16]
}

fn default_block_trials() -> u64 {
    1000
}

fn default_block_horizon() -> u64 {
    10_000
}

/// Upper bound on `block_horizon`.
pub const BLOCK_BUDGET: u64 = 100_000_000;

impl CouplingConfig {
    pub fn coupling_initial(&self) -> InitialTree {
        self.initial.unwrap_or(InitialTree::PathWithLeaf(self.ell))
    }
}

impl CommandConfig for CouplingConfig {
    const COMMAND: &'static str = "coupling";

    fn master_seed(&self) -> Option<u64> {
        Some(self.master_seed)
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    fn workers(&self) -> Option<usize> {
        self.workers
    }

    fn validate(&self) -> CliResult<()> {
        check_p("p", self.p)?;
        check_positive("ell", self.ell as u64)?;
        check_positive("trials", self.trials)?;
        let initial = self.coupling_initial();
        check_initial(&initial)?;
        let state = bgrw_core::process::make_initial_tree(initial)?;
        if state.walker_depth() < self.ell {
            return Err(validation("ell", "the initial walker has no ancestor at distance ell"));
        }
        if !self.block_radii.is_empty() {
            check_positive("block_trials", self.block_trials)?;
            if self.block_radii.contains(&0) {
                return Err(validation("block_radii", "radii must be >= 1"));
            }
            if self.block_horizon > BLOCK_BUDGET {
                return Err(validation("block_horizon", format!("exceeds {BLOCK_BUDGET}")));
            }
        }
        check_workers(self.workers)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeFormat {
    Json,
    Dot,
}

impl TreeFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TreeFormat::Json => "json",
            TreeFormat::Dot => "dot",
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "json" => Some(TreeFormat::Json),
            "dot" | "gv" => Some(TreeFormat::Dot),
            _ => None,
        }
    }
}

/// Converts a tree snapshot between JSON and DOT.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportConfig {
    pub input: PathBuf,
    /// Target format; the other one of the input's when absent.
    #[serde(default)]
    pub to: Option<TreeFormat>,
    /// Output file name inside the output directory.
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

impl ExportConfig {
    pub fn source_format(&self) -> CliResult<TreeFormat> {
        TreeFormat::from_path(&self.input)
            .ok_or_else(|| validation("input", "extension must be .json, .dot or .gv"))
    }

    pub fn target_format(&self) -> CliResult<TreeFormat> {
        Ok(self.to.unwrap_or(match self.source_format()? {
            TreeFormat::Json => TreeFormat::Dot,
            TreeFormat::Dot => TreeFormat::Json,
        }))
    }
}

impl CommandConfig for ExportConfig {
    const COMMAND: &'static str = "export";

    fn master_seed(&self) -> Option<u64> {
        None
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    fn workers(&self) -> Option<usize> {
        self.workers
    }

    fn validate(&self) -> CliResult<()> {
        self.target_format()?;
        if let Some(name) = &self.output {
            if name.is_empty() || name.contains(['/', '\\']) {
                return Err(validation("output", "must be a plain file name"));
            }
        }
        check_workers(self.workers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let c: SimulateConfig = parse_config("{}").unwrap();
        assert_eq!((c.p, c.seeds, c.effective_horizon()), (0.5, 1, DEFAULT_SIMULATE_HORIZON));
        let c: CouplingConfig = parse_config("{}").unwrap();
        assert_eq!(c.coupling_initial(), InitialTree::PathWithLeaf(10));
        c.validate().unwrap();
    }

    #[test]
    fn unknown_fields_rejected() {
        let e = parse_config::<SweepConfig>(r#"{"p_lsit": [0.5]}"#).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("p_lsit"));
    }

    #[test]
    fn negative_radius_rejected() {
        assert!(parse_config::<MeasureConfig>(r#"{"radii": [-1]}"#).is_err());
    }

    #[test]
    fn validation_names_the_parameter() {
        let c: SweepConfig = parse_config(r#"{"p_list": []}"#).unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("p_list"));
        let c: CouplingConfig = parse_config(r#"{"trials": 0}"#).unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("trials"));
        let c: SimulateConfig = parse_config(r#"{"horizon": 5, "stop_at_vertices": 9}"#).unwrap();
        assert!(c.validate().is_err());
        let c: SimulateConfig = parse_config(r#"{"p": 0}"#).unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("`p`"));
    }

    #[test]
    fn hash_ignores_execution_fields() {
        let a: MeasureConfig = parse_config(r#"{"workers": 1, "out": "x"}"#).unwrap();
        let b: MeasureConfig = parse_config(r#"{"workers": 8, "radii": [1]}"#).unwrap();
        assert_eq!(a.provenance(), b.provenance());
        let c: MeasureConfig = parse_config(r#"{"radii": [2]}"#).unwrap();
        assert_ne!(a.provenance().config_sha256, c.provenance().config_sha256);
    }
}
