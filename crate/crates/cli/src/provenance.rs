use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "bgrw";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifies the run that produced an output file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    /// SHA-256 of the command name and the normalized config JSON.
    pub config_sha256: String,
    pub master_seed: Option<u64>,
}

impl Provenance {
    /// `normalized` is the config re-serialized after defaults were filled in,
    /// so equivalent config files hash alike.
    pub fn new(command: &str, normalized: &str, master_seed: Option<u64>) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update(b"\n");
        h.update(normalized.as_bytes());
        Self {
            tool: TOOL.into(),
            version: VERSION.into(),
            config_sha256: hex::encode(h.finalize()),
            master_seed,
        }
    }

    fn line(&self) -> String {
        let seed = self.master_seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!(
            "{} {} config_sha256={} master_seed={}",
            self.tool, self.version, self.config_sha256, seed
        )
    }

    /// `# ...` line that starts every CSV file.
    pub fn csv_comment(&self) -> String {
        format!("# {}\n", self.line())
    }

    pub fn dot_comment(&self) -> String {
        format!("// {}\n", self.line())
    }

    /// Recovers the master seed from a header line written by this tool.
    pub fn seed_from_header(text: &str) -> Option<u64> {
        let line = text.lines().next()?;
        let value = line.split_whitespace().find_map(|w| w.strip_prefix("master_seed="))?;
        value.parse().ok()
    }
}
