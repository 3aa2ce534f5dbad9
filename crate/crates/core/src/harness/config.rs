use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::ChannelConfig;
use crate::pilots::{cds_family, is_cds, PilotPattern};
use crate::recovery::{Method, RecoveryConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Subcarriers `N`.
    pub n_total: usize,
    /// Pilot subcarriers `Np`.
    pub n_pilots: usize,
    /// Channel span `L`, bounded by the cyclic prefix.
    pub channel_length: usize,
    /// Nonzero taps `K`.
    pub sparsity: usize,
    /// Recorded for reference; channels are redrawn independently per trial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doppler_hz: Option<f64>,
}

impl SystemConfig {
    pub fn channel(&self) -> ChannelConfig {
        ChannelConfig {
            length: self.channel_length,
            sparsity: self.sparsity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PilotMode {
    Cds,
    RandomSearch,
    Random,
}

impl PilotMode {
    pub fn name(self) -> &'static str {
        match self {
            PilotMode::Cds => "cds",
            PilotMode::RandomSearch => "random-search",
            PilotMode::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PilotConfig {
    pub mode: PilotMode,
    /// Draws for `random-search`.
    #[serde(default = "default_search_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub shift: i64,
    #[serde(default = "default_multiplier")]
    pub multiplier: i64,
    /// Base CDS file; the shipped set for `n_total` is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_set: Option<PathBuf>,
    /// Index origin of `base_set` (0 or 1).
    #[serde(default)]
    pub index_base: usize,
}

fn default_search_iterations() -> usize {
    1000
}

fn default_multiplier() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub trials_per_point: usize,
    pub snr_grid_db: Vec<f64>,
    pub methods: Vec<Method>,
    /// Disables noise: every grid point runs at infinite SNR.
    #[serde(default)]
    pub noiseless: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    pub system: SystemConfig,
    pub pilots: PilotConfig,
    #[serde(default)]
    pub recovery: RecoveryConfig,
}

const PRESETS: &[(&str, &str)] = &[
    ("baseline", include_str!("../../configs/baseline.toml")),
    ("placement-cds", include_str!("../../configs/placement_cds.toml")),
    ("placement-random-search", include_str!("../../configs/placement_random_search.toml")),
    ("placement-random", include_str!("../../configs/placement_random.toml")),
    ("large-cds", include_str!("../../configs/large_cds.toml")),
    ("large-random", include_str!("../../configs/large_random.toml")),
];

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn preset_names() -> impl Iterator<Item = &'static str> {
        PRESETS.iter().map(|(name, _)| *name)
    }

    pub fn preset(name: &str) -> Result<Self> {
        let text = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown preset {name:?}")))?;
        Self::from_toml(text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        let s = &self.system;
        if self.trials_per_point == 0 {
            return bad("trials_per_point must be at least 1".into());
        }
        if self.snr_grid_db.is_empty() {
            return bad("snr_grid_db is empty".into());
        }
        if self.methods.is_empty() {
            return bad("no methods configured".into());
        }
        if s.n_pilots == 0 || s.n_pilots > s.n_total {
            return bad(format!("need 1 <= Np <= N, got Np={} N={}", s.n_pilots, s.n_total));
        }
        if s.sparsity == 0 || s.sparsity > s.channel_length || s.channel_length > s.n_total {
            return bad(format!(
                "need 1 <= K <= L <= N, got K={} L={} N={}",
                s.sparsity, s.channel_length, s.n_total
            ));
        }
        if self.pilots.mode == PilotMode::RandomSearch && self.pilots.iterations == 0 {
            return bad("random-search needs at least one iteration".into());
        }
        self.recovery.validate()
    }

    /// Base CDS for `cds` mode, transformed by the configured shift and
    /// multiplier and checked to be a difference set.
    pub fn cds_pattern(&self) -> Result<PilotPattern> {
        let n = self.system.n_total;
        let base = match &self.pilots.base_set {
            Some(path) => PilotPattern::load(n, path, self.pilots.index_base)?,
            None => PilotPattern::known_cds(n).ok_or_else(|| {
                Error::InvalidConfig(format!("no shipped CDS for N={n}; set pilots.base_set"))
            })?,
        };
        if base.n_pilots() != self.system.n_pilots {
            return Err(Error::InvalidConfig(format!(
                "base set has {} pilots, system expects {}",
                base.n_pilots(),
                self.system.n_pilots
            )));
        }
        if is_cds(&base).is_none() {
            return Err(Error::InvalidPattern("base set is not a cyclic difference set".into()));
        }
        cds_family(&base, self.pilots.shift, self.pilots.multiplier)
    }
}
