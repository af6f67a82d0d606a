//! Experiment configuration: a TOML document whose every field has a
//! built-in default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cache::DiscoveryStrategy;
use crate::error::{Error, Result};
use crate::power::HardwareConfig;
use crate::sim::SimParams;
use crate::topology::{AccessTreeSpec, LinkSpeeds, SynthSpec};
use crate::types::Architecture;
use crate::workload::Catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Fig3,
    Fig6,
    Fig8,
    Fig9,
    SweepBudget,
    SweepZipf,
    SweepDiscovery,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Fig3,
        ExperimentKind::Fig6,
        ExperimentKind::Fig8,
        ExperimentKind::Fig9,
        ExperimentKind::SweepBudget,
        ExperimentKind::SweepZipf,
        ExperimentKind::SweepDiscovery,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Fig3 => "fig3",
            ExperimentKind::Fig6 => "fig6",
            ExperimentKind::Fig8 => "fig8",
            ExperimentKind::Fig9 => "fig9",
            ExperimentKind::SweepBudget => "sweep_budget",
            ExperimentKind::SweepZipf => "sweep_zipf",
            ExperimentKind::SweepDiscovery => "sweep_discovery",
        }
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologyConfig {
    /// PoP map file; when absent a synthetic graph is generated.
    pub file: Option<PathBuf>,
    pub synth: SynthSpec,
    pub tree: AccessTreeSpec,
    pub links: LinkSpeeds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkloadConfig {
    pub catalog: Catalog,
    pub queries: usize,
    pub alpha: f64,
    /// Pre-generated trace; overrides `queries` and `alpha`.
    pub trace_file: Option<PathBuf>,
}

impl Default for WorkloadConfig {
    fn default() -> Self {
        Self {
            catalog: Catalog::default(),
            queries: 500_000,
            alpha: 0.99,
            trace_file: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CachingConfig {
    pub budget: f64,
    pub edge_strategy: DiscoveryStrategy,
    pub pervasive_strategy: DiscoveryStrategy,
}

impl Default for CachingConfig {
    fn default() -> Self {
        Self {
            budget: 0.05,
            edge_strategy: DiscoveryStrategy::SimpleEdge,
            pervasive_strategy: DiscoveryStrategy::OnPath,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3Config {
    pub link_gbps: Vec<f64>,
    /// FIB sizes of the NDN variants.
    pub ndn_prefixes: Vec<f64>,
    /// Bloom-filter bits per prefix, capped by the SRAM device size.
    pub bloom_bits_per_prefix: f64,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self {
            link_gbps: vec![1.0, 2.0, 5.0, 10.0, 20.0, 40.0],
            ndn_prefixes: vec![500e3, 5e6, 50e6],
            bloom_bits_per_prefix: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig6Config {
    pub utilization: f64,
    pub core_cache_bytes: f64,
    pub edge_cache_bytes: f64,
    pub object_size: f64,
}

impl Default for Fig6Config {
    fn default() -> Self {
        Self {
            utilization: 1.0,
            core_cache_bytes: 1e12,
            edge_cache_bytes: 256e9,
            object_size: 1e6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig8Config {
    /// Number of synthetic topologies (seeds `seed`, `seed + 1`, ...) when
    /// no topology files are listed.
    pub topologies: usize,
    pub files: Vec<PathBuf>,
}

impl Default for Fig8Config {
    fn default() -> Self {
        Self {
            topologies: 3,
            files: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub budgets: Vec<f64>,
    pub alphas: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            budgets: vec![0.0, 0.05, 0.1, 0.25, 0.5, 0.76, 1.0],
            alphas: vec![0.6, 0.8, 0.99, 1.1, 1.3, 1.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub svg: bool,
    /// Write each run's per-node EnergyReport as JSON.
    pub json_reports: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            svg: true,
            json_reports: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    pub archs: Vec<Architecture>,
    pub topology: TopologyConfig,
    pub workload: WorkloadConfig,
    pub caching: CachingConfig,
    pub sim: SimParams,
    pub hardware: HardwareConfig,
    pub fig3: Fig3Config,
    pub fig6: Fig6Config,
    pub fig8: Fig8Config,
    pub sweeps: SweepConfig,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            out_dir: PathBuf::from("results"),
            jobs: 0,
            archs: Architecture::ALL.to_vec(),
            topology: TopologyConfig::default(),
            workload: WorkloadConfig::default(),
            caching: CachingConfig::default(),
            sim: SimParams::default(),
            hardware: HardwareConfig::default(),
            fig3: Fig3Config::default(),
            fig6: Fig6Config::default(),
            fig8: Fig8Config::default(),
            sweeps: SweepConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = cfg.topology.file.as_mut() {
            rebase(p);
        }
        if let Some(p) = cfg.workload.trace_file.as_mut() {
            rebase(p);
        }
        cfg.fig8.files.iter_mut().for_each(rebase);
        cfg.check_files()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(format!("cannot serialize config: {e}")))
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> Result<String> {
        let json = serde_json::to_vec(self)?;
        Ok(hex::encode(Sha256::digest(&json)))
    }

    pub fn validate(&self) -> Result<()> {
        if self.archs.is_empty() {
            return Err(Error::config("`archs` must not be empty"));
        }
        self.topology.tree.validate()?;
        self.workload.catalog.validate()?;
        if !(self.workload.alpha >= 0.0) {
            return Err(Error::config("workload.alpha must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.caching.budget) {
            return Err(Error::config("caching.budget must lie in [0, 1]"));
        }
        if self.caching.edge_strategy.placement() != crate::cache::Placement::Edge {
            return Err(Error::config("caching.edge_strategy must be an edge strategy"));
        }
        if self.caching.pervasive_strategy.placement() != crate::cache::Placement::Pervasive {
            return Err(Error::config("caching.pervasive_strategy must be a pervasive strategy"));
        }
        self.sim.validate()?;
        self.hardware.validate()?;
        if self.fig3.link_gbps.is_empty() || self.fig3.link_gbps.iter().any(|&g| !(g > 0.0)) {
            return Err(Error::config("fig3.link_gbps must be a non-empty list of positive speeds"));
        }
        if self.fig3.ndn_prefixes.iter().any(|&n| !(n > 0.0)) {
            return Err(Error::config("fig3.ndn_prefixes must be positive"));
        }
        if !(self.fig3.bloom_bits_per_prefix > 0.0) {
            return Err(Error::NonPositive("fig3.bloom_bits_per_prefix"));
        }
        if !(self.fig6.utilization > 0.0 && self.fig6.utilization <= 1.0) {
            return Err(Error::config("fig6.utilization must lie in (0, 1]"));
        }
        if !(self.fig6.object_size > 0.0) {
            return Err(Error::NonPositive("fig6.object_size"));
        }
        if self.fig8.topologies == 0 && self.fig8.files.is_empty() {
            return Err(Error::config("fig8 needs at least one topology"));
        }
        if self.sweeps.budgets.is_empty() || self.sweeps.budgets.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::config("sweeps.budgets must be a non-empty list in [0, 1]"));
        }
        if self.sweeps.alphas.is_empty() || self.sweeps.alphas.iter().any(|a| !(*a >= 0.0)) {
            return Err(Error::config("sweeps.alphas must be a non-empty list of values >= 0"));
        }
        Ok(())
    }

    fn check_files(&self) -> Result<()> {
        let files = self
            .topology
            .file
            .iter()
            .chain(self.workload.trace_file.iter())
            .chain(self.fig8.files.iter());
        for f in files {
            if !f.is_file() {
                return Err(Error::config(format!("referenced file {} does not exist", f.display())));
            }
        }
        Ok(())
    }

    /// Independent seed for one purpose, derived from the master seed.
    pub fn sub_seed(&self, stream: u64) -> u64 {
        // SplitMix64 finalizer over (seed, stream).
        let mut z = self.seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}
