//! Experiment configuration (TOML). Unknown keys are rejected.
//!
//! ```toml
//! seed = 7
//! output_dir = "runs/cba"
//! aux_per_class = 20
//!
//! [dataset]
//! kind = "synthetic"        # or "idx" with train_images/train_labels/test_images/test_labels
//! num_classes = 10
//! dim = 144
//! train_per_class = 2560
//! test_per_class = 200
//!
//! [model]
//! hidden = [128, 64]
//! tau_layer = 0
//!
//! [rounds]
//! num_clients = 10
//! sampled_per_round = 10
//! rounds = 50
//! mcr = 0.4
//!
//! [partition]
//! mode = "iid"              # or mode = "dirichlet", alpha = 0.5
//!
//! [attack]
//! mode = "cba"              # or "dba"
//! pdr = 0.3
//!
//! [trigger]
//! source_label = 0
//! target_label = 5
//! # pixels = [[0, 0, 1.0], ...] and part_boundaries = [4] override the default pattern
//!
//! [aggregator]
//! kind = "fedavg"           # krum, median, trimmed_mean, rlr
//!
//! [defense]
//! kind = "flain"            # none, pruning (lambda), flain (step, rho)
//! rho = 0.01
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{BlobConfig, PartitionMode, TriggerConfig, TriggerSpec};
use crate::defense::FlainConfig;
use crate::error::{Error, Result};
use crate::federation::{AggregatorKind, AttackMode, RoundConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DatasetSource {
    Synthetic {
        #[serde(default = "ten")]
        num_classes: usize,
        dim: usize,
        train_per_class: usize,
        test_per_class: usize,
        #[serde(default)]
        blobs: BlobConfig,
    },
    Idx {
        train_images: PathBuf,
        train_labels: PathBuf,
        test_images: PathBuf,
        test_labels: PathBuf,
    },
}

fn ten() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub hidden: Vec<usize>,
    /// Index of the profiled layer; 0 is the first dense layer.
    pub tau_layer: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            hidden: vec![128, 64],
            tau_layer: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackConfig {
    pub mode: AttackMode,
    pub pdr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriggerSection {
    pub source_label: usize,
    pub target_label: usize,
    /// `[row, col, intensity]` triples; the two-corner-block default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pixels: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part_boundaries: Option<Vec<usize>>,
}

impl TriggerSection {
    pub fn build(&self, grid: (usize, usize)) -> Result<TriggerSpec> {
        match &self.pixels {
            None if self.part_boundaries.is_some() => Err(Error::Config(
                "trigger.part_boundaries needs explicit trigger.pixels".into(),
            )),
            None => TriggerSpec::corner_blocks(grid, self.source_label, self.target_label),
            Some(pixels) => TriggerSpec::from_config(
                &TriggerConfig {
                    pixels: pixels.clone(),
                    part_boundaries: self.part_boundaries.clone().unwrap_or_default(),
                    source_label: self.source_label,
                    target_label: self.target_label,
                },
                grid,
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DefenseConfig {
    #[default]
    None,
    Pruning {
        lambda: f64,
    },
    Flain {
        #[serde(default = "default_step")]
        step: f64,
        #[serde(default = "default_rho")]
        rho: f64,
    },
}

fn default_step() -> f64 {
    FlainConfig::default().step
}

fn default_rho() -> f64 {
    FlainConfig::default().rho
}

impl DefenseConfig {
    pub fn name(&self) -> &'static str {
        match self {
            DefenseConfig::None => "none",
            DefenseConfig::Pruning { .. } => "pruning",
            DefenseConfig::Flain { .. } => "flain",
        }
    }
}

fn default_aux() -> usize {
    20
}

fn default_aggregator() -> AggregatorKind {
    AggregatorKind::Fedavg
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub dataset: DatasetSource,
    #[serde(default)]
    pub model: ModelConfig,
    /// `rounds.seed` is ignored; the top-level seed drives every stream.
    pub rounds: RoundConfig,
    #[serde(default = "default_partition")]
    pub partition: PartitionMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackConfig>,
    /// Pattern used for poisoning and for measuring ASR (also on clean runs).
    pub trigger: TriggerSection,
    #[serde(default = "default_aggregator")]
    pub aggregator: AggregatorKind,
    #[serde(default)]
    pub defense: DefenseConfig,
    #[serde(default = "default_aux")]
    pub aux_per_class: usize,
}

fn default_partition() -> PartitionMode {
    PartitionMode::Iid
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::ConfigParse {
            path: origin.to_path_buf(),
            source: Box::new(e),
        })?;
        cfg.rounds.seed = cfg.seed;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(format!("serializing config: {e}")))
    }

    /// Desk-scale backdoor scenario: 12x12 blobs, 10 IID clients, 40% malicious,
    /// 30% poisoned source samples, centralized trigger (0 -> 5), FedAvg, FLAIN.
    pub fn desk_scale(seed: u64, output_dir: impl Into<PathBuf>) -> Self {
        let mut rounds = RoundConfig::new(10, 50, 0.4, seed);
        rounds.seed = seed;
        ExperimentConfig {
            seed,
            output_dir: output_dir.into(),
            dataset: DatasetSource::Synthetic {
                num_classes: 10,
                dim: 144,
                train_per_class: 2560,
                test_per_class: 200,
                blobs: BlobConfig::default(),
            },
            model: ModelConfig::default(),
            rounds,
            partition: PartitionMode::Iid,
            attack: Some(AttackConfig {
                mode: AttackMode::Cba,
                pdr: 0.3,
            }),
            trigger: TriggerSection {
                source_label: 0,
                target_label: 5,
                pixels: None,
                part_boundaries: None,
            },
            aggregator: AggregatorKind::Fedavg,
            defense: DefenseConfig::Flain {
                step: 1e-4,
                rho: 0.01,
            },
            aux_per_class: 20,
        }
    }

    /// Checks every referenced class id against `num_classes` and the numeric knobs.
    pub fn validate(&self, num_classes: usize) -> Result<()> {
        self.rounds.validate()?;
        let t = &self.trigger;
        for (name, label) in [
            ("source_label", t.source_label),
            ("target_label", t.target_label),
        ] {
            if label >= num_classes {
                return Err(Error::Config(format!(
                    "trigger.{name} = {label} but the dataset has {num_classes} classes"
                )));
            }
        }
        if let Some(a) = &self.attack {
            if !(0.0..=1.0).contains(&a.pdr) {
                return Err(Error::Config(format!(
                    "attack.pdr {} outside [0, 1]",
                    a.pdr
                )));
            }
        }
        match self.defense {
            DefenseConfig::Flain { step, rho } => FlainConfig { step, rho }.validate()?,
            DefenseConfig::Pruning { lambda } if !(lambda >= 0.0) => {
                return Err(Error::Config("pruning lambda must be >= 0".into()))
            }
            _ => {}
        }
        if self.aux_per_class == 0 {
            return Err(Error::Config("aux_per_class must be positive".into()));
        }
        Ok(())
    }
}
