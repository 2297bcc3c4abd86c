use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::AdamConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundConfig {
    pub num_clients: usize,
    /// Clients sampled per round; equal to `num_clients` for full participation.
    pub sampled_per_round: usize,
    #[serde(default = "one")]
    pub global_lr: f64,
    #[serde(default = "one_usize")]
    pub local_epochs: usize,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    pub rounds: usize,
    /// Fraction of clients that are malicious.
    #[serde(default)]
    pub mcr: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub adam: AdamConfig,
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

fn default_batch() -> usize {
    256
}

impl RoundConfig {
    pub fn new(num_clients: usize, rounds: usize, mcr: f64, seed: u64) -> Self {
        RoundConfig {
            num_clients,
            sampled_per_round: num_clients,
            global_lr: 1.0,
            local_epochs: 1,
            batch_size: 256,
            rounds,
            mcr,
            seed,
            adam: AdamConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sampled_per_round == 0 || self.sampled_per_round > self.num_clients {
            return Err(Error::Config(format!(
                "need 0 < sampled_per_round ({}) <= num_clients ({})",
                self.sampled_per_round, self.num_clients
            )));
        }
        if !(self.global_lr > 0.0) {
            return Err(Error::Config("global_lr must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be positive".into()));
        }
        self.num_malicious().map(|_| ())
    }

    /// `mcr * num_clients`, which must be a whole number of clients.
    pub fn num_malicious(&self) -> Result<usize> {
        let raw = self.mcr * self.num_clients as f64;
        let count = raw.round();
        if !(0.0..=1.0).contains(&self.mcr) || (raw - count).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "mcr {} of {} clients is not a whole number of clients",
                self.mcr, self.num_clients
            )));
        }
        Ok(count as usize)
    }
}
