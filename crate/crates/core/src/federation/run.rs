use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{
    poison_client, LabeledDataset, PartitionPlan, PoisonPolicy, TriggerPart, TriggerSpec,
};
use crate::error::{Error, Result};
use crate::federation::aggregate::{aggregate, AggregatorKind};
use crate::federation::config::RoundConfig;
use crate::federation::local::{local_train, ClientUpdate};
use crate::metrics::{compute_acc, compute_asr};
use crate::nn::ModelParams;
use crate::rng::{derive_seed, rng_for, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackMode {
    /// Every malicious client stamps the whole trigger.
    Cba,
    /// Malicious clients stamp trigger parts, assigned round-robin by client id.
    Dba,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attack {
    pub trigger: TriggerSpec,
    pub pdr: f64,
    pub mode: AttackMode,
}

impl Attack {
    pub fn policy_for(&self, client_id: usize) -> Result<PoisonPolicy> {
        let part = match self.mode {
            AttackMode::Cba => TriggerPart::Full,
            AttackMode::Dba if self.trigger.num_parts() == 0 => TriggerPart::Full,
            AttackMode::Dba => TriggerPart::Part(client_id % self.trigger.num_parts()),
        };
        PoisonPolicy::new(self.pdr, part)
    }
}

/// Materializes each client's local dataset. Clients `0..num_malicious` are
/// malicious and poison their share; a malicious client that holds no
/// source-label samples has nothing to poison and trains on clean data.
pub fn client_datasets(
    train: &LabeledDataset,
    partition: &PartitionPlan,
    attack: Option<&Attack>,
    num_malicious: usize,
    seed: u64,
) -> Result<Vec<LabeledDataset>> {
    partition
        .assignments
        .par_iter()
        .enumerate()
        .map(|(k, idx)| {
            let local = train.subset(idx);
            match attack {
                Some(attack) if k < num_malicious => {
                    let policy = attack.policy_for(k)?;
                    let client_seed = derive_seed(seed, &[stream::POISON, k as u64]);
                    match poison_client(&local, &policy, &attack.trigger, client_seed) {
                        Err(Error::NoSourceSamples(_)) => Ok(local),
                        other => other,
                    }
                }
                _ => Ok(local),
            }
        })
        .collect()
}

/// Held-out data used to log per-round metrics.
#[derive(Debug, Clone, Copy)]
pub struct Monitor<'a> {
    pub test: &'a LabeledDataset,
    pub trigger: Option<&'a TriggerSpec>,
}

impl Monitor<'_> {
    pub fn measure(&self, model: &ModelParams) -> Result<(f64, Option<f64>)> {
        let acc = compute_acc(model, self.test)?;
        let asr = self
            .trigger
            .map(|t| compute_asr(model, self.test, t))
            .transpose()?;
        Ok((acc, asr))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub acc: f64,
    pub asr: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainingOutcome {
    pub model: ModelParams,
    pub history: Vec<RoundRecord>,
}

fn sampled_clients(config: &RoundConfig, round: usize) -> Vec<usize> {
    if config.sampled_per_round == config.num_clients {
        return (0..config.num_clients).collect();
    }
    let mut rng = rng_for(config.seed, &[stream::CLIENT_SAMPLING, round as u64]);
    let mut chosen =
        index::sample(&mut rng, config.num_clients, config.sampled_per_round).into_vec();
    chosen.sort_unstable();
    chosen
}

/// Runs `config.rounds` rounds of broadcast, local training and aggregation.
///
/// Local training fans out across the rayon pool; each client trains an
/// isolated copy with its own `(seed, round, client)` stream and updates are
/// aggregated in client order, so the result does not depend on thread count.
pub fn run_training(
    config: &RoundConfig,
    initial: ModelParams,
    clients: &[LabeledDataset],
    aggregator: &AggregatorKind,
    monitor: Option<&Monitor<'_>>,
) -> Result<TrainingOutcome> {
    config.validate()?;
    if clients.len() != config.num_clients {
        return Err(Error::Config(format!(
            "{} client datasets for {} clients",
            clients.len(),
            config.num_clients
        )));
    }
    let malicious = config.num_malicious()?;
    let mut model = initial;
    let mut history = Vec::with_capacity(config.rounds);
    for round in 0..config.rounds {
        let selected = sampled_clients(config, round);
        let updates = selected
            .par_iter()
            .map(|&k| {
                let seed = derive_seed(
                    config.seed,
                    &[stream::LOCAL_SHUFFLE, round as u64, k as u64],
                );
                local_train(
                    &model,
                    &clients[k],
                    config.local_epochs,
                    config.batch_size,
                    config.adam,
                    seed,
                    k,
                )
            })
            .collect::<Result<Vec<ClientUpdate>>>()?;
        model = aggregate(aggregator, &updates, &model, config.global_lr, malicious)?;
        if !model.is_finite() {
            return Err(Error::NonFinite("aggregation"));
        }
        if let Some(monitor) = monitor {
            let (acc, asr) = monitor.measure(&model)?;
            history.push(RoundRecord {
                round: round + 1,
                acc,
                asr,
            });
        }
    }
    Ok(TrainingOutcome { model, history })
}
