use rand::seq::SliceRandom;

use crate::data::trigger::{TriggerPart, TriggerSpec};
use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::rng::rng_for;

/// How one malicious client poisons its local data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoisonPolicy {
    /// Fraction of the client's source-label samples to trigger and relabel.
    pub pdr: f64,
    pub trigger_part: TriggerPart,
}

impl PoisonPolicy {
    pub fn new(pdr: f64, trigger_part: TriggerPart) -> Result<Self> {
        if !(0.0..=1.0).contains(&pdr) {
            return Err(Error::Config(format!("pdr must lie in [0, 1], got {pdr}")));
        }
        Ok(PoisonPolicy { pdr, trigger_part })
    }

    /// `ceil(pdr * count)`, tolerant of representation error such as `0.3 * 10`.
    pub fn poison_count(&self, source_count: usize) -> usize {
        let raw = self.pdr * source_count as f64;
        ((raw - 1e-9).ceil().max(0.0) as usize).min(source_count)
    }
}

/// Stamps the policy's trigger part on a random `ceil(pdr * n_source)` subset
/// of source-label samples and relabels them to the target. Other samples
/// are copied unchanged.
pub fn poison_client(
    dataset: &LabeledDataset,
    policy: &PoisonPolicy,
    spec: &TriggerSpec,
    seed: u64,
) -> Result<LabeledDataset> {
    PoisonPolicy::new(policy.pdr, policy.trigger_part)?;
    let mut source = dataset.indices_of(spec.source_label);
    if source.is_empty() {
        return Err(Error::NoSourceSamples(spec.source_label));
    }
    let count = policy.poison_count(source.len());
    let mut out = dataset.clone();
    if count == 0 {
        return Ok(out);
    }
    let mut rng = rng_for(seed, &[]);
    source.shuffle(&mut rng);
    for &i in &source[..count] {
        let image = spec.apply(dataset.image(i), policy.trigger_part)?;
        out.overwrite(i, &image, spec.target_label);
    }
    Ok(out)
}
