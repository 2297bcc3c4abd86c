use rand::seq::index;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::rng::{rng_for, stream};

/// Small class-balanced clean set held by the server.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliarySet {
    pub per_class: usize,
    pub dataset: LabeledDataset,
    /// Positions of the drawn samples in the source dataset.
    pub indices: Vec<usize>,
}

/// Draws `per_class` samples of every class without replacement.
pub fn sample_auxiliary(
    dataset: &LabeledDataset,
    per_class: usize,
    seed: u64,
) -> Result<AuxiliarySet> {
    if per_class == 0 {
        return Err(Error::Config("auxiliary per_class must be positive".into()));
    }
    let mut rng = rng_for(seed, &[stream::AUXILIARY]);
    let mut indices = Vec::with_capacity(per_class * dataset.num_classes());
    for class in 0..dataset.num_classes() {
        let pool = dataset.indices_of(class);
        if pool.len() < per_class {
            return Err(Error::InsufficientClass {
                class,
                available: pool.len(),
                requested: per_class,
            });
        }
        let mut chosen: Vec<usize> = index::sample(&mut rng, pool.len(), per_class)
            .into_iter()
            .map(|k| pool[k])
            .collect();
        chosen.sort_unstable();
        indices.extend(chosen);
    }
    Ok(AuxiliarySet {
        per_class,
        dataset: dataset.subset(&indices),
        indices,
    })
}
