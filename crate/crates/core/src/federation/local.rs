use rand::seq::SliceRandom;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::nn::{backward, AdamConfig, AdamState, ModelParams};
use crate::rng::rng_for;

/// One client's parameter delta for a round.
#[derive(Debug, Clone, PartialEq)]
pub struct ClientUpdate {
    pub client_id: usize,
    /// Local sample count.
    pub n_k: usize,
    /// Flattened `trained - broadcast`, in [`ModelParams::flatten`] order.
    pub delta: Vec<f64>,
}

/// Trains a private copy of `global` for `epochs` passes of shuffled
/// mini-batches with a fresh Adam state and returns the parameter delta.
pub fn local_train(
    global: &ModelParams,
    dataset: &LabeledDataset,
    epochs: usize,
    batch_size: usize,
    adam: AdamConfig,
    seed: u64,
    client_id: usize,
) -> Result<ClientUpdate> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if batch_size == 0 {
        return Err(Error::Config("batch_size must be positive".into()));
    }
    let mut model = global.clone();
    let mut state = AdamState::for_model(adam, &model);
    let mut rng = rng_for(seed, &[]);
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(batch_size) {
            let inputs: Vec<&[f64]> = chunk.iter().map(|&i| dataset.image(i)).collect();
            let labels: Vec<usize> = chunk.iter().map(|&i| dataset.label(i)).collect();
            let (_, grads) = backward(&model, &inputs, &labels)?;
            state.step(&mut model, &grads)?;
        }
    }
    if !model.is_finite() {
        return Err(Error::NonFinite("local training"));
    }
    Ok(ClientUpdate {
        client_id,
        n_k: dataset.len(),
        delta: model.delta_from(global)?,
    })
}
