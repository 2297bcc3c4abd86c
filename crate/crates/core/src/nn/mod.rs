//! Minimal dense-network engine: forward traces, exact gradients, Adam,
//! accuracy, and checkpoints.

pub mod adam;
pub mod checkpoint;
pub mod grad;
pub mod model;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use grad::{backward, loss, Gradients, LayerGrad};
pub use model::{
    argmax, forward, layer_l2_norm, Activation, Dense, ForwardTrace, LayerSpec, ModelParams,
};

use rayon::prelude::*;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};

/// Fraction of samples whose argmax logit equals the label (ties to the lowest class).
pub fn evaluate_accuracy(model: &ModelParams, dataset: &LabeledDataset) -> Result<f64> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let correct = (0..dataset.len())
        .into_par_iter()
        .map(|i| {
            Ok(usize::from(
                model.predict(dataset.image(i))? == dataset.label(i),
            ))
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(correct as f64 / dataset.len() as f64)
}
