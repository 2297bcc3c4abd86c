use crate::data::LabeledDataset;
use crate::defense::flip::{zero_columns, FlipSet};
use crate::defense::profile::profile_activations;
use crate::error::{Error, Result};
use crate::nn::ModelParams;

/// Pruning baseline: zeroes the profiled-layer weight columns of neurons whose
/// mean activation on `aux` is at most `lambda`. Returns the pruned model and
/// the pruned neuron set.
pub fn prune_low_activation(
    model: &ModelParams,
    aux: &LabeledDataset,
    lambda: f64,
) -> Result<(ModelParams, FlipSet)> {
    if !(lambda >= 0.0) {
        return Err(Error::Config(format!(
            "pruning threshold must be >= 0, got {lambda}"
        )));
    }
    let profile = profile_activations(model, aux)?;
    let pruned = FlipSet::at_threshold(&profile, lambda);
    let mut out = model.clone();
    out.set_tau_weights(zero_columns(&model.tau_layer().weights, &pruned)?)?;
    Ok((out, pruned))
}
