use rayon::prelude::*;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::nn::ModelParams;

/// Mean post-ReLU input of each profiled-layer neuron over a clean set.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationProfile {
    pub x: Vec<f64>,
    pub mu: f64,
}

impl ActivationProfile {
    pub fn from_means(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Shape("activation profile has no neurons".into()));
        }
        if x.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::Shape(
                "activation means must be finite and non-negative".into(),
            ));
        }
        let mu = x.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(ActivationProfile { x, mu })
    }

    pub fn max(&self) -> f64 {
        self.x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Profiled-layer inputs of every sample, in dataset order.
pub(crate) fn tau_inputs(model: &ModelParams, data: &LabeledDataset) -> Result<Vec<Vec<f64>>> {
    (0..data.len())
        .into_par_iter()
        .map(|i| model.forward(data.image(i)).map(|t| t.tau_inputs))
        .collect()
}

/// Averages the profiled-layer inputs over `aux`. Per-sample traces may be
/// computed in parallel; the sum runs in sample order.
pub fn profile_activations(model: &ModelParams, aux: &LabeledDataset) -> Result<ActivationProfile> {
    if aux.is_empty() {
        return Err(Error::EmptyDataset);
    }
    profile_from_inputs(&tau_inputs(model, aux)?)
}

pub(crate) fn profile_from_inputs(inputs: &[Vec<f64>]) -> Result<ActivationProfile> {
    let z = inputs.first().map_or(0, Vec::len);
    let mut sums = vec![0.0; z];
    for row in inputs {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    let n = inputs.len() as f64;
    ActivationProfile::from_means(sums.into_iter().map(|s| s / n).collect())
}
