//! Dense ReLU networks with a designated profiled layer.
//!
//! Weights are stored `out_dim x in_dim`, row-major. For the profiled layer
//! this is exactly the `s x z` layout used by the flip rule: column `i` holds
//! every outgoing weight of input neuron `i`.
//!
//! The profiled layer ("tau") reads non-negative inputs: either the output of
//! a ReLU layer or, when it is the first layer, the raw features (which must
//! then be non-negative; datasets keep them in `[0, 1]`).

use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_for, stream};
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    #[serde(rename = "none")]
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub in_dim: usize,
    pub out_dim: usize,
    pub activation: Activation,
}

impl LayerSpec {
    pub fn relu(in_dim: usize, out_dim: usize) -> Self {
        LayerSpec {
            in_dim,
            out_dim,
            activation: Activation::Relu,
        }
    }

    pub fn linear(in_dim: usize, out_dim: usize) -> Self {
        LayerSpec {
            in_dim,
            out_dim,
            activation: Activation::Identity,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    /// `out_dim x in_dim`
    pub weights: Tensor,
    pub bias: Tensor,
    pub activation: Activation,
}

impl Dense {
    pub fn zeros(spec: LayerSpec) -> Self {
        Dense {
            weights: Tensor::zeros(vec![spec.out_dim, spec.in_dim]),
            bias: Tensor::zeros(vec![spec.out_dim]),
            activation: spec.activation,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn spec(&self) -> LayerSpec {
        LayerSpec {
            in_dim: self.in_dim(),
            out_dim: self.out_dim(),
            activation: self.activation,
        }
    }

    /// `out = W x + b`, activation applied.
    pub(crate) fn affine_into(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        let n_in = self.in_dim();
        let w = self.weights.data();
        for (o, b) in self.bias.data().iter().enumerate() {
            let row = &w[o * n_in..(o + 1) * n_in];
            let z: f64 = row.iter().zip(input).map(|(a, x)| a * x).sum::<f64>() + b;
            out.push(z);
        }
    }
}

/// Output of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace {
    /// Post-ReLU values entering the profiled layer.
    pub tau_inputs: Vec<f64>,
    pub logits: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    layers: Vec<Dense>,
    tau_index: usize,
    w0_tau: Tensor,
}

impl ModelParams {
    /// He-uniform weights and zero biases, drawn from the model-init stream of `seed`.
    /// The profiled layer's initial weights are snapshotted as `w0_tau`.
    pub fn init(specs: &[LayerSpec], tau_index: usize, seed: u64) -> Result<Self> {
        let mut rng = rng_for(seed, &[stream::MODEL_INIT]);
        let layers = specs
            .iter()
            .map(|&spec| {
                let mut layer = Dense::zeros(spec);
                let limit = (6.0 / spec.in_dim.max(1) as f64).sqrt();
                let dist = Uniform::new_inclusive(-limit, limit)
                    .map_err(|e| Error::Config(format!("weight init: {e}")))?;
                for w in layer.weights.data_mut() {
                    *w = dist.sample(&mut rng);
                }
                Ok(layer)
            })
            .collect::<Result<Vec<_>>>()?;
        let w0_tau = layers
            .get(tau_index)
            .map(|l| l.weights.clone())
            .ok_or_else(|| Error::Config(format!("tau index {tau_index} out of range")))?;
        Self::from_parts(layers, tau_index, w0_tau)
    }

    /// `input -> hidden[0] (ReLU) -> ... -> num_classes`, profiling layer `tau_index`.
    pub fn mlp(
        input_dim: usize,
        hidden: &[usize],
        num_classes: usize,
        tau_index: usize,
        seed: u64,
    ) -> Result<Self> {
        let mut specs = Vec::with_capacity(hidden.len() + 1);
        let mut prev = input_dim;
        for &h in hidden {
            specs.push(LayerSpec::relu(prev, h));
            prev = h;
        }
        specs.push(LayerSpec::linear(prev, num_classes));
        Self::init(&specs, tau_index, seed)
    }

    pub fn from_parts(layers: Vec<Dense>, tau_index: usize, w0_tau: Tensor) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Config("model has no layers".into()));
        }
        for (i, layer) in layers.iter().enumerate() {
            if layer.weights.shape().len() != 2 || layer.bias.len() != layer.out_dim() {
                return Err(Error::Shape(format!(
                    "layer {i} has inconsistent weight/bias shapes"
                )));
            }
            if i > 0 && layers[i - 1].out_dim() != layer.in_dim() {
                return Err(Error::LayerShape {
                    layer: i,
                    expected: layers[i - 1].out_dim(),
                    got: layer.in_dim(),
                });
            }
        }
        if tau_index >= layers.len() {
            return Err(Error::Config(format!(
                "tau index {tau_index} out of range for {} layers",
                layers.len()
            )));
        }
        if tau_index > 0 && layers[tau_index - 1].activation != Activation::Relu {
            return Err(Error::Config(
                "the profiled layer must read the raw input or a ReLU output".into(),
            ));
        }
        if layers[layers.len() - 1].activation != Activation::Identity {
            return Err(Error::Config("output layer must produce raw logits".into()));
        }
        if w0_tau.shape() != layers[tau_index].weights.shape() {
            return Err(Error::Shape(format!(
                "w0 snapshot shape {:?} differs from tau weights {:?}",
                w0_tau.shape(),
                layers[tau_index].weights.shape()
            )));
        }
        Ok(ModelParams {
            layers,
            tau_index,
            w0_tau,
        })
    }

    pub fn layers(&self) -> &[Dense] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Dense] {
        &mut self.layers
    }

    pub fn tau_index(&self) -> usize {
        self.tau_index
    }

    pub fn tau_layer(&self) -> &Dense {
        &self.layers[self.tau_index]
    }

    pub fn w0_tau(&self) -> &Tensor {
        &self.w0_tau
    }

    pub fn set_tau_weights(&mut self, weights: Tensor) -> Result<()> {
        let layer = &mut self.layers[self.tau_index];
        if weights.shape() != layer.weights.shape() {
            return Err(Error::Shape(format!(
                "replacement tau weights {:?} vs {:?}",
                weights.shape(),
                layer.weights.shape()
            )));
        }
        layer.weights = weights;
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn num_classes(&self) -> usize {
        self.layers[self.layers.len() - 1].out_dim()
    }

    pub fn specs(&self) -> Vec<LayerSpec> {
        self.layers.iter().map(Dense::spec).collect()
    }

    pub fn num_params(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    /// All parameters in layer order, weights before bias.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_params());
        for l in &self.layers {
            out.extend_from_slice(l.weights.data());
            out.extend_from_slice(l.bias.data());
        }
        out
    }

    pub(crate) fn param_slices_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out = Vec::with_capacity(2 * self.layers.len());
        for l in &mut self.layers {
            let Dense { weights, bias, .. } = l;
            out.push(weights.data_mut());
            out.push(bias.data_mut());
        }
        out
    }

    /// `self += scale * delta` over the flattened layout.
    pub fn add_scaled(&mut self, delta: &[f64], scale: f64) -> Result<()> {
        if delta.len() != self.num_params() {
            return Err(Error::Shape(format!(
                "delta has {} entries, model has {}",
                delta.len(),
                self.num_params()
            )));
        }
        let mut offset = 0;
        for slice in self.param_slices_mut() {
            for (p, d) in slice.iter_mut().zip(&delta[offset..]) {
                *p += scale * d;
            }
            offset += slice.len();
        }
        Ok(())
    }

    /// Flattened `self - base`.
    pub fn delta_from(&self, base: &ModelParams) -> Result<Vec<f64>> {
        if self.specs() != base.specs() {
            return Err(Error::Shape("models have different architectures".into()));
        }
        Ok(self
            .flatten()
            .iter()
            .zip(base.flatten())
            .map(|(a, b)| a - b)
            .collect())
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.is_finite() && l.bias.is_finite())
    }

    /// Forward pass returning the profiled-layer inputs and the logits.
    pub fn forward(&self, input: &[f64]) -> Result<ForwardTrace> {
        if input.len() != self.input_dim() {
            return Err(Error::LayerShape {
                layer: 0,
                expected: self.input_dim(),
                got: input.len(),
            });
        }
        if self.tau_index == 0 && input.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::Shape(
                "the profiled layer reads the raw input, which must be non-negative".into(),
            ));
        }
        let mut cur = input.to_vec();
        let mut next = Vec::new();
        let mut tau_inputs = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            if i == self.tau_index {
                tau_inputs = cur.clone();
            }
            layer.affine_into(&cur, &mut next);
            if layer.activation == Activation::Relu {
                next.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(ForwardTrace {
            tau_inputs,
            logits: cur,
        })
    }

    /// Index of the largest logit; ties go to the lowest class.
    pub fn predict(&self, input: &[f64]) -> Result<usize> {
        Ok(argmax(&self.forward(input)?.logits))
    }
}

/// Applies a chain of layers to `input`.
pub(crate) fn run_layers(layers: &[Dense], input: &[f64]) -> Vec<f64> {
    let mut cur = input.to_vec();
    let mut next = Vec::new();
    for layer in layers {
        layer.affine_into(&cur, &mut next);
        if layer.activation == Activation::Relu {
            next.iter_mut().for_each(|v| *v = v.max(0.0));
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// First index of the maximum value.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Frobenius norm of one layer's weight matrix.
pub fn layer_l2_norm(model: &ModelParams, layer_index: usize) -> Result<f64> {
    model
        .layers()
        .get(layer_index)
        .map(|l| l.weights.frobenius_norm())
        .ok_or_else(|| Error::Config(format!("layer index {layer_index} out of range")))
}

pub fn forward(model: &ModelParams, input: &[f64]) -> Result<ForwardTrace> {
    model.forward(input)
}
