//! Mean softmax cross-entropy and its exact gradient for the dense/ReLU chain.

use crate::error::{Error, Result};
use crate::nn::model::{Activation, ModelParams};
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq)]
pub struct LayerGrad {
    pub weights: Tensor,
    pub bias: Tensor,
}

/// Gradients shaped like the model's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGrad>,
}

impl Gradients {
    pub fn zeros_like(model: &ModelParams) -> Self {
        Gradients {
            layers: model
                .layers()
                .iter()
                .map(|l| LayerGrad {
                    weights: Tensor::zeros(l.weights.shape().to_vec()),
                    bias: Tensor::zeros(l.bias.shape().to_vec()),
                })
                .collect(),
        }
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|g| g.weights.data().iter().chain(g.bias.data()).copied())
            .collect()
    }

    pub(crate) fn slices(&self) -> Vec<&[f64]> {
        self.layers
            .iter()
            .flat_map(|g| [g.weights.data(), g.bias.data()])
            .collect()
    }

    pub fn norm(&self) -> f64 {
        self.flatten().iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// `log(sum(exp(z)))`, shifted by the max for stability.
fn log_sum_exp(z: &[f64]) -> f64 {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + z.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

fn check_batch(model: &ModelParams, inputs: &[&[f64]], labels: &[usize]) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if inputs.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} inputs but {} labels",
            inputs.len(),
            labels.len()
        )));
    }
    let k = model.num_classes();
    if let Some(&label) = labels.iter().find(|&&y| y >= k) {
        return Err(Error::LabelOutOfRange {
            label,
            num_classes: k,
        });
    }
    if let Some(x) = inputs.iter().find(|x| x.len() != model.input_dim()) {
        return Err(Error::LayerShape {
            layer: 0,
            expected: model.input_dim(),
            got: x.len(),
        });
    }
    Ok(())
}

/// Mean cross-entropy of the batch.
pub fn loss(model: &ModelParams, inputs: &[&[f64]], labels: &[usize]) -> Result<f64> {
    check_batch(model, inputs, labels)?;
    let mut total = 0.0;
    for (x, &y) in inputs.iter().zip(labels) {
        let logits = model.forward(x)?.logits;
        total += log_sum_exp(&logits) - logits[y];
    }
    Ok(total / inputs.len() as f64)
}

/// Mean cross-entropy and its gradient with respect to every parameter.
pub fn backward(
    model: &ModelParams,
    inputs: &[&[f64]],
    labels: &[usize],
) -> Result<(f64, Gradients)> {
    check_batch(model, inputs, labels)?;
    let layers = model.layers();
    let scale = 1.0 / inputs.len() as f64;
    let mut grads = Gradients::zeros_like(model);
    let mut total = 0.0;

    // activations[l] is the input to layer l; activations[L] the logits.
    let mut activations: Vec<Vec<f64>> = vec![Vec::new(); layers.len() + 1];
    for (x, &y) in inputs.iter().zip(labels) {
        activations[0].clear();
        activations[0].extend_from_slice(x);
        for (l, layer) in layers.iter().enumerate() {
            let (head, tail) = activations.split_at_mut(l + 1);
            layer.affine_into(&head[l], &mut tail[0]);
            if layer.activation == Activation::Relu {
                tail[0].iter_mut().for_each(|v| *v = v.max(0.0));
            }
        }

        let logits = &activations[layers.len()];
        let lse = log_sum_exp(logits);
        total += lse - logits[y];
        let mut delta: Vec<f64> = logits.iter().map(|z| (z - lse).exp() * scale).collect();
        delta[y] -= scale;

        for l in (0..layers.len()).rev() {
            let input = &activations[l];
            let g = &mut grads.layers[l];
            let n_in = input.len();
            let gw = g.weights.data_mut();
            for (o, d) in delta.iter().enumerate() {
                if *d == 0.0 {
                    continue;
                }
                let row = &mut gw[o * n_in..(o + 1) * n_in];
                for (w, a) in row.iter_mut().zip(input) {
                    *w += d * a;
                }
            }
            for (b, d) in g.bias.data_mut().iter_mut().zip(&delta) {
                *b += d;
            }
            if l == 0 {
                break;
            }
            let w = layers[l].weights.data();
            let mut prev = vec![0.0; n_in];
            for (o, d) in delta.iter().enumerate() {
                if *d == 0.0 {
                    continue;
                }
                for (p, wv) in prev.iter_mut().zip(&w[o * n_in..(o + 1) * n_in]) {
                    *p += d * wv;
                }
            }
            if layers[l - 1].activation == Activation::Relu {
                for (p, a) in prev.iter_mut().zip(input) {
                    if *a <= 0.0 {
                        *p = 0.0;
                    }
                }
            }
            delta = prev;
        }
    }
    Ok((total * scale, grads))
}
