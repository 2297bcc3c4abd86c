//! Flipping the training updates of low-activation input neurons, with a
//! threshold that grows until clean accuracy on the auxiliary set degrades.
//!
//! Loop, for the profiled layer with trained weights `W` and initial `W0`:
//!
//! 1. `n0 = ||W||_F`, profile `x` on the auxiliary set, `mu = min x`,
//!    `lambda = mu + step`, `acc0 = accuracy(model)`.
//! 2. Flip every column with `x_i <= lambda` and measure `acc1`.
//! 3. If `acc0 - acc1 >= rho`, rescale the candidate to norm `n0` and stop.
//!    Otherwise `lambda += step` and repeat.
//!
//! Once every neuron is flipped and the drop still stays below `rho` the loop
//! cannot make progress; it returns the fully flipped, rescaled layer and
//! reports [`Termination::Exhausted`].

use serde::{Deserialize, Serialize};

use crate::data::AuxiliarySet;
use crate::defense::flip::{flip_updates, FlipSet};
use crate::defense::profile::{profile_from_inputs, tau_inputs, ActivationProfile};
use crate::error::{Error, Result};
use crate::nn::model::{argmax, run_layers};
use crate::nn::{Dense, ModelParams};
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FlainConfig {
    /// Threshold increment.
    pub step: f64,
    /// Tolerated accuracy drop on the auxiliary set.
    pub rho: f64,
}

impl Default for FlainConfig {
    fn default() -> Self {
        FlainConfig {
            step: 1e-4,
            rho: 0.035,
        }
    }
}

impl FlainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::Config(format!(
                "flain step must be positive, got {}",
                self.step
            )));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::Config(format!(
                "flain rho must lie in (0, 1], got {}",
                self.rho
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    /// The accuracy drop reached `rho`.
    Tolerance,
    /// Every neuron was flipped without reaching `rho`.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefenseReport {
    pub final_lambda: f64,
    pub iterations: usize,
    pub acc0: f64,
    pub acc_final: f64,
    pub flipped_count: usize,
    /// `n0 / n1`; 1 when the flipped layer has zero norm.
    pub rescale_factor: f64,
    pub terminated_by: Termination,
}

/// Accuracy of `tail` (the profiled layer and everything after it) on cached
/// profiled-layer inputs.
fn tail_accuracy(tail: &[Dense], inputs: &[Vec<f64>], labels: &[usize]) -> f64 {
    let correct = inputs
        .iter()
        .zip(labels)
        .filter(|(x, &y)| argmax(&run_layers(tail, x)) == y)
        .count();
    correct as f64 / labels.len() as f64
}

pub fn flain(
    model: &ModelParams,
    aux: &AuxiliarySet,
    cfg: &FlainConfig,
) -> Result<(ModelParams, DefenseReport)> {
    cfg.validate()?;
    let data = &aux.dataset;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let tau = model.tau_index();
    let w = &model.tau_layer().weights;
    let w0 = model.w0_tau();

    let n0 = w.frobenius_norm();
    let inputs = tau_inputs(model, data)?;
    let profile: ActivationProfile = profile_from_inputs(&inputs)?;
    let x_max = profile.max();
    let mut lambda = profile.mu + cfg.step;

    let mut tail: Vec<Dense> = model.layers()[tau..].to_vec();
    let labels = data.labels();
    let acc0 = tail_accuracy(&tail, &inputs, labels);

    let mut iterations = 0;
    // (flip-set size, accuracy) of the last evaluated candidate; the flip set
    // only grows, so an unchanged size means an unchanged candidate.
    let mut last: Option<(usize, f64, Tensor)> = None;
    loop {
        iterations += 1;
        let flips = FlipSet::at_threshold(&profile, lambda);
        let (acc1, candidate) = match &last {
            Some((size, acc, cand)) if *size == flips.len() => (*acc, cand.clone()),
            _ => {
                let cand = flip_updates(w0, w, &flips)?;
                tail[0].weights = cand.clone();
                let acc = tail_accuracy(&tail, &inputs, labels);
                last = Some((flips.len(), acc, cand.clone()));
                (acc, cand)
            }
        };
        let exceeded = cfg.rho <= acc0 - acc1;
        if exceeded || lambda >= x_max {
            let n1 = candidate.frobenius_norm();
            let factor = if n1 > 0.0 && n0 > 0.0 { n0 / n1 } else { 1.0 };
            let mut rescaled = candidate;
            rescaled.scale(factor);
            tail[0].weights = rescaled.clone();
            let acc_final = tail_accuracy(&tail, &inputs, labels);
            let mut out = model.clone();
            out.set_tau_weights(rescaled)?;
            let report = DefenseReport {
                final_lambda: lambda,
                iterations,
                acc0,
                acc_final,
                flipped_count: flips.len(),
                rescale_factor: factor,
                terminated_by: if exceeded {
                    Termination::Tolerance
                } else {
                    Termination::Exhausted
                },
            };
            return Ok((out, report));
        }
        lambda += cfg.step;
    }
}
