use crate::defense::profile::ActivationProfile;
use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Neurons whose mean activation input is at most `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlipSet {
    /// Sorted ascending.
    pub indices: Vec<usize>,
    pub lambda: f64,
}

impl FlipSet {
    /// Inclusive threshold: `i` is selected iff `x_i <= lambda`.
    pub fn at_threshold(profile: &ActivationProfile, lambda: f64) -> Self {
        FlipSet {
            indices: (0..profile.len())
                .filter(|&i| profile.x[i] <= lambda)
                .collect(),
            lambda,
        }
    }

    pub fn from_indices(mut indices: Vec<usize>, lambda: f64) -> Self {
        indices.sort_unstable();
        indices.dedup();
        FlipSet { indices, lambda }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    fn check(&self, width: usize) -> Result<()> {
        match self.indices.iter().find(|&&i| i >= width) {
            Some(&index) => Err(Error::NeuronOutOfRange { index, width }),
            None => Ok(()),
        }
    }
}

/// Reverses the training update of every flipped input neuron.
///
/// With `dW = w - w0`, column `i` becomes `w0 - dW` (that is `2 w0 - w`) when
/// `i` is flipped and stays `w` otherwise. Columns index input neurons of the
/// `out x in` weight matrix.
pub fn flip_updates(w0: &Tensor, w: &Tensor, flips: &FlipSet) -> Result<Tensor> {
    if w0.shape() != w.shape() || w.shape().len() != 2 {
        return Err(Error::Shape(format!(
            "w0 {:?} and w {:?} must be equal 2-D shapes",
            w0.shape(),
            w.shape()
        )));
    }
    flips.check(w.cols())?;
    let mut out = w.clone();
    for r in 0..w.rows() {
        for &i in &flips.indices {
            let base = w0.get2(r, i);
            let delta = w.get2(r, i) - base;
            out.set2(r, i, base - delta);
        }
    }
    Ok(out)
}

/// Zeroes every selected input-neuron column.
pub fn zero_columns(w: &Tensor, flips: &FlipSet) -> Result<Tensor> {
    flips.check(w.cols())?;
    let mut out = w.clone();
    for r in 0..w.rows() {
        for &i in &flips.indices {
            out.set2(r, i, 0.0);
        }
    }
    Ok(out)
}
