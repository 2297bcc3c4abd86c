//! Synthetic image-like Gaussian blobs.
//!
//! Each class has a sparse prototype on the interior of a square grid; a
//! frame of `frame` pixels around the border is background (exactly zero) for
//! every class, the way MNIST corners are blank. Samples add isotropic
//! Gaussian noise to the interior and clip to `[0, 1]`.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_for, stream};
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlobConfig {
    /// Per-pixel noise standard deviation.
    pub noise_std: f64,
    /// Probability that an interior pixel is "on" in a class prototype.
    pub density: f64,
    /// Intensity range of "on" prototype pixels.
    pub on_range: (f64, f64),
    /// Width of the always-blank border.
    pub frame: usize,
}

impl Default for BlobConfig {
    fn default() -> Self {
        BlobConfig {
            noise_std: 0.6,
            density: 0.35,
            on_range: (0.4, 1.0),
            frame: 2,
        }
    }
}

/// Square grid if `dim` is a perfect square, otherwise a single row.
pub fn grid_for(dim: usize) -> (usize, usize) {
    let side = (dim as f64).sqrt().round() as usize;
    if side * side == dim {
        (side, side)
    } else {
        (1, dim)
    }
}

/// Fixed class prototypes from which any number of samples can be drawn.
#[derive(Debug, Clone)]
pub struct BlobGenerator {
    config: BlobConfig,
    grid: (usize, usize),
    centers: Vec<Vec<f64>>,
    interior: Vec<bool>,
}

impl BlobGenerator {
    pub fn new(num_classes: usize, dim: usize, config: BlobConfig, seed: u64) -> Result<Self> {
        if num_classes == 0 || dim == 0 {
            return Err(Error::Config(
                "blob classes and dimension must be positive".into(),
            ));
        }
        if !(config.noise_std >= 0.0) || !(0.0..=1.0).contains(&config.density) {
            return Err(Error::Config("invalid blob noise or density".into()));
        }
        let grid = grid_for(dim);
        let (rows, cols) = grid;
        let frame = if rows > 2 * config.frame && cols > 2 * config.frame {
            config.frame
        } else {
            0
        };
        let interior: Vec<bool> = (0..dim)
            .map(|p| {
                let (r, c) = (p / cols, p % cols);
                r >= frame && r < rows - frame && c >= frame && c < cols - frame
            })
            .collect();
        let mut rng = rng_for(seed, &[stream::DATA_CENTERS]);
        let (lo, hi) = config.on_range;
        let centers = (0..num_classes)
            .map(|_| {
                interior
                    .iter()
                    .map(|&inside| {
                        if inside && rng.random::<f64>() < config.density {
                            lo + (hi - lo) * rng.random::<f64>()
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(BlobGenerator {
            config,
            grid,
            centers,
            interior,
        })
    }

    pub fn with_noise(mut self, noise_std: f64) -> Self {
        self.config.noise_std = noise_std;
        self
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn noise_std(&self) -> f64 {
        self.config.noise_std
    }

    /// Smallest Euclidean distance between two class prototypes.
    pub fn min_center_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.centers.iter().enumerate() {
            for b in &self.centers[i + 1..] {
                let d = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).powi(2))
                    .sum::<f64>()
                    .sqrt();
                best = best.min(d);
            }
        }
        best
    }

    /// `per_class` samples of every class, interleaved by class.
    pub fn sample(&self, per_class: usize, seed: u64) -> Result<LabeledDataset> {
        if per_class == 0 {
            return Err(Error::Config("per_class must be positive".into()));
        }
        let k = self.centers.len();
        let dim = self.interior.len();
        let mut rng = rng_for(seed, &[]);
        let noise = Normal::new(0.0, self.config.noise_std)
            .map_err(|e| Error::Config(format!("blob noise: {e}")))?;
        let mut data = Vec::with_capacity(per_class * k * dim);
        let mut labels = Vec::with_capacity(per_class * k);
        for _ in 0..per_class {
            for (class, center) in self.centers.iter().enumerate() {
                for (c, &inside) in center.iter().zip(&self.interior) {
                    let v = if inside {
                        (c + noise.sample(&mut rng)).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    data.push(v);
                }
                labels.push(class);
            }
        }
        LabeledDataset::new(
            Tensor::new(vec![per_class * k, dim], data)?,
            labels,
            k,
            self.grid,
        )
    }
}

/// Gaussian class blobs with default shape parameters; deterministic under `seed`.
pub fn synth_blobs(
    num_classes: usize,
    per_class: usize,
    dim: usize,
    seed: u64,
) -> Result<LabeledDataset> {
    BlobGenerator::new(num_classes, dim, BlobConfig::default(), seed)?
        .sample(per_class, derive_seed(seed, &[stream::DATA_TRAIN]))
}
