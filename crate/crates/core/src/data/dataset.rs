use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Images in `[0, 1]`, one row per sample, with integer class labels.
///
/// `grid` is the `(rows, cols)` layout of each image, used to place triggers.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    images: Tensor,
    labels: Vec<usize>,
    num_classes: usize,
    grid: (usize, usize),
}

impl LabeledDataset {
    pub fn new(
        images: Tensor,
        labels: Vec<usize>,
        num_classes: usize,
        grid: (usize, usize),
    ) -> Result<Self> {
        if images.shape().len() != 2 {
            return Err(Error::Shape(format!(
                "images must be 2-D, got shape {:?}",
                images.shape()
            )));
        }
        if images.rows() != labels.len() {
            return Err(Error::CountMismatch {
                images: images.rows(),
                labels: labels.len(),
            });
        }
        if grid.0 * grid.1 != images.cols() {
            return Err(Error::Shape(format!(
                "grid {}x{} does not cover {} features",
                grid.0,
                grid.1,
                images.cols()
            )));
        }
        if let Some(&label) = labels.iter().find(|&&y| y >= num_classes) {
            return Err(Error::LabelOutOfRange { label, num_classes });
        }
        if images.data().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Shape("pixel intensities must lie in [0, 1]".into()));
        }
        Ok(LabeledDataset {
            images,
            labels,
            num_classes,
            grid,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.images.cols()
    }

    pub fn grid(&self) -> (usize, usize) {
        self.grid
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn images(&self) -> &Tensor {
        &self.images
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn image(&self, i: usize) -> &[f64] {
        self.images.row(i)
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    pub fn indices_of(&self, class: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.labels[i] == class)
            .collect()
    }

    /// Copies the listed samples, in the given order.
    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        let d = self.dim();
        let mut data = Vec::with_capacity(indices.len() * d);
        for &i in indices {
            data.extend_from_slice(self.image(i));
        }
        LabeledDataset {
            images: Tensor::new(vec![indices.len(), d], data).expect("subset shape"),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            num_classes: self.num_classes,
            grid: self.grid,
        }
    }

    /// Every sample except the listed ones, preserving order.
    pub fn without(&self, excluded: &[usize]) -> LabeledDataset {
        let mut skip = vec![false; self.len()];
        for &i in excluded {
            skip[i] = true;
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&i| !skip[i]).collect();
        self.subset(&keep)
    }

    /// Replaces sample `i`; used by poisoning, which rewrites images and labels.
    pub(crate) fn overwrite(&mut self, i: usize, image: &[f64], label: usize) {
        let d = self.dim();
        self.images.data_mut()[i * d..(i + 1) * d].copy_from_slice(image);
        self.labels[i] = label;
    }
}
