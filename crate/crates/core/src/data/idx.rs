//! IDX file reader and writer (the MNIST container format).
//!
//! Images: magic `0x00000803`, then big-endian `u32` count, rows, cols and
//! one unsigned byte per pixel. Labels: magic `0x00000801`, count, one byte
//! per label.

use std::path::Path;

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::tensor::Tensor;

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

fn be_u32(bytes: &[u8], offset: usize, what: &'static str) -> Result<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or(Error::Truncated {
            what,
            needed: offset + 4,
            available: bytes.len(),
        })
}

/// Returns `(count, rows, cols, pixels)`.
pub fn parse_images(bytes: &[u8]) -> Result<(usize, usize, usize, &[u8])> {
    let magic = be_u32(bytes, 0, "IDX image header")?;
    if magic != IMAGES_MAGIC {
        return Err(Error::BadMagic {
            expected: IMAGES_MAGIC,
            found: magic,
        });
    }
    let n = be_u32(bytes, 4, "IDX image header")? as usize;
    let rows = be_u32(bytes, 8, "IDX image header")? as usize;
    let cols = be_u32(bytes, 12, "IDX image header")? as usize;
    let needed = 16 + n * rows * cols;
    if bytes.len() < needed {
        return Err(Error::Truncated {
            what: "IDX image data",
            needed,
            available: bytes.len(),
        });
    }
    Ok((n, rows, cols, &bytes[16..needed]))
}

pub fn parse_labels(bytes: &[u8]) -> Result<&[u8]> {
    let magic = be_u32(bytes, 0, "IDX label header")?;
    if magic != LABELS_MAGIC {
        return Err(Error::BadMagic {
            expected: LABELS_MAGIC,
            found: magic,
        });
    }
    let n = be_u32(bytes, 4, "IDX label header")? as usize;
    let needed = 8 + n;
    if bytes.len() < needed {
        return Err(Error::Truncated {
            what: "IDX label data",
            needed,
            available: bytes.len(),
        });
    }
    Ok(&bytes[8..needed])
}

/// Decodes an image/label pair; pixel bytes are scaled by `1/255`.
pub fn decode_idx(image_bytes: &[u8], label_bytes: &[u8]) -> Result<LabeledDataset> {
    let labels = parse_labels(label_bytes)?;
    let (n, rows, cols, pixels) = parse_images(image_bytes)?;
    if labels.is_empty() || n == 0 {
        return Err(Error::EmptyDataset);
    }
    if n != labels.len() {
        return Err(Error::CountMismatch {
            images: n,
            labels: labels.len(),
        });
    }
    let labels: Vec<usize> = labels.iter().map(|&b| b as usize).collect();
    let num_classes = labels.iter().max().map_or(1, |m| m + 1);
    let data = pixels.iter().map(|&p| p as f64 / 255.0).collect();
    LabeledDataset::new(
        Tensor::new(vec![n, rows * cols], data)?,
        labels,
        num_classes,
        (rows, cols),
    )
}

pub fn load_idx(
    images_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
) -> Result<LabeledDataset> {
    let (ip, lp) = (images_path.as_ref(), labels_path.as_ref());
    let images = std::fs::read(ip).map_err(|e| Error::io(ip, e))?;
    let labels = std::fs::read(lp).map_err(|e| Error::io(lp, e))?;
    decode_idx(&images, &labels)
}

/// Encodes a dataset as IDX bytes, quantizing intensities to `round(255 v)`.
pub fn encode_idx(dataset: &LabeledDataset) -> Result<(Vec<u8>, Vec<u8>)> {
    if dataset.labels().iter().any(|&y| y > u8::MAX as usize) {
        return Err(Error::Config("IDX labels must fit in one byte".into()));
    }
    let (rows, cols) = dataset.grid();
    let mut images = Vec::with_capacity(16 + dataset.len() * rows * cols);
    for v in [IMAGES_MAGIC, dataset.len() as u32, rows as u32, cols as u32] {
        images.extend_from_slice(&v.to_be_bytes());
    }
    images.extend(
        dataset
            .images()
            .data()
            .iter()
            .map(|v| (v * 255.0).round() as u8),
    );
    let mut labels = Vec::with_capacity(8 + dataset.len());
    labels.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    labels.extend_from_slice(&(dataset.len() as u32).to_be_bytes());
    labels.extend(dataset.labels().iter().map(|&y| y as u8));
    Ok((images, labels))
}

pub fn save_idx(
    dataset: &LabeledDataset,
    images_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
) -> Result<()> {
    let (images, labels) = encode_idx(dataset)?;
    let (ip, lp) = (images_path.as_ref(), labels_path.as_ref());
    std::fs::write(ip, images).map_err(|e| Error::io(ip, e))?;
    std::fs::write(lp, labels).map_err(|e| Error::io(lp, e))
}
