//! Pixel-pattern triggers, whole (centralized) or split into parts (distributed).

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriggerPixel {
    pub row: usize,
    pub col: usize,
    pub intensity: f64,
}

/// Which portion of the pattern to stamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriggerPart {
    Full,
    Part(usize),
}

/// Serialized form: `pixels` is a list of `[row, col, intensity]`;
/// `part_boundaries` lists the pixel offsets at which a new part starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriggerConfig {
    pub pixels: Vec<[f64; 3]>,
    #[serde(default)]
    pub part_boundaries: Vec<usize>,
    pub source_label: usize,
    pub target_label: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriggerSpec {
    grid: (usize, usize),
    pixels: Vec<TriggerPixel>,
    flat: Vec<usize>,
    parts: Vec<Range<usize>>,
    pub source_label: usize,
    pub target_label: usize,
}

impl TriggerSpec {
    /// Validates bounds, intensities and part boundaries against the image grid.
    pub fn new(
        grid: (usize, usize),
        pixels: Vec<TriggerPixel>,
        part_boundaries: &[usize],
        source_label: usize,
        target_label: usize,
    ) -> Result<Self> {
        let (rows, cols) = grid;
        let mut flat = Vec::with_capacity(pixels.len());
        for p in &pixels {
            if p.row >= rows || p.col >= cols {
                return Err(Error::TriggerOutOfBounds {
                    row: p.row,
                    col: p.col,
                    rows,
                    cols,
                });
            }
            if !(0.0..=1.0).contains(&p.intensity) {
                return Err(Error::InvalidTrigger(format!(
                    "intensity {} outside [0, 1]",
                    p.intensity
                )));
            }
            let idx = p.row * cols + p.col;
            if flat.contains(&idx) {
                return Err(Error::InvalidTrigger(format!(
                    "pixel ({}, {}) listed twice",
                    p.row, p.col
                )));
            }
            flat.push(idx);
        }
        let mut parts = Vec::new();
        if !pixels.is_empty() {
            let mut start = 0;
            for &b in part_boundaries {
                if b <= start || b >= pixels.len() {
                    return Err(Error::InvalidTrigger(format!(
                        "part boundaries {part_boundaries:?} must be increasing and inside 1..{}",
                        pixels.len()
                    )));
                }
                parts.push(start..b);
                start = b;
            }
            parts.push(start..pixels.len());
        } else if !part_boundaries.is_empty() {
            return Err(Error::InvalidTrigger(
                "empty pattern cannot have parts".into(),
            ));
        }
        if source_label == target_label {
            return Err(Error::InvalidTrigger(
                "source and target labels coincide".into(),
            ));
        }
        Ok(TriggerSpec {
            grid,
            pixels,
            flat,
            parts,
            source_label,
            target_label,
        })
    }

    /// Default geometry: two 2x2 blocks of intensity 1 at rows 0-1, columns
    /// 0-1 and 4-5; each block is one distributed part.
    pub fn corner_blocks(
        grid: (usize, usize),
        source_label: usize,
        target_label: usize,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(8);
        for c0 in [0, 4] {
            for r in 0..2 {
                for c in c0..c0 + 2 {
                    pixels.push(TriggerPixel {
                        row: r,
                        col: c,
                        intensity: 1.0,
                    });
                }
            }
        }
        Self::new(grid, pixels, &[4], source_label, target_label)
    }

    pub fn from_config(config: &TriggerConfig, grid: (usize, usize)) -> Result<Self> {
        let pixels = config
            .pixels
            .iter()
            .map(|&[r, c, i]| {
                if r < 0.0 || c < 0.0 || r.fract() != 0.0 || c.fract() != 0.0 {
                    return Err(Error::InvalidTrigger(format!(
                        "pixel coordinates must be non-negative integers, got [{r}, {c}]"
                    )));
                }
                Ok(TriggerPixel {
                    row: r as usize,
                    col: c as usize,
                    intensity: i,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            grid,
            pixels,
            &config.part_boundaries,
            config.source_label,
            config.target_label,
        )
    }

    pub fn to_config(&self) -> TriggerConfig {
        TriggerConfig {
            pixels: self
                .pixels
                .iter()
                .map(|p| [p.row as f64, p.col as f64, p.intensity])
                .collect(),
            part_boundaries: self.parts.iter().skip(1).map(|r| r.start).collect(),
            source_label: self.source_label,
            target_label: self.target_label,
        }
    }

    pub fn grid(&self) -> (usize, usize) {
        self.grid
    }

    pub fn pixels(&self) -> &[TriggerPixel] {
        &self.pixels
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// Flat pixel indices touched by `part`.
    pub fn part_indices(&self, part: TriggerPart) -> Result<Range<usize>> {
        match part {
            TriggerPart::Full => Ok(0..self.pixels.len()),
            TriggerPart::Part(p) => self.parts.get(p).cloned().ok_or_else(|| {
                Error::InvalidTrigger(format!("part {p} of a {}-part trigger", self.parts.len()))
            }),
        }
    }

    pub fn apply_in_place(&self, image: &mut [f64], part: TriggerPart) -> Result<()> {
        if image.len() != self.grid.0 * self.grid.1 {
            return Err(Error::Shape(format!(
                "image of {} pixels does not match trigger grid {}x{}",
                image.len(),
                self.grid.0,
                self.grid.1
            )));
        }
        for k in self.part_indices(part)? {
            image[self.flat[k]] = self.pixels[k].intensity;
        }
        Ok(())
    }

    pub fn apply(&self, image: &[f64], part: TriggerPart) -> Result<Vec<f64>> {
        let mut out = image.to_vec();
        self.apply_in_place(&mut out, part)?;
        Ok(out)
    }
}

pub fn apply_trigger(image: &[f64], spec: &TriggerSpec, part: TriggerPart) -> Result<Vec<f64>> {
    spec.apply(image, part)
}
