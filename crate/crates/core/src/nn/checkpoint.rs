//! Binary checkpoint container.
//!
//! Layout (all integers little-endian `u32`, all reals little-endian `f64`):
//!
//! ```text
//! magic      8 bytes  "FLAINCKP"
//! version    u32      currently 1
//! layers     u32
//! tau_index  u32
//! per layer: in_dim u32, out_dim u32, activation u8 (0 = relu, 1 = none)
//! per layer: weights (out_dim * in_dim, row-major), bias (out_dim)
//! w0_tau     out_dim(tau) * in_dim(tau)
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::nn::model::{Activation, Dense, ModelParams};
use crate::tensor::Tensor;

const MAGIC: &[u8; 8] = b"FLAINCKP";
pub const CHECKPOINT_VERSION: u32 = 1;

pub fn to_bytes(model: &ModelParams) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 + 8 * (model.num_params() + model.w0_tau().len()));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.extend_from_slice(&(model.layers().len() as u32).to_le_bytes());
    out.extend_from_slice(&(model.tau_index() as u32).to_le_bytes());
    for layer in model.layers() {
        out.extend_from_slice(&(layer.in_dim() as u32).to_le_bytes());
        out.extend_from_slice(&(layer.out_dim() as u32).to_le_bytes());
        out.push(match layer.activation {
            Activation::Relu => 0,
            Activation::Identity => 1,
        });
    }
    let mut put = |values: &[f64]| {
        for v in values {
            out.extend_from_slice(&v.to_le_bytes());
        }
    };
    for layer in model.layers() {
        put(layer.weights.data());
        put(layer.bias.data());
    }
    put(model.w0_tau().data());
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or(Error::Truncated {
            what,
            needed: self.pos + n,
            available: self.buf.len(),
        })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self, what: &'static str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn f64s(&mut self, n: usize, what: &'static str) -> Result<Vec<f64>> {
        let bytes = self.take(
            n.checked_mul(8)
                .ok_or(Error::Checkpoint("size overflow".into()))?,
            what,
        )?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect())
    }
}

pub fn from_bytes(buf: &[u8]) -> Result<ModelParams> {
    let mut r = Reader { buf, pos: 0 };
    if r.take(8, "checkpoint header")? != MAGIC {
        return Err(Error::Checkpoint(
            "not a checkpoint file (bad magic)".into(),
        ));
    }
    let version = r.u32("checkpoint header")?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let n_layers = r.u32("checkpoint header")? as usize;
    let tau_index = r.u32("checkpoint header")? as usize;
    let mut shapes = Vec::with_capacity(n_layers);
    for _ in 0..n_layers {
        let in_dim = r.u32("layer table")? as usize;
        let out_dim = r.u32("layer table")? as usize;
        let act = match r.take(1, "layer table")?[0] {
            0 => Activation::Relu,
            1 => Activation::Identity,
            other => return Err(Error::Checkpoint(format!("unknown activation tag {other}"))),
        };
        shapes.push((in_dim, out_dim, act));
    }
    let mut layers = Vec::with_capacity(n_layers);
    for &(in_dim, out_dim, activation) in &shapes {
        let weights = Tensor::new(vec![out_dim, in_dim], r.f64s(in_dim * out_dim, "weights")?)?;
        let bias = Tensor::new(vec![out_dim], r.f64s(out_dim, "bias")?)?;
        layers.push(Dense {
            weights,
            bias,
            activation,
        });
    }
    let (tau_in, tau_out, _) = *shapes
        .get(tau_index)
        .ok_or_else(|| Error::Checkpoint(format!("tau index {tau_index} out of range")))?;
    let w0 = Tensor::new(
        vec![tau_out, tau_in],
        r.f64s(tau_in * tau_out, "w0 snapshot")?,
    )?;
    if r.pos != buf.len() {
        return Err(Error::Checkpoint(format!(
            "{} trailing bytes",
            buf.len() - r.pos
        )));
    }
    ModelParams::from_parts(layers, tau_index, w0)
}

pub fn save(model: &ModelParams, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_bytes(model)).map_err(|e| Error::io(path, e))
}

pub fn load(path: impl AsRef<Path>) -> Result<ModelParams> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    from_bytes(&bytes)
}
