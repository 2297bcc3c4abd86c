//! ASR, ACC and OPS.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{LabeledDataset, TriggerPart, TriggerSpec};
use crate::error::{Error, Result};
use crate::nn::{evaluate_accuracy, ModelParams};

/// Fraction of source-label samples that, with the full trigger stamped on,
/// are classified as the target label.
pub fn compute_asr(model: &ModelParams, test: &LabeledDataset, spec: &TriggerSpec) -> Result<f64> {
    let source = test.indices_of(spec.source_label);
    if source.is_empty() {
        return Err(Error::NoSourceSamples(spec.source_label));
    }
    let hits = source
        .par_iter()
        .map(|&i| {
            let x = spec.apply(test.image(i), TriggerPart::Full)?;
            Ok(usize::from(model.predict(&x)? == spec.target_label))
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(hits as f64 / source.len() as f64)
}

/// Natural accuracy on clean data.
pub fn compute_acc(model: &ModelParams, clean: &LabeledDataset) -> Result<f64> {
    evaluate_accuracy(model, clean)
}

/// Relative ACC gain minus relative ASR change against a baseline:
/// `(d_acc - b_acc) / b_acc - (d_asr - b_asr) / b_asr`.
pub fn compute_ops(d_acc: f64, d_asr: f64, b_acc: f64, b_asr: f64) -> Result<f64> {
    if !(b_acc > 0.0) || !(b_asr > 0.0) {
        return Err(Error::OpsUndefined {
            asr: b_asr,
            acc: b_acc,
        });
    }
    Ok((d_acc - b_acc) / b_acc - (d_asr - b_asr) / b_asr)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub asr: f64,
    pub acc: f64,
}

/// Final metrics of one (attack, defense) configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub asr: f64,
    pub acc: f64,
    /// `None` when the baseline ASR or ACC is zero.
    pub ops: Option<f64>,
    pub baseline: Baseline,
}

impl MetricsRecord {
    pub fn new(asr: f64, acc: f64, baseline: Baseline) -> Self {
        let ops = compute_ops(acc, asr, baseline.acc, baseline.asr).ok();
        MetricsRecord {
            asr,
            acc,
            ops,
            baseline,
        }
    }
}

/// Signed three-decimal display used for result tables (`+0.129`, `-0.025`, `+1`, `0`).
pub fn display3(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    if r == 0.0 {
        "0".to_string()
    } else if r.fract() == 0.0 {
        format!("{:+}", r as i64)
    } else {
        format!("{r:+.3}")
    }
}
