//! Grid sweeps over MCR, PDR and aggregator.
//!
//! Cells run concurrently; each owns a subdirectory of the base output
//! directory and uses the base seed, so results do not depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::federation::AggregatorKind;
use crate::harness::config::ExperimentConfig;
use crate::harness::experiment::{
    baseline_metrics, execute, prepare_data, write_artifacts, write_text,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub mcr: Vec<f64>,
    pub pdr: Vec<f64>,
    pub aggregators: Vec<AggregatorKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub mcr: f64,
    pub pdr: f64,
    pub aggregator: String,
    pub asr: f64,
    pub acc: f64,
    pub ops: Option<f64>,
    pub baseline_asr: f64,
    pub baseline_acc: f64,
}

pub const SWEEP_FILE: &str = "sweep.csv";

fn cell_config(
    base: &ExperimentConfig,
    mcr: f64,
    pdr: f64,
    aggregator: &AggregatorKind,
) -> Result<ExperimentConfig> {
    let mut cfg = base.clone();
    cfg.rounds.mcr = mcr;
    cfg.attack
        .as_mut()
        .ok_or_else(|| Error::Config("a sweep needs an [attack] section".into()))?
        .pdr = pdr;
    cfg.aggregator = *aggregator;
    cfg.output_dir = base
        .output_dir
        .join(format!("mcr{mcr}_pdr{pdr}_{}", aggregator.name()));
    Ok(cfg)
}

/// Runs every grid cell and writes `sweep.csv` to the base output directory.
/// The FedAvg baseline for OPS is trained once per (MCR, PDR) pair.
pub fn run_sweep(base: &ExperimentConfig, grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    if grid.mcr.is_empty() || grid.pdr.is_empty() || grid.aggregators.is_empty() {
        return Err(Error::Config(
            "every sweep axis needs at least one value".into(),
        ));
    }
    let data = prepare_data(base)?;
    let pairs: Vec<(f64, f64)> = grid
        .mcr
        .iter()
        .flat_map(|&m| grid.pdr.iter().map(move |&p| (m, p)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(mcr, pdr)| {
            let baseline = baseline_metrics(
                &cell_config(base, mcr, pdr, &AggregatorKind::Fedavg)?,
                &data,
            )?;
            grid.aggregators
                .par_iter()
                .map(|agg| {
                    let cfg = cell_config(base, mcr, pdr, agg)?;
                    let outcome = execute(&cfg, &data, Some(baseline))?;
                    write_artifacts(&cfg, &outcome)?;
                    let m = &outcome.record.metrics;
                    Ok(SweepRow {
                        mcr,
                        pdr,
                        aggregator: agg.name().to_string(),
                        asr: m.asr,
                        acc: m.acc,
                        ops: m.ops,
                        baseline_asr: m.baseline.asr,
                        baseline_acc: m.baseline.acc,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();

    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        writer.serialize(row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::io(base.output_dir.join(SWEEP_FILE), e.into_error()))?;
    write_text(
        &base.output_dir.join(SWEEP_FILE),
        &String::from_utf8_lossy(&bytes),
    )?;
    Ok(rows)
}
