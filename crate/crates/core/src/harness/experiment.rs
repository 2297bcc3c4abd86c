use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{
    load_idx, partition, sample_auxiliary, AuxiliarySet, BlobGenerator, LabeledDataset, TriggerSpec,
};
use crate::defense::{flain, prune_low_activation, DefenseReport, FlainConfig};
use crate::error::{Error, Result};
use crate::federation::{
    client_datasets, run_training, AggregatorKind, Attack, Monitor, RoundRecord, TrainingOutcome,
};
use crate::harness::config::{DatasetSource, DefenseConfig, ExperimentConfig};
use crate::metrics::{compute_acc, compute_asr, Baseline, MetricsRecord};
use crate::nn::{checkpoint, ModelParams};
use crate::rng::{derive_seed, stream};

pub const MODEL_FILE: &str = "model.ckpt";
pub const DEFENDED_FILE: &str = "defended.ckpt";
pub const ROUNDS_FILE: &str = "rounds.csv";
pub const RECORD_FILE: &str = "record.json";
pub const DEFENSE_REPORT_FILE: &str = "defense_report.json";
pub const CONFIG_FILE: &str = "config.toml";

/// Train split, auxiliary set and evaluation split of one experiment.
///
/// The auxiliary set is drawn from the held-out split and removed from it, so
/// the defense never sees the samples its metrics are computed on.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub train: LabeledDataset,
    pub aux: AuxiliarySet,
    pub test: LabeledDataset,
    pub trigger: TriggerSpec,
}

pub fn prepare_data(cfg: &ExperimentConfig) -> Result<PreparedData> {
    let (train, holdout) = match &cfg.dataset {
        DatasetSource::Synthetic {
            num_classes,
            dim,
            train_per_class,
            test_per_class,
            blobs,
        } => {
            let generator = BlobGenerator::new(*num_classes, *dim, *blobs, cfg.seed)?;
            (
                generator.sample(
                    *train_per_class,
                    derive_seed(cfg.seed, &[stream::DATA_TRAIN]),
                )?,
                generator.sample(*test_per_class, derive_seed(cfg.seed, &[stream::DATA_TEST]))?,
            )
        }
        DatasetSource::Idx {
            train_images,
            train_labels,
            test_images,
            test_labels,
        } => (
            load_idx(train_images, train_labels)?,
            load_idx(test_images, test_labels)?,
        ),
    };
    if train.dim() != holdout.dim() {
        return Err(Error::Config(format!(
            "train images have {} pixels, test images {}",
            train.dim(),
            holdout.dim()
        )));
    }
    let num_classes = train.num_classes().max(holdout.num_classes());
    cfg.validate(num_classes)?;
    let aux = sample_auxiliary(&holdout, cfg.aux_per_class, cfg.seed)?;
    let test = holdout.without(&aux.indices);
    let trigger = cfg.trigger.build(train.grid())?;
    Ok(PreparedData {
        train,
        aux,
        test,
        trigger,
    })
}

pub fn initial_model(cfg: &ExperimentConfig, data: &PreparedData) -> Result<ModelParams> {
    let num_classes = data.train.num_classes().max(data.test.num_classes());
    ModelParams::mlp(
        data.train.dim(),
        &cfg.model.hidden,
        num_classes,
        cfg.model.tau_layer,
        cfg.seed,
    )
}

/// Partitions, poisons and trains with the given aggregator, logging ACC/ASR
/// on the evaluation split after every round.
pub fn train_federated(
    cfg: &ExperimentConfig,
    data: &PreparedData,
    aggregator: &AggregatorKind,
) -> Result<TrainingOutcome> {
    let mut rounds = cfg.rounds.clone();
    rounds.seed = cfg.seed;
    rounds.validate()?;
    let plan = partition(
        data.train.labels(),
        rounds.num_clients,
        cfg.partition,
        cfg.seed,
    )?;
    let attack = cfg.attack.map(|a| Attack {
        trigger: data.trigger.clone(),
        pdr: a.pdr,
        mode: a.mode,
    });
    let clients = client_datasets(
        &data.train,
        &plan,
        attack.as_ref(),
        rounds.num_malicious()?,
        cfg.seed,
    )?;
    let monitor = Monitor {
        test: &data.test,
        trigger: Some(&data.trigger),
    };
    run_training(
        &rounds,
        initial_model(cfg, data)?,
        &clients,
        aggregator,
        Some(&monitor),
    )
}

/// Result of one configured defense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "defense", rename_all = "lowercase")]
pub enum DefenseOutcome {
    Pruning { lambda: f64, pruned_count: usize },
    Flain(DefenseReport),
}

pub fn apply_defense(
    defense: &DefenseConfig,
    model: &ModelParams,
    aux: &AuxiliarySet,
) -> Result<(ModelParams, Option<DefenseOutcome>)> {
    match *defense {
        DefenseConfig::None => Ok((model.clone(), None)),
        DefenseConfig::Pruning { lambda } => {
            let (pruned, set) = prune_low_activation(model, &aux.dataset, lambda)?;
            Ok((
                pruned,
                Some(DefenseOutcome::Pruning {
                    lambda,
                    pruned_count: set.len(),
                }),
            ))
        }
        DefenseConfig::Flain { step, rho } => {
            let (defended, report) = flain(model, aux, &FlainConfig { step, rho })?;
            Ok((defended, Some(DefenseOutcome::Flain(report))))
        }
    }
}

pub fn measure(model: &ModelParams, data: &PreparedData) -> Result<Baseline> {
    Ok(Baseline {
        asr: compute_asr(model, &data.test, &data.trigger)?,
        acc: compute_acc(model, &data.test)?,
    })
}

/// Final JSON record: `{asr, acc, ops, baseline: {asr, acc}, defense_report?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    #[serde(flatten)]
    pub metrics: MetricsRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defense_report: Option<DefenseOutcome>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub trained: ModelParams,
    pub defended: Option<ModelParams>,
    pub history: Vec<RoundRecord>,
    pub record: RunRecord,
}

/// Metrics of undefended FedAvg under the configured attack, the reference
/// point for OPS.
pub fn baseline_metrics(cfg: &ExperimentConfig, data: &PreparedData) -> Result<Baseline> {
    let outcome = train_federated(cfg, data, &AggregatorKind::Fedavg)?;
    measure(&outcome.model, data)
}

/// Runs training, the configured defense and the metrics without touching disk.
/// `baseline` is computed (by an extra FedAvg run when the aggregator is not
/// FedAvg) unless supplied.
pub fn execute(
    cfg: &ExperimentConfig,
    data: &PreparedData,
    baseline: Option<Baseline>,
) -> Result<ExperimentOutcome> {
    let trained = train_federated(cfg, data, &cfg.aggregator)?;
    let baseline = match baseline {
        Some(b) => b,
        None if cfg.aggregator == AggregatorKind::Fedavg => measure(&trained.model, data)?,
        None => baseline_metrics(cfg, data)?,
    };
    let (final_model, report) = apply_defense(&cfg.defense, &trained.model, &data.aux)?;
    let m = measure(&final_model, data)?;
    let defended = report.is_some().then_some(final_model);
    Ok(ExperimentOutcome {
        trained: trained.model,
        defended,
        history: trained.history,
        record: RunRecord {
            metrics: MetricsRecord::new(m.asr, m.acc, baseline),
            defense_report: report,
        },
    })
}

/// Runs one experiment and writes its artifacts under `cfg.output_dir`:
/// the trained checkpoint, the defended checkpoint and defense report (when a
/// defense is configured), the per-round CSV, the JSON record and the
/// effective config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let data = prepare_data(cfg)?;
    let outcome = execute(cfg, &data, None)?;
    write_artifacts(cfg, &outcome)?;
    Ok(outcome)
}

pub fn write_artifacts(cfg: &ExperimentConfig, outcome: &ExperimentOutcome) -> Result<()> {
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    checkpoint::save(&outcome.trained, dir.join(MODEL_FILE))?;
    if let Some(defended) = &outcome.defended {
        checkpoint::save(defended, dir.join(DEFENDED_FILE))?;
    }
    if let Some(report) = &outcome.record.defense_report {
        write_json(&dir.join(DEFENSE_REPORT_FILE), report)?;
    }
    write_rounds_csv(
        &dir.join(ROUNDS_FILE),
        &outcome.history,
        cfg.aggregator.name(),
        cfg.seed,
    )?;
    write_json(&dir.join(RECORD_FILE), &outcome.record)?;
    write_text(&dir.join(CONFIG_FILE), &cfg.to_toml()?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize)]
struct RoundRow<'a> {
    round: usize,
    acc: f64,
    asr: Option<f64>,
    aggregator: &'a str,
    seed: u64,
}

/// Per-round CSV with columns `round,acc,asr,aggregator,seed`.
pub fn write_rounds_csv(
    path: &Path,
    history: &[RoundRecord],
    aggregator: &str,
    seed: u64,
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    if history.is_empty() {
        writer
            .write_record(["round", "acc", "asr", "aggregator", "seed"])
            .map_err(|e| csv_io(path, e))?;
    }
    for r in history {
        writer
            .serialize(RoundRow {
                round: r.round,
                acc: r.acc,
                asr: r.asr,
                aggregator,
                seed,
            })
            .map_err(|e| csv_io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub(crate) fn csv_io(path: &Path, e: csv::Error) -> Error {
    if !e.is_io_error() {
        return Error::Csv(e);
    }
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        _ => unreachable!("checked by is_io_error"),
    }
}
