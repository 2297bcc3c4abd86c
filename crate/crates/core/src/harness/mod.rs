//! Experiment orchestration: configuration, runs, artifacts, sweeps and
//! plot-ready series.

pub mod config;
pub mod experiment;
pub mod series;
pub mod sweep;

pub use config::{
    AttackConfig, DatasetSource, DefenseConfig, ExperimentConfig, ModelConfig, TriggerSection,
};
pub use experiment::{
    apply_defense, baseline_metrics, execute, initial_model, measure, prepare_data, run_experiment,
    train_federated, write_artifacts, DefenseOutcome, ExperimentOutcome, PreparedData, RunRecord,
};
pub use series::emit_series;
pub use sweep::{run_sweep, SweepGrid, SweepRow};
