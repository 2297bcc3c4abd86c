//! Simulated federated training: local client updates and server aggregation.

pub mod aggregate;
pub mod config;
pub mod local;
pub mod run;

pub use aggregate::{
    aggregate, aggregate_fedavg, aggregate_krum, aggregate_median, aggregate_rlr,
    aggregate_trimmed_mean, default_krum_f, default_rlr_theta, AggregatorKind,
};
pub use config::RoundConfig;
pub use local::{local_train, ClientUpdate};
pub use run::{
    client_datasets, run_training, Attack, AttackMode, Monitor, RoundRecord, TrainingOutcome,
};
