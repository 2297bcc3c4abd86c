//! Federated-learning backdoor simulator with a post-training defense that
//! flips the weight updates of low-activation input neurons.
//!
//! The crate is organized bottom-up:
//!
//! - [`nn`]: dense ReLU networks, exact gradients, Adam, checkpoints.
//! - [`data`]: IDX loading, synthetic blobs, client partitions, triggers, poisoning.
//! - [`federation`]: local training and the FedAvg / Krum / Median /
//!   Trimmed-Mean / RLR aggregation rules.
//! - [`defense`]: activation profiling, update flipping with an adaptive
//!   threshold, and the pruning baseline.
//! - [`harness`]: experiment configs, metric records, sweeps and CSV series.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```bash
//! cargo run --release -p flain --example clean_federation
//! cargo run --release -p flain --example backdoor_attack
//! cargo run --release -p flain --example flain_defense
//! cargo run --release -p flain --example pruning_baseline
//! cargo run --release -p flain --example robust_aggregators
//! cargo run --release -p flain --example dirichlet_partition
//! cargo run --release -p flain --example distributed_trigger
//! cargo run --release -p flain --example ops_scores
//! cargo run --release -p flain --example experiment_config
//! ```

// NaN must fail validation, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod defense;
pub mod error;
pub mod federation;
pub mod harness;
pub mod metrics;
pub mod nn;
pub mod rng;
pub mod tensor;

pub use error::{Error, ErrorCategory, Result};
pub use tensor::Tensor;
