//! Datasets, client partitions, triggers and poisoning.

pub mod auxiliary;
pub mod dataset;
pub mod idx;
pub mod partition;
pub mod poison;
pub mod synth;
pub mod trigger;

pub use auxiliary::{sample_auxiliary, AuxiliarySet};
pub use dataset::LabeledDataset;
pub use idx::{decode_idx, encode_idx, load_idx, save_idx};
pub use partition::{partition, partition_dirichlet, partition_iid, PartitionMode, PartitionPlan};
pub use poison::{poison_client, PoisonPolicy};
pub use synth::{synth_blobs, BlobConfig, BlobGenerator};
pub use trigger::{apply_trigger, TriggerConfig, TriggerPart, TriggerPixel, TriggerSpec};
