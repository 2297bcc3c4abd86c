//! Post-training defenses on the profiled layer.

pub mod flain;
pub mod flip;
pub mod profile;
pub mod prune;

pub use flain::{flain, DefenseReport, FlainConfig, Termination};
pub use flip::{flip_updates, zero_columns, FlipSet};
pub use profile::{profile_activations, ActivationProfile};
pub use prune::prune_low_activation;
