//! Trains a backdoored model, then flips the updates of input neurons that
//! stay quiet on clean auxiliary data.

use ::flain::defense::{flain, profile_activations, FlainConfig};
use ::flain::harness::{measure, prepare_data, train_federated, ExperimentConfig};

fn main() -> ::flain::Result<()> {
    let cfg = ExperimentConfig::desk_scale(1, std::env::temp_dir().join("flain-defense"));
    let data = prepare_data(&cfg)?;
    let trained = train_federated(&cfg, &data, &cfg.aggregator)?.model;

    let profile = profile_activations(&trained, &data.aux.dataset)?;
    let quiet: Vec<usize> = (0..profile.len())
        .filter(|&i| profile.x[i] == 0.0)
        .collect();
    let cols = data.trigger.grid().1;
    let trigger_cells: Vec<usize> = data
        .trigger
        .pixels()
        .iter()
        .map(|p| p.row * cols + p.col)
        .collect();
    println!(
        "{} of {} inputs never fire on clean data; trigger cells {:?} among them: {}",
        quiet.len(),
        profile.len(),
        trigger_cells,
        trigger_cells.iter().all(|c| quiet.contains(c))
    );

    let (defended, report) = flain(
        &trained,
        &data.aux,
        &FlainConfig {
            step: 1e-4,
            rho: 0.01,
        },
    )?;
    let before = measure(&trained, &data)?;
    let after = measure(&defended, &data)?;
    println!("before: acc {:.3} asr {:.3}", before.acc, before.asr);
    println!("after:  acc {:.3} asr {:.3}", after.acc, after.asr);
    println!("{report:#?}");
    Ok(())
}
