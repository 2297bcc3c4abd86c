//! Zeroing low-activation input columns at fixed thresholds, for comparison
//! with flipping.

use flain::defense::prune_low_activation;
use flain::harness::{measure, prepare_data, train_federated, ExperimentConfig};

fn main() -> flain::Result<()> {
    let mut cfg = ExperimentConfig::desk_scale(2, std::env::temp_dir().join("flain-pruning"));
    cfg.rounds.rounds = 30;
    let data = prepare_data(&cfg)?;
    let trained = train_federated(&cfg, &data, &cfg.aggregator)?.model;
    let m = measure(&trained, &data)?;
    println!("undefended        acc {:.3} asr {:.3}", m.acc, m.asr);
    for lambda in [0.0, 0.05, 0.1, 0.2, 0.4] {
        let (pruned, set) = prune_low_activation(&trained, &data.aux.dataset, lambda)?;
        let m = measure(&pruned, &data)?;
        println!(
            "lambda {lambda:<4} n={:3}  acc {:.3} asr {:.3}",
            set.len(),
            m.acc,
            m.asr
        );
    }
    Ok(())
}
