//! Centralized vs distributed trigger: under DBA each malicious client stamps
//! only one corner block, yet the full pattern activates the backdoor.

use flain::federation::AttackMode;
use flain::harness::{measure, prepare_data, train_federated, ExperimentConfig};

fn main() -> flain::Result<()> {
    for mode in [AttackMode::Cba, AttackMode::Dba] {
        let mut cfg = ExperimentConfig::desk_scale(4, std::env::temp_dir().join("flain-dba"));
        cfg.rounds.rounds = 30;
        if let Some(attack) = cfg.attack.as_mut() {
            attack.mode = mode;
        }
        let data = prepare_data(&cfg)?;
        println!("{mode:?}: trigger has {} parts", data.trigger.num_parts());
        let model = train_federated(&cfg, &data, &cfg.aggregator)?.model;
        let m = measure(&model, &data)?;
        println!("  acc {:.3} full-trigger asr {:.3}", m.acc, m.asr);
    }
    Ok(())
}
