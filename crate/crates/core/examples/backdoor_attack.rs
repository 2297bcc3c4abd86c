//! Four of ten clients poison 30% of their class-0 samples with a corner
//! trigger relabeled to class 5. The global model learns the backdoor while
//! clean accuracy stays high.

use flain::harness::{prepare_data, train_federated, DefenseConfig, ExperimentConfig};

fn main() -> flain::Result<()> {
    let mut cfg = ExperimentConfig::desk_scale(1, std::env::temp_dir().join("flain-backdoor"));
    cfg.rounds.rounds = 25;
    cfg.defense = DefenseConfig::None;
    let data = prepare_data(&cfg)?;

    let sample = data.test.indices_of(0)[0];
    let stamped = data
        .trigger
        .apply(data.test.image(sample), flain::data::TriggerPart::Full)?;
    println!("trigger pixels: {}", data.trigger.pixels().len());
    for row in stamped.chunks(12).take(3) {
        let line: String = row
            .iter()
            .map(|&v| if v > 0.5 { '#' } else { '.' })
            .collect();
        println!("  {line}");
    }

    let outcome = train_federated(&cfg, &data, &cfg.aggregator)?;
    for r in outcome.history.iter().filter(|r| r.round % 5 == 0) {
        println!(
            "round {:2}  acc {:.3}  asr {:.3}",
            r.round,
            r.acc,
            r.asr.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
