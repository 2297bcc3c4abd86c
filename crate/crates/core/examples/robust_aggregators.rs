//! The same poisoned federation under each server-side aggregation rule.

use flain::federation::AggregatorKind;
use flain::harness::{measure, prepare_data, train_federated, ExperimentConfig};
use flain::metrics::{display3, MetricsRecord};

fn main() -> flain::Result<()> {
    let mut cfg = ExperimentConfig::desk_scale(3, std::env::temp_dir().join("flain-aggregators"));
    cfg.rounds.rounds = 25;
    let data = prepare_data(&cfg)?;
    let baseline = measure(
        &train_federated(&cfg, &data, &AggregatorKind::Fedavg)?.model,
        &data,
    )?;

    let rules = [
        AggregatorKind::Fedavg,
        AggregatorKind::Krum {
            f: None,
            full_sum: false,
        },
        AggregatorKind::Median,
        AggregatorKind::TrimmedMean { beta: 2 },
        AggregatorKind::Rlr { theta: Some(4) },
    ];
    println!("{:<13} {:>6} {:>6} {:>7}", "rule", "acc", "asr", "ops");
    for rule in &rules {
        let model = train_federated(&cfg, &data, rule)?.model;
        let m = measure(&model, &data)?;
        let rec = MetricsRecord::new(m.asr, m.acc, baseline);
        let ops = rec.ops.map_or("n/a".to_string(), display3);
        println!(
            "{:<13} {:>6.3} {:>6.3} {:>7}",
            rule.name(),
            m.acc,
            m.asr,
            ops
        );
    }
    Ok(())
}
