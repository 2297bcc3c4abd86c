//! Class mix per client for IID and Dirichlet label-skew partitions.

use flain::data::{partition, PartitionMode};

fn main() -> flain::Result<()> {
    let labels: Vec<usize> = (0..10_000).map(|i| i % 10).collect();
    for mode in [
        PartitionMode::Iid,
        PartitionMode::Dirichlet { alpha: 100.0 },
        PartitionMode::Dirichlet { alpha: 0.5 },
        PartitionMode::Dirichlet { alpha: 0.05 },
    ] {
        let plan = partition(&labels, 5, mode, 42)?;
        println!("{mode:?}");
        for (k, idx) in plan.assignments.iter().enumerate() {
            let mut counts = [0usize; 10];
            for &i in idx {
                counts[labels[i]] += 1;
            }
            let top = *counts.iter().max().unwrap_or(&0) as f64 / idx.len().max(1) as f64;
            println!(
                "  client {k}: n={:5} max share {:.2} {:?}",
                idx.len(),
                top,
                counts
            );
        }
    }
    Ok(())
}
