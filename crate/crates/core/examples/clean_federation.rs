//! Ten honest clients train a small MLP with FedAvg on synthetic 12x12 blobs.

use flain::data::{partition_iid, BlobConfig, BlobGenerator};
use flain::federation::{client_datasets, run_training, AggregatorKind, Monitor, RoundConfig};
use flain::nn::ModelParams;
use flain::rng::{derive_seed, stream};

fn main() -> flain::Result<()> {
    let seed = 11;
    let generator = BlobGenerator::new(10, 144, BlobConfig::default(), seed)?;
    let train = generator.sample(500, derive_seed(seed, &[stream::DATA_TRAIN]))?;
    let test = generator.sample(100, derive_seed(seed, &[stream::DATA_TEST]))?;

    let config = RoundConfig::new(10, 15, 0.0, seed);
    let plan = partition_iid(train.len(), config.num_clients, seed)?;
    let clients = client_datasets(&train, &plan, None, 0, seed)?;
    println!("client sizes: {:?}", plan.sizes());

    let model = ModelParams::mlp(train.dim(), &[128, 64], 10, 0, seed)?;
    let monitor = Monitor {
        test: &test,
        trigger: None,
    };
    let outcome = run_training(
        &config,
        model,
        &clients,
        &AggregatorKind::Fedavg,
        Some(&monitor),
    )?;
    for r in &outcome.history {
        println!("round {:2}  acc {:.3}", r.round, r.acc);
    }
    Ok(())
}
