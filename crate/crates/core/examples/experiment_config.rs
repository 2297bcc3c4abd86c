//! A complete experiment from a TOML config, with its artifacts written to a
//! temporary directory and the per-round log converted to long format.

use flain::harness::{emit_series, run_experiment, ExperimentConfig};

const CONFIG: &str = r#"
seed = 5
output_dir = "PLACEHOLDER"
aux_per_class = 10

[dataset]
kind = "synthetic"
dim = 144
train_per_class = 400
test_per_class = 60

[rounds]
num_clients = 10
sampled_per_round = 10
rounds = 10
mcr = 0.4

[attack]
mode = "cba"
pdr = 0.3

[trigger]
source_label = 0
target_label = 5

[aggregator]
kind = "fedavg"

[defense]
kind = "flain"
rho = 0.01
"#;

fn main() -> flain::Result<()> {
    let dir = std::env::temp_dir().join("flain-experiment-config");
    let mut cfg = ExperimentConfig::from_toml(CONFIG, "inline.toml".as_ref())?;
    cfg.output_dir = dir.clone();

    let outcome = run_experiment(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&outcome.record)?);

    let mut names: Vec<_> = std::fs::read_dir(&dir)
        .map_err(|e| flain::Error::io(&dir, e))?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect();
    names.sort();
    println!("artifacts in {}: {names:?}", dir.display());

    let csv = std::fs::read(dir.join("rounds.csv")).map_err(|e| flain::Error::io(&dir, e))?;
    let mut long = Vec::new();
    let rows = emit_series(csv.as_slice(), &mut long)?;
    println!("{rows} long-format rows, first lines:");
    for line in String::from_utf8_lossy(&long).lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
