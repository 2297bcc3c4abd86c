use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use flain::federation::AggregatorKind;
use flain::harness::experiment::{
    apply_defense, measure, prepare_data, run_experiment, write_json, DEFENDED_FILE,
    DEFENSE_REPORT_FILE, RECORD_FILE,
};
use flain::harness::{
    emit_series, run_sweep, DefenseConfig, ExperimentConfig, RunRecord, SweepGrid,
};
use flain::metrics::MetricsRecord;
use flain::nn::checkpoint;
use flain::{Error, Result};

#[derive(Parser)]
#[command(
    name = "flain",
    version,
    about = "Federated backdoor simulator with the FLAIN defense"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run federated training (with the configured attack and defense).
    Train {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        seed: u64,
    },
    /// Apply the configured defense to a checkpoint.
    Defend {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        checkpoint: PathBuf,
        /// Reference checkpoint for OPS; defaults to the input checkpoint.
        #[arg(long)]
        baseline: Option<PathBuf>,
    },
    /// Compute ASR, ACC and OPS of a checkpoint.
    Eval {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        model: PathBuf,
        /// Reference checkpoint for OPS; defaults to the model itself.
        #[arg(long)]
        baseline: Option<PathBuf>,
        /// Also write the record to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid over MCR, PDR and aggregator.
    Sweep {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "mcr-grid", value_delimiter = ',', required = true)]
        mcr_grid: Vec<f64>,
        #[arg(long = "pdr-grid", value_delimiter = ',', required = true)]
        pdr_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "fedavg")]
        aggregators: Vec<String>,
    },
    /// Convert a per-round CSV to long format.
    EmitSeries {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Flags mirroring config keys; each one overrides the file.
#[derive(Args)]
struct Overrides {
    /// Experiment TOML file.
    #[arg(long)]
    config: PathBuf,
    /// Directory for checkpoints, CSV and JSON outputs.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Communication rounds T.
    #[arg(long)]
    rounds: Option<usize>,
    /// Number of clients; all of them take part each round.
    #[arg(long)]
    num_clients: Option<usize>,
    /// Malicious client ratio.
    #[arg(long)]
    mcr: Option<f64>,
    /// Poison data ratio of each malicious client.
    #[arg(long)]
    pdr: Option<f64>,
    /// fedavg, krum, median, trimmed_mean or rlr.
    #[arg(long)]
    aggregator: Option<String>,
    /// none, pruning or flain.
    #[arg(long)]
    defense: Option<String>,
    /// FLAIN accuracy tolerance.
    #[arg(long)]
    rho: Option<f64>,
    /// FLAIN threshold step.
    #[arg(long)]
    step: Option<f64>,
    /// Pruning activation threshold.
    #[arg(long)]
    lambda: Option<f64>,
    /// Auxiliary samples per class held by the server.
    #[arg(long)]
    aux_per_class: Option<usize>,
    /// Index of the dense layer whose inputs are profiled.
    #[arg(long)]
    tau_layer: Option<usize>,
}

impl Overrides {
    fn load(&self, seed: Option<u64>) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = seed {
            cfg.seed = seed;
            cfg.rounds.seed = seed;
        }
        if let Some(dir) = &self.output_dir {
            cfg.output_dir = dir.clone();
        }
        if let Some(r) = self.rounds {
            cfg.rounds.rounds = r;
        }
        if let Some(n) = self.num_clients {
            cfg.rounds.num_clients = n;
            cfg.rounds.sampled_per_round = n;
        }
        if let Some(m) = self.mcr {
            cfg.rounds.mcr = m;
        }
        if let Some(p) = self.pdr {
            cfg.attack
                .as_mut()
                .ok_or_else(|| Error::Config("--pdr needs an [attack] section".into()))?
                .pdr = p;
        }
        if let Some(a) = &self.aggregator {
            cfg.aggregator = AggregatorKind::parse(a)?;
        }
        if let Some(d) = &self.defense {
            cfg.defense = match d.as_str() {
                "none" => DefenseConfig::None,
                "pruning" => DefenseConfig::Pruning { lambda: 0.0 },
                "flain" => DefenseConfig::Flain {
                    step: flain::defense::FlainConfig::default().step,
                    rho: flain::defense::FlainConfig::default().rho,
                },
                other => return Err(Error::Config(format!("unknown defense {other:?}"))),
            };
        }
        match &mut cfg.defense {
            DefenseConfig::Flain { step, rho } => {
                *step = self.step.unwrap_or(*step);
                *rho = self.rho.unwrap_or(*rho);
            }
            DefenseConfig::Pruning { lambda } => *lambda = self.lambda.unwrap_or(*lambda),
            DefenseConfig::None => {}
        }
        if let Some(a) = self.aux_per_class {
            cfg.aux_per_class = a;
        }
        if let Some(t) = self.tau_layer {
            cfg.model.tau_layer = t;
        }
        Ok(cfg)
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(io::stdout(), "{text}") {
        // a closed pipe (e.g. `| head`) is not a failure
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other.map_err(|e| Error::io("<stdout>", e)),
    }
}

fn eval_record(
    cfg: &ExperimentConfig,
    model: &Path,
    baseline: Option<&Path>,
) -> Result<MetricsRecord> {
    let data = prepare_data(cfg)?;
    let m = measure(&checkpoint::load(model)?, &data)?;
    let b = match baseline {
        Some(path) => measure(&checkpoint::load(path)?, &data)?,
        None => m,
    };
    Ok(MetricsRecord::new(m.asr, m.acc, b))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train { overrides, seed } => {
            let cfg = overrides.load(Some(seed))?;
            let outcome = run_experiment(&cfg)?;
            print_json(&outcome.record)
        }
        Command::Defend {
            overrides,
            seed,
            checkpoint: input,
            baseline,
        } => {
            let cfg = overrides.load(seed)?;
            if cfg.defense == DefenseConfig::None {
                return Err(Error::Config(
                    "defend needs a defense (set [defense] or --defense)".into(),
                ));
            }
            let data = prepare_data(&cfg)?;
            let model = checkpoint::load(&input)?;
            let reference = match &baseline {
                Some(path) => checkpoint::load(path)?,
                None => model.clone(),
            };
            let (defended, report) = apply_defense(&cfg.defense, &model, &data.aux)?;
            let m = measure(&defended, &data)?;
            let record = RunRecord {
                metrics: MetricsRecord::new(m.asr, m.acc, measure(&reference, &data)?),
                defense_report: report,
            };
            let dir = &cfg.output_dir;
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            checkpoint::save(&defended, dir.join(DEFENDED_FILE))?;
            if let Some(report) = &record.defense_report {
                write_json(&dir.join(DEFENSE_REPORT_FILE), report)?;
            }
            write_json(&dir.join(RECORD_FILE), &record)?;
            print_json(&record)
        }
        Command::Eval {
            overrides,
            seed,
            model,
            baseline,
            out,
        } => {
            let cfg = overrides.load(seed)?;
            let record = eval_record(&cfg, &model, baseline.as_deref())?;
            if let Some(path) = out {
                write_json(&path, &record)?;
            }
            print_json(&record)
        }
        Command::Sweep {
            overrides,
            seed,
            mcr_grid,
            pdr_grid,
            aggregators,
        } => {
            let cfg = overrides.load(seed)?;
            let grid = SweepGrid {
                mcr: mcr_grid,
                pdr: pdr_grid,
                aggregators: aggregators
                    .iter()
                    .map(|a| AggregatorKind::parse(a))
                    .collect::<Result<_>>()?,
            };
            print_json(&run_sweep(&cfg, &grid)?)
        }
        Command::EmitSeries { input, output } => {
            let reader = BufReader::new(File::open(&input).map_err(|e| Error::io(&input, e))?);
            match output {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
                    emit_series(reader, BufWriter::new(file))?;
                }
                None => {
                    emit_series(reader, io::stdout().lock())?;
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let category = e.category();
            eprintln!("error ({}): {e}", category.name());
            ExitCode::from(category.exit_code())
        }
    }
}
