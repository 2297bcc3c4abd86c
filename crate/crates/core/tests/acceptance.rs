//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use common::*;
use flain::data::partition_dirichlet;
use flain::defense::{flain as run_flain, flip_updates, FlainConfig, FlipSet, Termination};
use flain::federation::{aggregate_krum, aggregate_median, aggregate_rlr, aggregate_trimmed_mean};
use flain::harness::{apply_defense, execute, prepare_data, run_experiment, ExperimentConfig};
use flain::metrics::{compute_ops, display3};
use flain::nn::{backward, checkpoint, loss};
use flain::Tensor;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ops_exactness() -> Outcome {
    let mut matched = 0;
    let mut total = 0;
    let mut misses = Vec::new();
    for &(dataset, target, defense, asr, acc, printed) in reference::REFERENCE_ROWS {
        if defense == "FedAvg" {
            continue;
        }
        total += 1;
        let (b_asr, b_acc) = reference_baseline(dataset, target);
        let got = display3(compute_ops(acc, asr, b_acc, b_asr).unwrap());
        if got == printed {
            matched += 1;
        } else {
            misses.push(format!("{dataset}/{target}/{defense}: {got} vs {printed}"));
        }
    }
    let pick = |dataset: &str, defense: &str| {
        let r = reference::REFERENCE_ROWS
            .iter()
            .find(|r| r.0 == dataset && r.1 == 5 && r.2 == defense)
            .unwrap();
        let (b_asr, b_acc) = reference_baseline(dataset, 5);
        display3(compute_ops(r.4, r.3, b_acc, b_asr).unwrap())
    };
    let flain_mnist = pick("MNIST", "FLAIN");
    let pruning_cifar = pick("CIFAR-10", "Pruning");
    outcome(
        misses.is_empty() && flain_mnist == "+1" && pruning_cifar == "+0.129",
        format!(
            "{matched}/{total} entries exact after rounding; FLAIN/MNIST(0,5) {flain_mnist}, Pruning/CIFAR-10(0,5) {pruning_cifar}{}",
            if misses.is_empty() { String::new() } else { format!("; misses {misses:?}") }
        ),
    )
}

fn gradient_suite() -> Outcome {
    let mut r = rng(2024);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for probe in 0..200 {
        let m = random_model(&[16, 8, 4], 1, 100 + probe / 20);
        let xs: Vec<Vec<f64>> = (0..4).map(|_| random_vec(&mut r, 16, 0.0, 1.0)).collect();
        let refs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
        let labels: Vec<usize> = (0..4).map(|_| r.random_range(0..4)).collect();
        let g = backward(&m, &refs, &labels).unwrap().1.flatten();
        let i = r.random_range(0..m.num_params());
        let mut d = vec![0.0; m.num_params()];
        d[i] = h;
        let mut plus = m.clone();
        plus.add_scaled(&d, 1.0).unwrap();
        let mut minus = m.clone();
        minus.add_scaled(&d, -1.0).unwrap();
        let fd = (loss(&plus, &refs, &labels).unwrap() - loss(&minus, &refs, &labels).unwrap())
            / (2.0 * h);
        let rel = (g[i] - fd).abs() / (g[i].abs() + fd.abs()).max(1e-7);
        worst = worst.max(rel);
    }
    outcome(
        worst < 1e-4,
        format!("200 probes on 16->8->4, worst relative error {worst:.2e} (< 1e-4)"),
    )
}

fn aggregator_oracles() -> Outcome {
    let mut r = rng(77);
    let mut failures = [0usize; 4];
    for _ in 0..500 {
        let m = r.random_range(3..=9);
        let dim = r.random_range(1..=20);
        let deltas: Vec<Vec<f64>> = (0..m).map(|_| random_vec(&mut r, dim, -1.0, 1.0)).collect();
        let ups = updates_from(&deltas);
        let f = r.random_range(0..=(m - 3) / 2);
        let beta = r.random_range(0..=(m - 1) / 2);
        let theta = r.random_range(0..=m);
        let alpha = r.random_range(0.1..2.0);
        failures[0] +=
            usize::from(aggregate_krum(&ups, f, false).unwrap() != oracle_krum(&deltas, f));
        failures[1] += usize::from(!close(
            &aggregate_median(&ups).unwrap(),
            &oracle_median(&deltas),
            1e-12,
        ));
        failures[2] += usize::from(!close(
            &aggregate_trimmed_mean(&ups, beta).unwrap(),
            &oracle_trimmed_mean(&deltas, beta),
            1e-12,
        ));
        failures[3] += usize::from(!close(
            &aggregate_rlr(&ups, theta, alpha).unwrap(),
            &oracle_rlr(&deltas, theta, alpha),
            1e-12,
        ));
    }
    outcome(
        failures.iter().all(|&f| f == 0),
        format!(
            "500 instances per rule (m <= 9, dim <= 20, tol 1e-12); mismatches krum {} median {} trimmed {} rlr {}",
            failures[0], failures[1], failures[2], failures[3]
        ),
    )
}

/// Half of the triples sit on a 2^-20 grid, where every intermediate is
/// exact; the other half are continuous uniform values.
fn flip_and_rescale() -> Outcome {
    let mut r = rng(31);
    let mut bitwise_fail = 0;
    for triple in 0..200 {
        let rows = r.random_range(1..=8);
        let cols = r.random_range(1..=8);
        let chosen: Vec<usize> = (0..cols).filter(|_| r.random_bool(0.5)).collect();
        let flips = FlipSet::from_indices(chosen, 0.0);
        let grid = |r: &mut rand_chacha::ChaCha8Rng| {
            (r.random_range(-(8i64 << 20)..(8i64 << 20)) as f64) / (1u64 << 20) as f64
        };
        let (w0, w): (Vec<f64>, Vec<f64>) = if triple % 2 == 0 {
            (
                (0..rows * cols).map(|_| grid(&mut r)).collect(),
                (0..rows * cols).map(|_| grid(&mut r)).collect(),
            )
        } else {
            (
                random_vec(&mut r, rows * cols, -8.0, 8.0),
                random_vec(&mut r, rows * cols, -8.0, 8.0),
            )
        };
        let w0 = Tensor::new(vec![rows, cols], w0).unwrap();
        let w = Tensor::new(vec![rows, cols], w).unwrap();
        let twice = flip_updates(&w0, &flip_updates(&w0, &w, &flips).unwrap(), &flips).unwrap();
        bitwise_fail += usize::from(twice.data() != w.data());
    }

    let mut exits = 0;
    let mut worst_norm: f64 = 0.0;
    for seed in 0..60 {
        let m = random_model(&[5, 8, 3], 1, seed);
        let mut r = rng(seed + 1000);
        let rows: Vec<Vec<f64>> = (0..30).map(|_| random_vec(&mut r, 5, 0.0, 1.0)).collect();
        let labels: Vec<usize> = rows.iter().map(|x| m.predict(x).unwrap()).collect();
        let aux = flain::data::AuxiliarySet {
            per_class: 0,
            indices: (0..30).collect(),
            dataset: dataset(rows, labels, 3),
        };
        let (out, rep) = run_flain(
            &m,
            &aux,
            &FlainConfig {
                step: 1e-3,
                rho: 0.05,
            },
        )
        .unwrap();
        if rep.terminated_by == Termination::Tolerance {
            exits += 1;
            let n0 = m.tau_layer().weights.frobenius_norm();
            worst_norm = worst_norm.max((out.tau_layer().weights.frobenius_norm() - n0).abs() / n0);
        }
    }
    outcome(
        bitwise_fail == 0 && exits > 0 && worst_norm <= 1e-9,
        format!(
            "200 triples (100 grid, 100 continuous): {bitwise_fail} not restored bitwise; \
             {exits} tolerance exits, worst norm error {worst_norm:.1e} (<= 1e-9)"
        ),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn desk_scale_end_to_end() -> Outcome {
    let mut undefended = Vec::new();
    let mut defended = Vec::new();
    let mut drop = Vec::new();
    for seed in 1..=3 {
        let cfg = ExperimentConfig::desk_scale(seed, "unused");
        let data = prepare_data(&cfg).unwrap();
        let out = execute(&cfg, &data, None).unwrap();
        let m = &out.record.metrics;
        undefended.push(m.baseline.asr);
        defended.push(m.asr);
        drop.push(m.baseline.acc - m.acc);
        println!(
            "    seed {seed}: undefended ASR {:.3} ACC {:.3}; FLAIN ASR {:.3} ACC {:.3}",
            m.baseline.asr, m.baseline.acc, m.asr, m.acc
        );
    }
    let (u, d, a) = (median(undefended), median(defended), median(drop));
    outcome(
        u >= 0.90 && d <= 0.10 && a <= 0.05,
        format!("median over seeds 1-3: undefended ASR {u:.3} (>= 0.90), FLAIN ASR {d:.3} (<= 0.10), ACC drop {a:.3} (<= 0.05)"),
    )
}

fn mcr_trend() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for mcr in [0.1, 0.3, 0.5] {
        let mut cfg = ExperimentConfig::desk_scale(1, "unused");
        cfg.rounds.mcr = mcr;
        let data = prepare_data(&cfg).unwrap();
        let m = execute(&cfg, &data, None).unwrap().record.metrics;
        pass &= m.baseline.asr >= 0.85 && m.asr <= 0.15;
        parts.push(format!(
            "MCR {mcr}: undefended {:.3} FLAIN {:.3}",
            m.baseline.asr, m.asr
        ));
    }
    outcome(
        pass,
        format!("{} (undefended >= 0.85, FLAIN <= 0.15)", parts.join(", ")),
    )
}

fn dirichlet_check() -> Outcome {
    let labels: Vec<usize> = (0..10_000).map(|i| i % 10).collect();
    let shares = |idx: &[usize]| -> Vec<f64> {
        (0..10)
            .map(|c| idx.iter().filter(|&&i| labels[i] == c).count() as f64 / idx.len() as f64)
            .collect()
    };
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        for idx in &partition_dirichlet(&labels, 10, 1e6, seed)
            .unwrap()
            .assignments
        {
            for s in shares(idx) {
                worst = worst.max((s - 0.1).abs());
            }
        }
    }
    let seeds = 50;
    let skewed = (0..seeds)
        .filter(|&seed| {
            let plan = partition_dirichlet(&labels, 10, 0.5, seed).unwrap();
            plan.assignments
                .iter()
                .flat_map(|idx| shares(idx))
                .fold(0.0, f64::max)
                >= 0.2
        })
        .count();
    outcome(
        worst <= 0.02 && skewed * 5 >= seeds as usize * 4,
        format!(
            "alpha 1e6 worst class-share deviation {worst:.4} (<= 0.02); alpha 0.5 max share >= 2x global in {skewed}/{seeds} seeds (>= 80%)"
        ),
    )
}

fn small_config(dir: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::desk_scale(11, dir);
    if let flain::harness::DatasetSource::Synthetic {
        train_per_class,
        test_per_class,
        ..
    } = &mut cfg.dataset
    {
        *train_per_class = 300;
        *test_per_class = 60;
    }
    cfg.rounds.rounds = 6;
    cfg.aux_per_class = 10;
    cfg
}

fn train_and_defend(cfg: &ExperimentConfig, threads: usize) -> Vec<(String, Vec<u8>)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| {
        run_experiment(cfg).unwrap();
        // a separate defend pass over the saved checkpoint
        let data = prepare_data(cfg).unwrap();
        let trained = checkpoint::load(cfg.output_dir.join("model.ckpt")).unwrap();
        let (defended, report) = apply_defense(&cfg.defense, &trained, &data.aux).unwrap();
        let mut files: Vec<(String, Vec<u8>)> = [
            "model.ckpt",
            "defended.ckpt",
            "record.json",
            "defense_report.json",
            "rounds.csv",
        ]
        .iter()
        .map(|f| {
            (
                f.to_string(),
                std::fs::read(cfg.output_dir.join(f)).unwrap(),
            )
        })
        .collect();
        files.push((
            "defend pass checkpoint".into(),
            checkpoint::to_bytes(&defended),
        ));
        files.push((
            "defend pass report".into(),
            serde_json::to_vec(&report).unwrap(),
        ));
        files
    })
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<(String, Vec<u8>)>> = [(1, "a"), (4, "b"), (1, "c")]
        .iter()
        .map(|&(threads, name)| train_and_defend(&small_config(&dir.path().join(name)), threads))
        .collect();
    let mut differing = Vec::new();
    for other in &runs[1..] {
        for ((name, a), (_, b)) in runs[0].iter().zip(other) {
            if a != b && !differing.contains(name) {
                differing.push(name.clone());
            }
        }
    }
    let defend_matches = runs[0][1].1 == runs[0][5].1;
    outcome(
        differing.is_empty() && defend_matches,
        format!(
            "3 train+defend runs (1, 4, 1 threads): {} artifacts compared, differing {differing:?}, defend pass matches run: {defend_matches}",
            runs[0].len()
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("1 OPS exactness", ops_exactness),
        ("2 gradient suite", gradient_suite),
        ("3 aggregator oracles", aggregator_oracles),
        ("4 flip involution and rescale", flip_and_rescale),
        ("5 desk-scale end-to-end", desk_scale_end_to_end),
        ("6 MCR robustness trend", mcr_trend),
        ("7 Dirichlet non-IID", dirichlet_check),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let o = check();
        println!(
            "{} criterion {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
