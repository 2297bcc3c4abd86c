#![allow(dead_code, clippy::needless_range_loop)]

pub mod reference;

use flain::data::LabeledDataset;
use flain::nn::{Activation, Dense, LayerSpec, ModelParams};
use flain::Tensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// A model with every weight and bias drawn uniformly from [-1, 1].
pub fn random_model(dims: &[usize], tau: usize, seed: u64) -> ModelParams {
    let mut r = rng(seed);
    let n = dims.len() - 1;
    let layers: Vec<Dense> = (0..n)
        .map(|l| {
            let act = if l + 1 == n {
                Activation::Identity
            } else {
                Activation::Relu
            };
            Dense {
                weights: Tensor::new(
                    vec![dims[l + 1], dims[l]],
                    random_vec(&mut r, dims[l + 1] * dims[l], -1.0, 1.0),
                )
                .unwrap(),
                bias: Tensor::from_vec(random_vec(&mut r, dims[l + 1], -1.0, 1.0)),
                activation: act,
            }
        })
        .collect();
    let w0 = Tensor::new(
        layers[tau].weights.shape().to_vec(),
        random_vec(&mut r, layers[tau].weights.len(), -1.0, 1.0),
    )
    .unwrap();
    ModelParams::from_parts(layers, tau, w0).unwrap()
}

pub fn specs(dims: &[usize]) -> Vec<LayerSpec> {
    let n = dims.len() - 1;
    (0..n)
        .map(|l| {
            if l + 1 == n {
                LayerSpec::linear(dims[l], dims[l + 1])
            } else {
                LayerSpec::relu(dims[l], dims[l + 1])
            }
        })
        .collect()
}

/// Independent dense-chain forward: plain nested loops over the raw arrays.
pub fn oracle_forward(model: &ModelParams, input: &[f64]) -> Vec<f64> {
    let mut a = input.to_vec();
    for layer in model.layers() {
        let (out, inp) = (layer.weights.shape()[0], layer.weights.shape()[1]);
        let w = layer.weights.data();
        let mut z = vec![0.0; out];
        for o in 0..out {
            let mut s = layer.bias.data()[o];
            for i in 0..inp {
                s += w[o * inp + i] * a[i];
            }
            z[o] = match layer.activation {
                Activation::Relu => s.max(0.0),
                Activation::Identity => s,
            };
        }
        a = z;
    }
    a
}

pub fn oracle_argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}

pub fn dataset(rows: Vec<Vec<f64>>, labels: Vec<usize>, num_classes: usize) -> LabeledDataset {
    let d = rows[0].len();
    let n = rows.len();
    let data: Vec<f64> = rows.into_iter().flatten().collect();
    LabeledDataset::new(
        Tensor::new(vec![n, d], data).unwrap(),
        labels,
        num_classes,
        (1, d),
    )
    .unwrap()
}

use flain::federation::ClientUpdate;

pub fn updates_from(deltas: &[Vec<f64>]) -> Vec<ClientUpdate> {
    deltas
        .iter()
        .enumerate()
        .map(|(k, d)| ClientUpdate {
            client_id: k,
            n_k: 1,
            delta: d.clone(),
        })
        .collect()
}

pub fn random_updates(r: &mut ChaCha8Rng, m: usize, dim: usize) -> Vec<ClientUpdate> {
    let deltas: Vec<Vec<f64>> = (0..m).map(|_| random_vec(r, dim, -1.0, 1.0)).collect();
    updates_from(&deltas)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with_last = subsets(n - 1, k - 1);
    for s in &mut with_last {
        s.push(n - 1);
    }
    let mut out = subsets(n - 1, k);
    out.extend(with_last);
    out
}

/// Krum by exhaustive search: a candidate's score is the smallest squared-distance
/// sum over every subset of `m - f - 2` other updates.
pub fn oracle_krum(deltas: &[Vec<f64>], f: usize) -> usize {
    let m = deltas.len();
    let mut best = (f64::INFINITY, 0);
    for i in 0..m {
        let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
        let mut score = f64::INFINITY;
        for s in subsets(others.len(), m - f - 2) {
            let mut total = 0.0;
            for &p in &s {
                let j = others[p];
                for c in 0..deltas[i].len() {
                    total += (deltas[i][c] - deltas[j][c]).powi(2);
                }
            }
            score = score.min(total);
        }
        if score < best.0 {
            best = (score, i);
        }
    }
    best.1
}

fn column(deltas: &[Vec<f64>], c: usize) -> Vec<f64> {
    deltas.iter().map(|d| d[c]).collect()
}

/// k-th smallest by repeated minimum removal.
fn kth(values: &[f64], k: usize) -> f64 {
    let mut v = values.to_vec();
    for _ in 0..k {
        let (pos, _) =
            v.iter().enumerate().fold(
                (0, f64::INFINITY),
                |acc, (i, &x)| if x < acc.1 { (i, x) } else { acc },
            );
        v.remove(pos);
    }
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn oracle_median(deltas: &[Vec<f64>]) -> Vec<f64> {
    let m = deltas.len();
    (0..deltas[0].len())
        .map(|c| {
            let col = column(deltas, c);
            if m % 2 == 1 {
                kth(&col, m / 2)
            } else {
                0.5 * (kth(&col, m / 2 - 1) + kth(&col, m / 2))
            }
        })
        .collect()
}

pub fn oracle_trimmed_mean(deltas: &[Vec<f64>], beta: usize) -> Vec<f64> {
    let m = deltas.len();
    (0..deltas[0].len())
        .map(|c| {
            let col = column(deltas, c);
            let kept: f64 = (beta..m - beta).map(|k| kth(&col, k)).sum();
            kept / (m - 2 * beta) as f64
        })
        .collect()
}

pub fn oracle_rlr(deltas: &[Vec<f64>], theta: usize, alpha: f64) -> Vec<f64> {
    let m = deltas.len();
    (0..deltas[0].len())
        .map(|c| {
            let mut votes: i64 = 0;
            let mut sum = 0.0;
            for d in deltas {
                if d[c] > 0.0 {
                    votes += 1;
                } else if d[c] < 0.0 {
                    votes -= 1;
                }
                sum += d[c];
            }
            let lr = if votes.abs() >= theta as i64 {
                alpha
            } else {
                -alpha
            };
            lr * sum / m as f64
        })
        .collect()
}

pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// FedAvg (ASR, ACC) of the reference block a row belongs to.
pub fn reference_baseline(dataset: &str, target: usize) -> (f64, f64) {
    reference::REFERENCE_ROWS
        .iter()
        .find(|r| r.0 == dataset && r.1 == target && r.2 == "FedAvg")
        .map(|r| (r.3, r.4))
        .expect("every block has a FedAvg row")
}
