//! Splitting a training set across clients.

use rand::seq::SliceRandom;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_for, stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum PartitionMode {
    Iid,
    Dirichlet { alpha: f64 },
}

/// Disjoint per-client index lists whose union is the whole dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub assignments: Vec<Vec<usize>>,
    pub mode: PartitionMode,
    pub seed: u64,
}

impl PartitionPlan {
    pub fn num_clients(&self) -> usize {
        self.assignments.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.assignments.iter().map(Vec::len).collect()
    }
}

/// Shuffles `0..n` and deals it into near-equal contiguous chunks (sizes differ by at most one).
pub fn partition_iid(n: usize, num_clients: usize, seed: u64) -> Result<PartitionPlan> {
    if num_clients == 0 || num_clients > n {
        return Err(Error::Config(format!(
            "cannot split {n} samples across {num_clients} clients"
        )));
    }
    let mut rng = rng_for(seed, &[stream::PARTITION]);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let base = n / num_clients;
    let extra = n % num_clients;
    let mut assignments = Vec::with_capacity(num_clients);
    let mut start = 0;
    for k in 0..num_clients {
        let size = base + usize::from(k < extra);
        assignments.push(order[start..start + size].to_vec());
        start += size;
    }
    Ok(PartitionPlan {
        assignments,
        mode: PartitionMode::Iid,
        seed,
    })
}

/// Label-skewed split: each class is shared across clients in proportions
/// drawn from a symmetric Dirichlet(`alpha`). Classes are dealt in order and a
/// client already holding at least `n / num_clients` samples gets no share of
/// later classes. Clients left empty receive one sample taken from the
/// currently largest client.
pub fn partition_dirichlet(
    labels: &[usize],
    num_clients: usize,
    alpha: f64,
    seed: u64,
) -> Result<PartitionPlan> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Config(format!(
            "dirichlet alpha must be positive, got {alpha}"
        )));
    }
    if num_clients == 0 || num_clients > labels.len() {
        return Err(Error::Config(format!(
            "cannot split {} samples across {num_clients} clients",
            labels.len()
        )));
    }
    let num_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut rng = rng_for(seed, &[stream::PARTITION]);
    let gamma = Gamma::new(alpha, 1.0).map_err(|e| Error::Config(format!("dirichlet: {e}")))?;
    let mut assignments: Vec<Vec<usize>> = vec![Vec::new(); num_clients];
    let quota = labels.len() as f64 / num_clients as f64;

    for class in 0..num_classes {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.is_empty() {
            continue;
        }
        idx.shuffle(&mut rng);
        let open: Vec<bool> = assignments
            .iter()
            .map(|a| (a.len() as f64) < quota)
            .collect();
        let draws: Vec<f64> = (0..num_clients)
            .map(|k| {
                let g = gamma.sample(&mut rng);
                if open[k] {
                    g
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = draws.iter().sum();
        let proportions: Vec<f64> = if total > 0.0 && total.is_finite() {
            draws.iter().map(|g| g / total).collect()
        } else {
            // Every open draw underflowed: the Dirichlet mass sits on one vertex.
            let winner = draws
                .iter()
                .enumerate()
                .filter(|(k, _)| open[*k])
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map_or(0, |(i, _)| i);
            (0..num_clients)
                .map(|k| f64::from(u8::from(k == winner)))
                .collect()
        };
        let n = idx.len();
        let mut cum = 0.0;
        let mut start = 0;
        for (k, p) in proportions.iter().enumerate() {
            cum += p;
            let end = if k + 1 == num_clients {
                n
            } else {
                ((cum * n as f64).round() as usize).clamp(start, n)
            };
            assignments[k].extend_from_slice(&idx[start..end]);
            start = end;
        }
    }

    while let Some(empty) = assignments.iter().position(Vec::is_empty) {
        let largest = (0..num_clients)
            .max_by(|&a, &b| {
                assignments[a]
                    .len()
                    .cmp(&assignments[b].len())
                    .then(b.cmp(&a))
            })
            .expect("at least one client");
        let moved = assignments[largest]
            .pop()
            .expect("largest client is non-empty");
        assignments[empty].push(moved);
    }

    Ok(PartitionPlan {
        assignments,
        mode: PartitionMode::Dirichlet { alpha },
        seed,
    })
}

pub fn partition(
    labels: &[usize],
    num_clients: usize,
    mode: PartitionMode,
    seed: u64,
) -> Result<PartitionPlan> {
    match mode {
        PartitionMode::Iid => partition_iid(labels.len(), num_clients, seed),
        PartitionMode::Dirichlet { alpha } => partition_dirichlet(labels, num_clients, alpha, seed),
    }
}
