//! Server-side aggregation rules over flattened client updates.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::federation::local::ClientUpdate;
use crate::nn::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AggregatorKind {
    Fedavg,
    Krum {
        /// Assumed number of Byzantine clients; defaults to the true malicious
        /// count, capped at the largest value Krum admits.
        #[serde(default)]
        f: Option<usize>,
        /// Score by the summed Euclidean distance to every other update
        /// instead of the squared distances to the nearest `m - f - 2`.
        #[serde(default)]
        full_sum: bool,
    },
    Median,
    TrimmedMean {
        beta: usize,
    },
    Rlr {
        /// Sign-vote threshold; defaults to `ceil(m / 2) + 1`.
        #[serde(default)]
        theta: Option<usize>,
    },
}

impl AggregatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            AggregatorKind::Fedavg => "fedavg",
            AggregatorKind::Krum { .. } => "krum",
            AggregatorKind::Median => "median",
            AggregatorKind::TrimmedMean { .. } => "trimmed_mean",
            AggregatorKind::Rlr { .. } => "rlr",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "fedavg" => AggregatorKind::Fedavg,
            "krum" => AggregatorKind::Krum {
                f: None,
                full_sum: false,
            },
            "median" => AggregatorKind::Median,
            "trimmed_mean" => AggregatorKind::TrimmedMean { beta: 1 },
            "rlr" => AggregatorKind::Rlr { theta: None },
            other => return Err(Error::Config(format!("unknown aggregator {other:?}"))),
        })
    }
}

pub fn default_krum_f(malicious: usize, m: usize) -> usize {
    malicious.min(m.saturating_sub(3) / 2)
}

pub fn default_rlr_theta(m: usize) -> usize {
    m.div_ceil(2) + 1
}

fn check_updates(updates: &[ClientUpdate]) -> Result<usize> {
    let first = updates.first().ok_or(Error::NoUpdates)?;
    let dim = first.delta.len();
    if let Some(u) = updates.iter().find(|u| u.delta.len() != dim) {
        return Err(Error::Shape(format!(
            "client {} sent {} parameters, expected {dim}",
            u.client_id,
            u.delta.len()
        )));
    }
    Ok(dim)
}

/// `w + alpha * sum(n_k * delta_k) / sum(n_k)`.
pub fn aggregate_fedavg(
    updates: &[ClientUpdate],
    global: &ModelParams,
    alpha: f64,
) -> Result<ModelParams> {
    let dim = check_updates(updates)?;
    let total: f64 = updates.iter().map(|u| u.n_k as f64).sum();
    if !(total > 0.0) {
        return Err(Error::Config("client sample counts sum to zero".into()));
    }
    let mut mean = vec![0.0; dim];
    for u in updates {
        let w = u.n_k as f64;
        for (m, d) in mean.iter_mut().zip(&u.delta) {
            *m += w * d;
        }
    }
    mean.iter_mut().for_each(|m| *m /= total);
    let mut next = global.clone();
    next.add_scaled(&mean, alpha)?;
    Ok(next)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Position in `updates` of the update Krum selects. Ties go to the lowest `client_id`.
pub fn aggregate_krum(updates: &[ClientUpdate], f: usize, full_sum: bool) -> Result<usize> {
    check_updates(updates)?;
    let m = updates.len();
    if m < 2 * f + 3 {
        return Err(Error::TooFewUpdates {
            rule: "krum",
            needed: 2 * f + 3,
            got: m,
        });
    }
    let mut dists = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = sq_dist(&updates[i].delta, &updates[j].delta);
            dists[i][j] = d;
            dists[j][i] = d;
        }
    }
    let scores: Vec<f64> = (0..m)
        .map(|i| {
            let mut others: Vec<f64> = (0..m).filter(|&j| j != i).map(|j| dists[i][j]).collect();
            if full_sum {
                others.iter().map(|d| d.sqrt()).sum()
            } else {
                others.sort_by(f64::total_cmp);
                others[..m - f - 2].iter().sum()
            }
        })
        .collect();
    let best = (0..m)
        .min_by(|&a, &b| {
            scores[a]
                .total_cmp(&scores[b])
                .then(updates[a].client_id.cmp(&updates[b].client_id))
        })
        .expect("non-empty");
    Ok(best)
}

fn column_values(updates: &[ClientUpdate], j: usize, buf: &mut Vec<f64>) {
    buf.clear();
    buf.extend(updates.iter().map(|u| u.delta[j]));
    buf.sort_by(f64::total_cmp);
}

/// Coordinate-wise median; an even count averages the two middle values.
pub fn aggregate_median(updates: &[ClientUpdate]) -> Result<Vec<f64>> {
    let dim = check_updates(updates)?;
    let m = updates.len();
    let mut buf = Vec::with_capacity(m);
    Ok((0..dim)
        .map(|j| {
            column_values(updates, j, &mut buf);
            if m % 2 == 1 {
                buf[m / 2]
            } else {
                (buf[m / 2 - 1] + buf[m / 2]) / 2.0
            }
        })
        .collect())
}

/// Coordinate-wise mean after dropping the `beta` largest and `beta` smallest values.
pub fn aggregate_trimmed_mean(updates: &[ClientUpdate], beta: usize) -> Result<Vec<f64>> {
    let dim = check_updates(updates)?;
    let m = updates.len();
    if m <= 2 * beta {
        return Err(Error::TooFewUpdates {
            rule: "trimmed mean",
            needed: 2 * beta + 1,
            got: m,
        });
    }
    let kept = (m - 2 * beta) as f64;
    let mut buf = Vec::with_capacity(m);
    Ok((0..dim)
        .map(|j| {
            column_values(updates, j, &mut buf);
            buf[beta..m - beta].iter().sum::<f64>() / kept
        })
        .collect())
}

fn sign(v: f64) -> i64 {
    match v.partial_cmp(&0.0) {
        Some(Ordering::Greater) => 1,
        Some(Ordering::Less) => -1,
        _ => 0,
    }
}

/// Robust learning rate: per coordinate, the unweighted mean delta is applied
/// with `+alpha` when `|sum of signs| >= theta` and `-alpha` otherwise.
/// Returns the step to add to the global model.
pub fn aggregate_rlr(updates: &[ClientUpdate], theta: usize, alpha: f64) -> Result<Vec<f64>> {
    let dim = check_updates(updates)?;
    let m = updates.len() as f64;
    Ok((0..dim)
        .map(|j| {
            let votes: i64 = updates.iter().map(|u| sign(u.delta[j])).sum();
            let mean = updates.iter().map(|u| u.delta[j]).sum::<f64>() / m;
            let lr = if votes.unsigned_abs() as usize >= theta {
                alpha
            } else {
                -alpha
            };
            lr * mean
        })
        .collect())
}

/// Applies one aggregation rule and returns the next global model.
///
/// `malicious` is the true malicious-client count, used for Krum's default `f`.
pub fn aggregate(
    kind: &AggregatorKind,
    updates: &[ClientUpdate],
    global: &ModelParams,
    alpha: f64,
    malicious: usize,
) -> Result<ModelParams> {
    let m = updates.len();
    let step = match *kind {
        AggregatorKind::Fedavg => return aggregate_fedavg(updates, global, alpha),
        AggregatorKind::Krum { f, full_sum } => {
            let f = f.unwrap_or_else(|| default_krum_f(malicious, m));
            let chosen = aggregate_krum(updates, f, full_sum)?;
            updates[chosen].delta.iter().map(|d| alpha * d).collect()
        }
        AggregatorKind::Median => aggregate_median(updates)?
            .iter()
            .map(|d| alpha * d)
            .collect(),
        AggregatorKind::TrimmedMean { beta } => aggregate_trimmed_mean(updates, beta)?
            .iter()
            .map(|d| alpha * d)
            .collect(),
        AggregatorKind::Rlr { theta } => aggregate_rlr(
            updates,
            theta.unwrap_or_else(|| default_rlr_theta(m)),
            alpha,
        )?,
    };
    let mut next = global.clone();
    next.add_scaled(&step, 1.0)?;
    Ok(next)
}
