//! Monte Carlo estimates of tuple ordering distributions and events.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::perm::{MAX_TUPLE, factorial, reorder_map, tuple_order_index};
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::sampler::PreparedSampler;

/// Draws per Monte Carlo chunk. Fixed so results do not depend on the
/// number of worker threads.
pub const CHUNK: u64 = 8192;

/// Run `total` draws in fixed-size chunks on the rayon pool. Chunk `c` uses
/// the stream `(seed, label, c)`; results come back in chunk order.
pub fn par_chunks<T, F>(seed: u64, label: &str, total: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut rand_chacha::ChaCha8Rng, u64) -> T + Sync,
{
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, label, c);
            let count = CHUNK.min(total - c * CHUNK);
            f(&mut rng, count)
        })
        .collect()
}

/// Empirical distribution of the relative order of a vertex tuple. Cell `c`
/// is the lexicographic index of the permutation listing tuple positions from
/// smallest to largest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingDistribution {
    pub tuple: Vec<usize>,
    pub counts: Vec<u64>,
    pub probabilities: Vec<f64>,
    pub sample_count: u64,
    /// Draws in which two tuple keys were equal (broken by vertex index).
    pub ties: u64,
}

impl OrderingDistribution {
    pub fn from_counts(tuple: Vec<usize>, counts: Vec<u64>, ties: u64) -> Self {
        let n: u64 = counts.iter().sum();
        let probabilities = counts
            .iter()
            .map(|&c| if n == 0 { 0.0 } else { c as f64 / n as f64 })
            .collect();
        OrderingDistribution {
            tuple,
            counts,
            probabilities,
            sample_count: n,
            ties,
        }
    }

    pub fn k(&self) -> usize {
        self.tuple.len()
    }

    /// The distribution of the tuple `w` with `w[i] = tuple[sigma[i]]`.
    pub fn reorder(&self, sigma: &[usize]) -> OrderingDistribution {
        let map = reorder_map(sigma);
        let mut counts = vec![0; self.counts.len()];
        for (c, &m) in map.iter().enumerate() {
            counts[m] = self.counts[c];
        }
        let tuple = sigma.iter().map(|&s| self.tuple[s]).collect();
        OrderingDistribution::from_counts(tuple, counts, self.ties)
    }
}

fn check_tuples(sampler: &PreparedSampler, tuples: &[Vec<usize>]) -> Result<()> {
    for t in tuples {
        if t.is_empty() || t.len() > MAX_TUPLE {
            return Err(Error::InvalidArgument(format!(
                "tuple length must be 1..={MAX_TUPLE}, got {}",
                t.len()
            )));
        }
        if let Some(&v) = t.iter().find(|&&v| v >= sampler.n()) {
            return Err(Error::DomainMismatch(format!(
                "vertex {v} outside the sampler's graph on {} vertices",
                sampler.n()
            )));
        }
        let mut s = t.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != t.len() {
            return Err(Error::InvalidArgument(format!("tuple {t:?} repeats a vertex")));
        }
    }
    Ok(())
}

/// Estimate several tuple distributions from the same `n_draws` draws.
pub fn estimate_distributions(
    sampler: &PreparedSampler,
    tuples: &[Vec<usize>],
    n_draws: u64,
    seed: u64,
    label: &str,
) -> Result<Vec<OrderingDistribution>> {
    check_tuples(sampler, tuples)?;
    let sizes: Vec<usize> = tuples.iter().map(|t| factorial(t.len())).collect();
    let parts = par_chunks(seed, label, n_draws, |rng, count| {
        let mut counts: Vec<Vec<u64>> = sizes.iter().map(|&s| vec![0; s]).collect();
        let mut ties = vec![0u64; tuples.len()];
        let mut keys = vec![0.0; sampler.n()];
        for _ in 0..count {
            sampler.sample_keys(rng, &mut keys);
            for (i, t) in tuples.iter().enumerate() {
                let (c, tie) = tuple_order_index(&keys, t);
                counts[i][c] += 1;
                ties[i] += tie as u64;
            }
        }
        (counts, ties)
    });
    let mut counts: Vec<Vec<u64>> = sizes.iter().map(|&s| vec![0; s]).collect();
    let mut ties = vec![0u64; tuples.len()];
    for (pc, pt) in parts {
        for i in 0..tuples.len() {
            for (a, b) in counts[i].iter_mut().zip(&pc[i]) {
                *a += b;
            }
            ties[i] += pt[i];
        }
    }
    Ok(tuples
        .iter()
        .zip(counts)
        .zip(ties)
        .map(|((t, c), tie)| OrderingDistribution::from_counts(t.clone(), c, tie))
        .collect())
}

pub fn estimate_distribution(
    sampler: &PreparedSampler,
    tuple: &[usize],
    n_draws: u64,
    seed: u64,
) -> Result<OrderingDistribution> {
    Ok(estimate_distributions(sampler, &[tuple.to_vec()], n_draws, seed, "distribution")?
        .remove(0))
}

/// Frequency of an event on the keys of one draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventEstimate {
    pub hits: u64,
    pub n: u64,
    pub p: f64,
    /// Standard error `sqrt(p(1-p)/n)` of the estimate.
    pub se: f64,
}

impl EventEstimate {
    pub fn from_hits(hits: u64, n: u64) -> Self {
        let p = hits as f64 / n.max(1) as f64;
        EventEstimate {
            hits,
            n,
            p,
            se: (p * (1.0 - p) / n.max(1) as f64).sqrt(),
        }
    }

    /// Standard error computed at a reference probability.
    pub fn se_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.n.max(1) as f64).sqrt()
    }
}

pub fn estimate_event<F>(sampler: &PreparedSampler, n_draws: u64, seed: u64, event: F) -> EventEstimate
where
    F: Fn(&[f64]) -> bool + Sync,
{
    let hits: u64 = par_chunks(seed, "event", n_draws, |rng, count| {
        let mut keys = vec![0.0; sampler.n()];
        let mut h = 0u64;
        for _ in 0..count {
            sampler.sample_keys(rng, &mut keys);
            h += event(&keys) as u64;
        }
        h
    })
    .into_iter()
    .sum();
    EventEstimate::from_hits(hits, n_draws)
}

/// Mean of a real statistic of one draw, with its standard error.
pub fn estimate_mean<F>(sampler: &PreparedSampler, n_draws: u64, seed: u64, stat: F) -> (f64, f64)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let parts = par_chunks(seed, "mean", n_draws, |rng, count| {
        let mut keys = vec![0.0; sampler.n()];
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..count {
            sampler.sample_keys(rng, &mut keys);
            let x = stat(&keys);
            s += x;
            s2 += x * x;
        }
        (s, s2)
    });
    let (s, s2) = parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = n_draws.max(1) as f64;
    let mean = s / n;
    let var = (s2 / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}
