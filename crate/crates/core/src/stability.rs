//! Bootstrap stability of rankings.
//!
//! Test cases are resampled with replacement, the same draw for every
//! algorithm, and the ranking is recomputed per sample. Sample `s` draws
//! from its own ChaCha8 stream `(seed, s)`, so any evaluation order or
//! degree of parallelism gives identical samples.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ranking::{CaseMetricTable, Ranker, RankingError, RankingTable};
use crate::stats::quantile_sorted;

pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("bootstrap needs at least one sample")]
    NoSamples,
    #[error("rankings cover different algorithms")]
    AlgorithmSetMismatch,
    #[error(transparent)]
    Ranking(#[from] RankingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub n_samples: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            n_samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

/// Case indices of bootstrap sample `sample` for `n_cases` cases.
pub fn sample_indices(seed: u64, sample: u64, n_cases: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    (0..n_cases).map(|_| rng.random_range(0..n_cases)).collect()
}

/// Ranking of one bootstrap sample.
pub fn bootstrap_sample<R: Ranker + ?Sized>(
    table: &CaseMetricTable,
    ranker: &R,
    config: &BootstrapConfig,
    sample: usize,
) -> Result<RankingTable, StabilityError> {
    let idx = sample_indices(config.seed, sample as u64, table.cases().len());
    Ok(ranker.rank(&table.resample(&idx))?)
}

/// Rankings of every bootstrap sample, in sample order.
pub fn bootstrap_rankings<R: Ranker + ?Sized>(
    table: &CaseMetricTable,
    ranker: &R,
    config: &BootstrapConfig,
) -> Result<Vec<RankingTable>, StabilityError> {
    if config.n_samples == 0 {
        return Err(StabilityError::NoSamples);
    }
    (0..config.n_samples)
        .map(|s| bootstrap_sample(table, ranker, config, s))
        .collect()
}

/// Kendall's tau-b of two paired score vectors; `None` when either is a total tie.
pub fn tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut tied_x, mut tied_y) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            match (dx == 0.0, dy == 0.0) {
                (true, true) => {}
                (true, false) => tied_x += 1,
                (false, true) => tied_y += 1,
                (false, false) => {
                    if (dx > 0.0) == (dy > 0.0) {
                        concordant += 1;
                    } else {
                        discordant += 1;
                    }
                }
            }
        }
    }
    let untied_x = (concordant + discordant + tied_y) as f64;
    let untied_y = (concordant + discordant + tied_x) as f64;
    if untied_x == 0.0 || untied_y == 0.0 {
        return None;
    }
    Some((concordant - discordant) as f64 / libm::sqrt(untied_x * untied_y))
}

fn paired_ranks(r1: &RankingTable, r2: &RankingTable) -> Result<(Vec<f64>, Vec<f64>), StabilityError> {
    if r1.len() != r2.len() {
        return Err(StabilityError::AlgorithmSetMismatch);
    }
    let mut y = Vec::with_capacity(r1.len());
    for e in &r1.entries {
        y.push(r2.rank_of(&e.algorithm).ok_or(StabilityError::AlgorithmSetMismatch)?);
    }
    Ok((r1.ranks(), y))
}

/// Tau-b between two rankings of the same algorithms; 0 when undefined.
pub fn kendall_tau(r1: &RankingTable, r2: &RankingTable) -> Result<f64, StabilityError> {
    let (x, y) = paired_ranks(r1, r2)?;
    Ok(tau_b(&x, &y).unwrap_or(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCount {
    pub rank: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankFrequencyRow {
    pub algorithm: String,
    pub counts: Vec<RankCount>,
}

impl RankFrequencyRow {
    pub fn total(&self) -> usize {
        self.counts.iter().map(|c| c.count).sum()
    }

    pub fn count_at(&self, rank: f64) -> usize {
        self.counts.iter().find(|c| c.rank == rank).map_or(0, |c| c.count)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub task_id: String,
    pub n_samples: usize,
    pub tau_median: f64,
    pub tau_q1: f64,
    pub tau_q3: f64,
    /// Samples whose tau was undefined (a total tie) and counted as 0.
    pub undefined_tau: usize,
    pub original: RankingTable,
    pub rank_frequency: Vec<RankFrequencyRow>,
}

/// Tau distribution against `original` and per-algorithm rank frequencies.
pub fn summarize(
    task_id: &str,
    original: &RankingTable,
    samples: &[RankingTable],
) -> Result<BootstrapSummary, StabilityError> {
    if samples.is_empty() {
        return Err(StabilityError::NoSamples);
    }
    let mut taus = Vec::with_capacity(samples.len());
    let mut undefined_tau = 0;
    for s in samples {
        let (x, y) = paired_ranks(original, s)?;
        match tau_b(&x, &y) {
            Some(t) => taus.push(t),
            None => {
                undefined_tau += 1;
                taus.push(0.0);
            }
        }
    }
    taus.sort_by(f64::total_cmp);
    // positive f64 bit patterns sort like the values
    let mut buckets: Vec<BTreeMap<u64, usize>> = (0..original.len()).map(|_| BTreeMap::new()).collect();
    for s in samples {
        for (bucket, e) in buckets.iter_mut().zip(&original.entries) {
            let rank = s.rank_of(&e.algorithm).ok_or(StabilityError::AlgorithmSetMismatch)?;
            *bucket.entry(rank.to_bits()).or_insert(0) += 1;
        }
    }
    let rank_frequency = original
        .entries
        .iter()
        .zip(buckets)
        .map(|(e, b)| RankFrequencyRow {
            algorithm: e.algorithm.clone(),
            counts: b
                .into_iter()
                .map(|(bits, count)| RankCount {
                    rank: f64::from_bits(bits),
                    count,
                })
                .collect(),
        })
        .collect();
    Ok(BootstrapSummary {
        task_id: task_id.into(),
        n_samples: samples.len(),
        tau_median: quantile_sorted(&taus, 0.5).unwrap_or(0.0),
        tau_q1: quantile_sorted(&taus, 0.25).unwrap_or(0.0),
        tau_q3: quantile_sorted(&taus, 0.75).unwrap_or(0.0),
        undefined_tau,
        original: original.clone(),
        rank_frequency,
    })
}
