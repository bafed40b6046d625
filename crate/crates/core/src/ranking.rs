//! Significance ranking and rank aggregation.
//!
//! Per (ROI, metric), every algorithm is tested against every other with a
//! one-sided Wilcoxon signed-rank test on the paired per-case differences.
//! An algorithm's significance score counts the competitors it beats; the
//! highest score gets rank 1. A task's ranking re-ranks the mean of its
//! (ROI, metric) ranks, and a phase's ranking re-ranks the mean task rank.
//! Ties always take mid-ranks.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::RoiSpec;
use crate::stats::{mean, median, midranks};
use crate::wilcoxon::{wilcoxon_one_sided, WilcoxonError};

/// Significance level used unless configured otherwise.
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Dsc,
    Nsd,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::Dsc, Metric::Nsd];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Dsc => "dsc",
            Metric::Nsd => "nsd",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = RankingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dsc" => Ok(Metric::Dsc),
            "nsd" => Ok(Metric::Nsd),
            _ => Err(RankingError::UnknownMetric(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RankingError {
    #[error("no {0} entries for algorithm {1}, case {2}, roi {3}")]
    MissingEntry(Metric, String, String, String),
    #[error("duplicate {0} entry for algorithm {1}, case {2}, roi {3}")]
    DuplicateEntry(Metric, String, String, String),
    #[error("value {0} outside [0, 1]")]
    ValueOutOfRange(f64),
    #[error("unknown algorithm {0}")]
    UnknownAlgorithm(String),
    #[error("unknown case {0}")]
    UnknownCase(String),
    #[error("unknown roi {0}")]
    UnknownRoi(String),
    #[error("unknown metric {0}")]
    UnknownMetric(String),
    #[error("unknown phase {0}")]
    UnknownPhase(String),
    #[error("unknown ranking variant {0}")]
    UnknownVariant(String),
    #[error("no significance result for roi {0}, metric {1}")]
    MissingRoiMetricResult(String, Metric),
    #[error("algorithm sets differ between rankings: {0}")]
    AlgorithmCoverageMismatch(String),
    #[error("table must hold at least one algorithm, case and roi")]
    EmptyTable,
    #[error("nothing to aggregate")]
    EmptyInput,
    #[error("alpha {0} must lie in (0, 1]")]
    InvalidAlpha(f64),
    #[error(transparent)]
    Test(#[from] WilcoxonError),
}

/// Challenge phase a task is ranked in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Development,
    Mystery,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Development => "development",
            Phase::Mystery => "mystery",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phase {
    type Err = RankingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "development" => Ok(Phase::Development),
            "mystery" => Ok(Phase::Mystery),
            _ => Err(RankingError::UnknownPhase(s.to_string())),
        }
    }
}

/// One competition: its regions, its test cases and its phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub task_id: String,
    pub rois: Vec<RoiSpec>,
    pub case_ids: Vec<String>,
    pub phase: Phase,
}

impl TaskSpec {
    pub fn roi_ids(&self) -> Vec<String> {
        self.rois.iter().map(|r| r.roi_id.clone()).collect()
    }
}

/// Metric values indexed by algorithm, case, ROI and metric for one task.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseMetricTable {
    task_id: String,
    algorithms: Vec<String>,
    cases: Vec<String>,
    rois: Vec<String>,
    values: Vec<f64>,
}

/// Incrementally filled [`CaseMetricTable`]; `build` rejects gaps.
#[derive(Debug, Clone)]
pub struct CaseMetricTableBuilder {
    table: CaseMetricTable,
}

impl CaseMetricTableBuilder {
    fn locate(&self, algorithm: &str, case: &str, roi: &str) -> Result<(usize, usize, usize), RankingError> {
        let t = &self.table;
        let a = t.algorithm_index(algorithm).ok_or_else(|| RankingError::UnknownAlgorithm(algorithm.into()))?;
        let c = t.case_index(case).ok_or_else(|| RankingError::UnknownCase(case.into()))?;
        let r = t.roi_index(roi).ok_or_else(|| RankingError::UnknownRoi(roi.into()))?;
        Ok((a, c, r))
    }

    pub fn insert(&mut self, algorithm: &str, case: &str, roi: &str, metric: Metric, value: f64) -> Result<(), RankingError> {
        if !(0.0..=1.0).contains(&value) {
            return Err(RankingError::ValueOutOfRange(value));
        }
        let (a, c, r) = self.locate(algorithm, case, roi)?;
        let i = self.table.offset(a, c, r, metric);
        if !self.table.values[i].is_nan() {
            return Err(RankingError::DuplicateEntry(metric, algorithm.into(), case.into(), roi.into()));
        }
        self.table.values[i] = value;
        Ok(())
    }

    pub fn build(self) -> Result<CaseMetricTable, RankingError> {
        let t = &self.table;
        if let Some(i) = t.values.iter().position(|v| v.is_nan()) {
            let metric = Metric::ALL[i % 2];
            let rest = i / 2;
            let r = rest % t.rois.len();
            let c = (rest / t.rois.len()) % t.cases.len();
            let a = rest / (t.rois.len() * t.cases.len());
            return Err(RankingError::MissingEntry(
                metric,
                t.algorithms[a].clone(),
                t.cases[c].clone(),
                t.rois[r].clone(),
            ));
        }
        Ok(self.table)
    }
}

impl CaseMetricTable {
    pub fn builder(
        task_id: impl Into<String>,
        algorithms: Vec<String>,
        cases: Vec<String>,
        rois: Vec<String>,
    ) -> Result<CaseMetricTableBuilder, RankingError> {
        if algorithms.is_empty() || cases.is_empty() || rois.is_empty() {
            return Err(RankingError::EmptyTable);
        }
        let len = algorithms.len() * cases.len() * rois.len() * 2;
        Ok(CaseMetricTableBuilder {
            table: CaseMetricTable {
                task_id: task_id.into(),
                algorithms,
                cases,
                rois,
                values: vec![f64::NAN; len],
            },
        })
    }

    /// Builds a table from a generator `f(algorithm, case, roi, metric)` of indices.
    pub fn from_fn(
        task_id: impl Into<String>,
        algorithms: Vec<String>,
        cases: Vec<String>,
        rois: Vec<String>,
        mut f: impl FnMut(usize, usize, usize, Metric) -> f64,
    ) -> Result<CaseMetricTable, RankingError> {
        let mut b = Self::builder(task_id, algorithms, cases, rois)?;
        let t = &mut b.table;
        for a in 0..t.algorithms.len() {
            for c in 0..t.cases.len() {
                for r in 0..t.rois.len() {
                    for m in Metric::ALL {
                        let v = f(a, c, r, m);
                        if !(0.0..=1.0).contains(&v) {
                            return Err(RankingError::ValueOutOfRange(v));
                        }
                        let i = t.offset(a, c, r, m);
                        t.values[i] = v;
                    }
                }
            }
        }
        b.build()
    }

    #[inline]
    fn offset(&self, a: usize, c: usize, r: usize, m: Metric) -> usize {
        ((a * self.cases.len() + c) * self.rois.len() + r) * 2 + m.slot()
    }

    pub fn task_id(&self) -> &str {
        &self.task_id
    }

    pub fn algorithms(&self) -> &[String] {
        &self.algorithms
    }

    pub fn cases(&self) -> &[String] {
        &self.cases
    }

    pub fn rois(&self) -> &[String] {
        &self.rois
    }

    pub fn algorithm_index(&self, name: &str) -> Option<usize> {
        self.algorithms.iter().position(|a| a == name)
    }

    pub fn case_index(&self, name: &str) -> Option<usize> {
        self.cases.iter().position(|c| c == name)
    }

    pub fn roi_index(&self, name: &str) -> Option<usize> {
        self.rois.iter().position(|r| r == name)
    }

    pub fn value(&self, algorithm: usize, case: usize, roi: usize, metric: Metric) -> f64 {
        self.values[self.offset(algorithm, case, roi, metric)]
    }

    /// Per-case values of one algorithm, in case order.
    pub fn column(&self, algorithm: usize, roi: usize, metric: Metric) -> Vec<f64> {
        (0..self.cases.len())
            .map(|c| self.value(algorithm, c, roi, metric))
            .collect()
    }

    /// Table over the given case indices (repeats allowed), paired across algorithms.
    pub fn resample(&self, case_indices: &[usize]) -> CaseMetricTable {
        let cases: Vec<String> = case_indices
            .iter()
            .enumerate()
            .map(|(k, &c)| format!("{}#{k}", self.cases[c]))
            .collect();
        let mut values = Vec::with_capacity(self.algorithms.len() * cases.len() * self.rois.len() * 2);
        for a in 0..self.algorithms.len() {
            for &c in case_indices {
                let start = self.offset(a, c, 0, Metric::Dsc);
                values.extend_from_slice(&self.values[start..start + self.rois.len() * 2]);
            }
        }
        CaseMetricTable {
            task_id: self.task_id.clone(),
            algorithms: self.algorithms.clone(),
            cases,
            rois: self.rois.clone(),
            values,
        }
    }

    /// Applies `f` to every value without range checks (for transform tests).
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CaseMetricTable {
        CaseMetricTable {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Reorders algorithms so that new position `i` holds old algorithm `order[i]`.
    pub fn reorder_algorithms(&self, order: &[usize]) -> CaseMetricTable {
        let block = self.cases.len() * self.rois.len() * 2;
        let mut values = Vec::with_capacity(self.values.len());
        for &a in order {
            values.extend_from_slice(&self.values[a * block..(a + 1) * block]);
        }
        CaseMetricTable {
            algorithms: order.iter().map(|&a| self.algorithms[a].clone()).collect(),
            values,
            ..self.clone()
        }
    }

    /// Reorders cases so that new position `k` holds old case `order[k]`.
    pub fn reorder_cases(&self, order: &[usize]) -> CaseMetricTable {
        let mut t = self.resample(order);
        t.cases = order.iter().map(|&c| self.cases[c].clone()).collect();
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankLevel {
    RoiMetric,
    Task,
    Phase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub algorithm: String,
    pub score: f64,
    pub rank: f64,
}

/// Algorithms with an aggregate score and a mid-rank, in algorithm order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingTable {
    pub level: RankLevel,
    pub entries: Vec<RankEntry>,
}

impl RankingTable {
    /// Ranks `scores` and pairs them with `algorithms`.
    pub fn from_scores(level: RankLevel, algorithms: &[String], scores: Vec<f64>, higher_is_better: bool) -> Self {
        let ranks = rank_from_scores(&scores, higher_is_better);
        RankingTable {
            level,
            entries: algorithms
                .iter()
                .zip(scores)
                .zip(ranks)
                .map(|((a, score), rank)| RankEntry {
                    algorithm: a.clone(),
                    score,
                    rank,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn algorithms(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.algorithm.as_str()).collect()
    }

    pub fn ranks(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.rank).collect()
    }

    pub fn rank_of(&self, algorithm: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.algorithm == algorithm).map(|e| e.rank)
    }

    /// Entries sorted by rank, ties kept in algorithm order.
    pub fn sorted_by_rank(&self) -> Vec<&RankEntry> {
        let mut v: Vec<&RankEntry> = self.entries.iter().collect();
        v.sort_by(|a, b| a.rank.total_cmp(&b.rank));
        v
    }
}

/// Mid-ranks of `scores`; rank 1 is the best score.
pub fn rank_from_scores(scores: &[f64], higher_is_better: bool) -> Vec<f64> {
    if higher_is_better {
        let flipped: Vec<f64> = scores.iter().map(|s| -s).collect();
        midranks(&flipped)
    } else {
        midranks(scores)
    }
}

/// Pairwise test outcomes for one (ROI, metric) of a task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub task_id: String,
    pub roi_id: String,
    pub metric: Metric,
    pub alpha: f64,
    pub algorithms: Vec<String>,
    /// Number of competitors each algorithm beats significantly.
    pub scores: Vec<usize>,
    /// `p_values[l][k]`: one-sided p-value of "algorithm l better than k"; 1 on the diagonal.
    pub p_values: Vec<Vec<f64>>,
    pub ranks: Vec<f64>,
}

impl SignificanceResult {
    pub fn ranking(&self) -> RankingTable {
        RankingTable {
            level: RankLevel::RoiMetric,
            entries: self
                .algorithms
                .iter()
                .zip(&self.scores)
                .zip(&self.ranks)
                .map(|((a, &s), &rank)| RankEntry {
                    algorithm: a.clone(),
                    score: s as f64,
                    rank,
                })
                .collect(),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<(), RankingError> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(RankingError::InvalidAlpha(alpha))
    }
}

fn roi_position(table: &CaseMetricTable, roi: &str) -> Result<usize, RankingError> {
    table.roi_index(roi).ok_or_else(|| RankingError::UnknownRoi(roi.into()))
}

/// Significance scores and ranks for one (ROI, metric).
pub fn significance_scores(
    table: &CaseMetricTable,
    roi: &str,
    metric: Metric,
    alpha: f64,
) -> Result<SignificanceResult, RankingError> {
    check_alpha(alpha)?;
    let r = roi_position(table, roi)?;
    let n_alg = table.algorithms.len();
    let columns: Vec<Vec<f64>> = (0..n_alg).map(|a| table.column(a, r, metric)).collect();
    let mut p_values = vec![vec![1.0; n_alg]; n_alg];
    let mut scores = vec![0usize; n_alg];
    let mut diffs = vec![0.0; table.cases.len()];
    for l in 0..n_alg {
        for k in 0..n_alg {
            if l == k {
                continue;
            }
            for (d, (x, y)) in diffs.iter_mut().zip(columns[l].iter().zip(&columns[k])) {
                *d = x - y;
            }
            let test = wilcoxon_one_sided(&diffs, alpha)?;
            p_values[l][k] = test.p_value;
            if test.significant {
                scores[l] += 1;
            }
        }
    }
    let as_f: Vec<f64> = scores.iter().map(|&s| s as f64).collect();
    Ok(SignificanceResult {
        task_id: table.task_id.clone(),
        roi_id: roi.into(),
        metric,
        alpha,
        algorithms: table.algorithms.clone(),
        ranks: rank_from_scores(&as_f, true),
        scores,
        p_values,
    })
}

/// Mean rank per algorithm over `tables`, re-ranked (lower mean is better).
///
/// All tables must rank the same algorithm set; output follows the order
/// of the first table.
pub fn rank_by_mean(level: RankLevel, tables: &[&RankingTable]) -> Result<RankingTable, RankingError> {
    let first = tables.first().ok_or(RankingError::EmptyInput)?;
    let names: Vec<String> = first.entries.iter().map(|e| e.algorithm.clone()).collect();
    let expected: BTreeSet<&str> = names.iter().map(String::as_str).collect();
    let mut sums = vec![0.0; names.len()];
    for t in tables {
        let got: BTreeSet<&str> = t.entries.iter().map(|e| e.algorithm.as_str()).collect();
        if got != expected || t.entries.len() != names.len() {
            let diff: Vec<&str> = expected.symmetric_difference(&got).copied().collect();
            return Err(RankingError::AlgorithmCoverageMismatch(diff.join(", ")));
        }
        for (sum, name) in sums.iter_mut().zip(&names) {
            *sum += t.rank_of(name).unwrap_or(f64::NAN);
        }
    }
    let n = tables.len() as f64;
    let scores = sums.into_iter().map(|s| s / n).collect();
    Ok(RankingTable::from_scores(level, &names, scores, false))
}

/// Task ranking from the (ROI, metric) significance results of one task.
///
/// Every (ROI, metric) pair of `rois` × {DSC, NSD} must be present; each
/// counts equally in the mean.
pub fn task_rank(rois: &[String], results: &[SignificanceResult]) -> Result<RankingTable, RankingError> {
    let mut tables = Vec::with_capacity(rois.len() * 2);
    for roi in rois {
        for metric in Metric::ALL {
            let found = results
                .iter()
                .find(|r| &r.roi_id == roi && r.metric == metric)
                .ok_or_else(|| RankingError::MissingRoiMetricResult(roi.clone(), metric))?;
            tables.push(found.ranking());
        }
    }
    let refs: Vec<&RankingTable> = tables.iter().collect();
    rank_by_mean(RankLevel::Task, &refs)
}

/// All (ROI, metric) significance results of a task together with its task ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRanking {
    pub task_id: String,
    pub roi_metric: Vec<SignificanceResult>,
    pub task: RankingTable,
}

pub fn task_significance_ranking(table: &CaseMetricTable, alpha: f64) -> Result<TaskRanking, RankingError> {
    let mut roi_metric = Vec::with_capacity(table.rois.len() * 2);
    for roi in &table.rois {
        for metric in Metric::ALL {
            roi_metric.push(significance_scores(table, roi, metric, alpha)?);
        }
    }
    let task = task_rank(&table.rois, &roi_metric)?;
    Ok(TaskRanking {
        task_id: table.task_id.clone(),
        roi_metric,
        task,
    })
}

/// Phase ranking: mean task rank, re-ranked.
pub fn phase_ranking(task_tables: &[RankingTable]) -> Result<RankingTable, RankingError> {
    let refs: Vec<&RankingTable> = task_tables.iter().collect();
    rank_by_mean(RankLevel::Phase, &refs)
}

/// Alternative phase aggregation: mean over every (ROI, metric) ranking of every
/// task, pooled without task weighting.
pub fn pooled_phase_ranking(roi_metric_tables: &[RankingTable]) -> Result<RankingTable, RankingError> {
    let refs: Vec<&RankingTable> = roi_metric_tables.iter().collect();
    rank_by_mean(RankLevel::Phase, &refs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingVariant {
    Significance,
    MeanThenRank,
    MedianThenRank,
    RankThenMean,
}

impl RankingVariant {
    pub const ALL: [RankingVariant; 4] = [
        RankingVariant::Significance,
        RankingVariant::MeanThenRank,
        RankingVariant::MedianThenRank,
        RankingVariant::RankThenMean,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RankingVariant::Significance => "significance",
            RankingVariant::MeanThenRank => "mean_then_rank",
            RankingVariant::MedianThenRank => "median_then_rank",
            RankingVariant::RankThenMean => "rank_then_mean",
        }
    }
}

impl fmt::Display for RankingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankingVariant {
    type Err = RankingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RankingVariant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| RankingError::UnknownVariant(s.into()))
    }
}

/// Ranking of one (ROI, metric) under the chosen scheme.
pub fn variant_ranking(
    table: &CaseMetricTable,
    variant: RankingVariant,
    roi: &str,
    metric: Metric,
    alpha: f64,
) -> Result<RankingTable, RankingError> {
    let r = roi_position(table, roi)?;
    let n_alg = table.algorithms.len();
    let aggregate = |f: fn(&[f64]) -> Option<f64>| -> Vec<f64> {
        (0..n_alg)
            .map(|a| f(&table.column(a, r, metric)).unwrap_or(0.0))
            .collect()
    };
    let ranking = match variant {
        RankingVariant::Significance => significance_scores(table, roi, metric, alpha)?.ranking(),
        RankingVariant::MeanThenRank => {
            RankingTable::from_scores(RankLevel::RoiMetric, &table.algorithms, aggregate(mean), true)
        }
        RankingVariant::MedianThenRank => {
            RankingTable::from_scores(RankLevel::RoiMetric, &table.algorithms, aggregate(median), true)
        }
        RankingVariant::RankThenMean => {
            let mut sums = vec![0.0; n_alg];
            for c in 0..table.cases.len() {
                let per_case: Vec<f64> = (0..n_alg).map(|a| table.value(a, c, r, metric)).collect();
                for (s, rank) in sums.iter_mut().zip(rank_from_scores(&per_case, true)) {
                    *s += rank;
                }
            }
            let n = table.cases.len() as f64;
            let means = sums.into_iter().map(|s| s / n).collect();
            RankingTable::from_scores(RankLevel::RoiMetric, &table.algorithms, means, false)
        }
    };
    Ok(ranking)
}

/// Task-level ranking under a scheme: each (ROI, metric) is ranked by the
/// variant, then the mean rank is re-ranked.
pub fn task_variant_ranking(
    table: &CaseMetricTable,
    variant: RankingVariant,
    alpha: f64,
) -> Result<RankingTable, RankingError> {
    let mut tables = Vec::with_capacity(table.rois.len() * 2);
    for roi in &table.rois {
        for metric in Metric::ALL {
            tables.push(variant_ranking(table, variant, roi, metric, alpha)?);
        }
    }
    let refs: Vec<&RankingTable> = tables.iter().collect();
    rank_by_mean(RankLevel::Task, &refs)
}

/// Anything that turns a task's metric table into a ranking.
pub trait Ranker {
    fn rank(&self, table: &CaseMetricTable) -> Result<RankingTable, RankingError>;
}

impl<F> Ranker for F
where
    F: Fn(&CaseMetricTable) -> Result<RankingTable, RankingError>,
{
    fn rank(&self, table: &CaseMetricTable) -> Result<RankingTable, RankingError> {
        self(table)
    }
}

/// Full significance task ranking.
#[derive(Debug, Clone, Copy)]
pub struct SignificanceTaskRanker {
    pub alpha: f64,
}

impl Ranker for SignificanceTaskRanker {
    fn rank(&self, table: &CaseMetricTable) -> Result<RankingTable, RankingError> {
        Ok(task_significance_ranking(table, self.alpha)?.task)
    }
}

/// Task-level ranking under one variant.
#[derive(Debug, Clone, Copy)]
pub struct VariantTaskRanker {
    pub variant: RankingVariant,
    pub alpha: f64,
}

impl Ranker for VariantTaskRanker {
    fn rank(&self, table: &CaseMetricTable) -> Result<RankingTable, RankingError> {
        task_variant_ranking(table, self.variant, self.alpha)
    }
}
