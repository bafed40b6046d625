//! Parallel drivers: per-case metric evaluation and bootstrap sampling.
//!
//! Work is spread over a dedicated thread pool of the requested size;
//! results are collected in input order so output never depends on the
//! schedule.

use rayon::prelude::*;
use rayon::ThreadPool;

use msd_core::metrics::{evaluate_case, CaseMetricRecord, RoiSpec};
use msd_core::ranking::{CaseMetricTable, Ranker, RankingTable};
use msd_core::stability::{bootstrap_sample, BootstrapConfig, StabilityError};

use crate::manifest::{ChallengeManifest, TaskEntry};
use crate::nifti::load_label_volume;
use crate::tables::{rows_for, MetricRow};

pub fn thread_pool(jobs: usize) -> ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
}

/// Runs `f` over `items` on `jobs` threads, results in input order.
pub fn par_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    thread_pool(jobs).install(|| items.par_iter().map(f).collect())
}

/// A case that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseFailure {
    pub case_id: String,
    pub algorithm: Option<String>,
    pub reason: String,
}

impl std::fmt::Display for CaseFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.algorithm {
            Some(a) => write!(f, "case {} ({a}): {}", self.case_id, self.reason),
            None => write!(f, "case {}: {}", self.case_id, self.reason),
        }
    }
}

type CaseOutcome = Result<Vec<Vec<CaseMetricRecord>>, Vec<CaseFailure>>;

fn evaluate_one_case(manifest: &ChallengeManifest, task: &TaskEntry, rois: &[RoiSpec], case: &str) -> CaseOutcome {
    let gt_path = manifest.gt_path(task, case);
    let gt = load_label_volume(&gt_path).map_err(|e| {
        vec![CaseFailure {
            case_id: case.into(),
            algorithm: None,
            reason: format!("ground truth: {e}"),
        }]
    })?;
    let mut per_algorithm = Vec::with_capacity(manifest.algorithms.len());
    let mut failures = Vec::new();
    for alg in &manifest.algorithms {
        let path = manifest.prediction_path(alg, task, case);
        let outcome = load_label_volume(&path)
            .map_err(|e| e.to_string())
            .and_then(|pred| evaluate_case(case, &gt, &pred, rois).map_err(|e| e.to_string()));
        match outcome {
            Ok(records) => per_algorithm.push(records),
            Err(reason) => failures.push(CaseFailure {
                case_id: case.into(),
                algorithm: Some(alg.name.clone()),
                reason,
            }),
        }
    }
    if failures.is_empty() {
        Ok(per_algorithm)
    } else {
        Err(failures)
    }
}

/// Metric rows of one task ordered by algorithm, case, ROI, metric.
pub fn evaluate_task(manifest: &ChallengeManifest, task: &TaskEntry, jobs: usize) -> Result<Vec<MetricRow>, Vec<CaseFailure>> {
    let rois = task.roi_specs();
    let outcomes = par_map(jobs, &task.cases, |case| {
        let r = evaluate_one_case(manifest, task, &rois, case);
        log::info!("{} / {case}: {}", task.task_id, if r.is_ok() { "ok" } else { "failed" });
        r
    });
    let mut failures = Vec::new();
    let mut per_case = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        match o {
            Ok(v) => per_case.push(v),
            Err(f) => failures.extend(f),
        }
    }
    if !failures.is_empty() {
        return Err(failures);
    }
    let mut rows = Vec::new();
    for (a, alg) in manifest.algorithms.iter().enumerate() {
        for case_records in &per_case {
            rows.extend(rows_for(&task.task_id, &alg.name, &case_records[a]));
        }
    }
    Ok(rows)
}

/// Bootstrap rankings on `jobs` threads; identical to the serial result.
pub fn par_bootstrap_rankings<R: Ranker + Sync>(
    table: &CaseMetricTable,
    ranker: &R,
    config: &BootstrapConfig,
    jobs: usize,
) -> Result<Vec<RankingTable>, StabilityError> {
    if config.n_samples == 0 {
        return Err(StabilityError::NoSamples);
    }
    let samples: Vec<usize> = (0..config.n_samples).collect();
    par_map(jobs, &samples, |&s| bootstrap_sample(table, ranker, config, s))
        .into_iter()
        .collect()
}
