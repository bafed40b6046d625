//! CSV and JSON interchange: metric rows, leaderboards, bootstrap outputs.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use msd_core::metrics::CaseMetricRecord;
use msd_core::ranking::{CaseMetricTable, Metric, Phase, RankingTable, RankingVariant};
use msd_core::stability::BootstrapSummary;
use msd_core::stats::quartiles;
use serde::{Deserialize, Serialize};

/// One metric value; the on-disk row of `metrics.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub task: String,
    pub algorithm: String,
    pub case: String,
    pub roi: String,
    pub metric: Metric,
    pub value: f64,
    pub flag: String,
}

/// Flag text for one record: `undefined`, `gt_empty`, `pred_empty`, joined by `|`.
pub fn flag_text(record: &CaseMetricRecord) -> String {
    let f = &record.flags;
    let mut parts = Vec::new();
    if f.undefined_substituted {
        parts.push("undefined");
    }
    if f.gt_empty {
        parts.push("gt_empty");
    }
    if f.pred_empty {
        parts.push("pred_empty");
    }
    parts.join("|")
}

/// Two rows (DSC, NSD) per record.
pub fn rows_for(task: &str, algorithm: &str, records: &[CaseMetricRecord]) -> Vec<MetricRow> {
    let mut rows = Vec::with_capacity(records.len() * 2);
    for r in records {
        let flag = flag_text(r);
        for (metric, value) in [(Metric::Dsc, r.dsc), (Metric::Nsd, r.nsd)] {
            rows.push(MetricRow {
                task: task.into(),
                algorithm: algorithm.into(),
                case: r.case_id.clone(),
                roi: r.roi_id.clone(),
                metric,
                value,
                flag: flag.clone(),
            });
        }
    }
    rows
}

pub fn write_metrics_csv(path: &Path, rows: &[MetricRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_metrics_csv(path: &Path) -> Result<Vec<MetricRow>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize()
        .collect::<Result<Vec<MetricRow>, _>>()
        .with_context(|| format!("parsing {}", path.display()))
}

/// Assembles the rows of one task into a fully populated table.
pub fn table_from_rows(
    task_id: &str,
    algorithms: &[String],
    cases: &[String],
    rois: &[String],
    rows: &[MetricRow],
) -> Result<CaseMetricTable> {
    let mut b = CaseMetricTable::builder(task_id, algorithms.to_vec(), cases.to_vec(), rois.to_vec())?;
    for row in rows.iter().filter(|r| r.task == task_id) {
        b.insert(&row.algorithm, &row.case, &row.roi, row.metric, row.value)
            .with_context(|| format!("task {task_id}"))?;
    }
    Ok(b.build().with_context(|| format!("task {task_id}"))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoiMetricRanks {
    pub roi_id: String,
    pub metric: Metric,
    pub ranking: RankingTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantRanks {
    pub variant: RankingVariant,
    pub ranking: RankingTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskLeaderboard {
    pub task_id: String,
    pub roi_metric_ranks: Vec<RoiMetricRanks>,
    pub task_ranks: RankingTable,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<VariantRanks>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leaderboard {
    pub phase: Phase,
    pub alpha: f64,
    pub tasks: Vec<TaskLeaderboard>,
    pub phase_ranks: RankingTable,
    /// Mean over every (ROI, metric) rank of the phase, without task weighting.
    pub pooled_phase_ranks: RankingTable,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Table-3 style row: rank, team, median and quartiles of all its DSC values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardRow {
    pub rank: f64,
    pub team: String,
    pub median_dsc: String,
    pub dsc_q1: String,
    pub dsc_q3: String,
}

pub fn leaderboard_rows(phase_ranks: &RankingTable, tables: &[CaseMetricTable]) -> Vec<LeaderboardRow> {
    phase_ranks
        .sorted_by_rank()
        .into_iter()
        .map(|e| {
            let mut dsc = Vec::new();
            for t in tables {
                if let Some(a) = t.algorithm_index(&e.algorithm) {
                    for r in 0..t.rois().len() {
                        dsc.extend(t.column(a, r, Metric::Dsc));
                    }
                }
            }
            let (q1, med, q3) = quartiles(&dsc).unwrap_or((0.0, 0.0, 0.0));
            LeaderboardRow {
                rank: e.rank,
                team: e.algorithm.clone(),
                median_dsc: format!("{med:.4}"),
                dsc_q1: format!("{q1:.4}"),
                dsc_q3: format!("{q3:.4}"),
            }
        })
        .collect()
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Written as `bootstrap.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapOutput {
    pub seed: u64,
    pub alpha: f64,
    pub summary: BootstrapSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankFrequencyCsvRow {
    pub algorithm: String,
    pub rank: f64,
    pub count: usize,
}

pub fn rank_frequency_rows(summary: &BootstrapSummary) -> Vec<RankFrequencyCsvRow> {
    summary
        .rank_frequency
        .iter()
        .flat_map(|row| {
            row.counts.iter().map(move |c| RankFrequencyCsvRow {
                algorithm: row.algorithm.clone(),
                rank: c.rank,
                count: c.count,
            })
        })
        .collect()
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
