//! The five subcommands.
//!
//! Stages hand off through one output tree:
//!
//! ```text
//! <out>/<task>/metrics.csv           evaluate
//! <out>/<phase>/leaderboard.json     rank
//! <out>/<phase>/leaderboard.csv      rank
//! <out>/<task>/bootstrap.json        bootstrap
//! <out>/<task>/rank_frequency.csv    bootstrap
//! <out>/report/*.svg, *.csv          report
//! <out>/<task>/validation.json       validate
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use msd_core::ranking::{
    phase_ranking, pooled_phase_ranking, rank_by_mean, task_significance_ranking, task_variant_ranking,
    CaseMetricTable, Metric, Phase, RankLevel, RankingTable, RankingVariant, SignificanceTaskRanker,
};
use msd_core::stability::{summarize, BootstrapConfig, BootstrapSummary};
use serde::Serialize;

use crate::batch::{evaluate_task, par_bootstrap_rankings};
use crate::manifest::{ChallengeManifest, PhaseEntry, TaskEntry};
use crate::plots::{dsc_boxplot, dsc_groups, line_plot, rank_boxplot, stacked_frequency, RankGroup};
use crate::tables::{
    leaderboard_rows, rank_frequency_rows, read_json, read_metrics_csv, table_from_rows, write_csv, write_json,
    write_metrics_csv, write_text, BootstrapOutput, Leaderboard, RoiMetricRanks, TaskLeaderboard, VariantRanks,
};
use crate::validate::{validate_submission, SubmissionManifest, ValidationReport};

pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_DATA: u8 = 2;

/// Environment variable that, when set, makes `--seed` mandatory.
pub const CI_ENV: &str = "CI";

/// A failure carrying its process exit code.
pub struct CliError {
    pub code: u8,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn config(error: impl Into<anyhow::Error>) -> Self {
        CliError { code: EXIT_CONFIG, error: error.into() }
    }

    pub fn data(error: impl Into<anyhow::Error>) -> Self {
        CliError { code: EXIT_DATA, error: error.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl fmt::Debug for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exit {}: {:#}", self.code, self.error)
    }
}

pub type CmdResult<T = ()> = Result<T, CliError>;

/// Which tasks a command touches.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub task: Option<String>,
    pub phase: Option<Phase>,
}

pub fn load_manifest(path: &Path) -> CmdResult<ChallengeManifest> {
    ChallengeManifest::load(path).map_err(CliError::config)
}

fn selected_phases(m: &ChallengeManifest, phase: Option<Phase>) -> CmdResult<Vec<&PhaseEntry>> {
    let phases: Vec<&PhaseEntry> = m.phases.iter().filter(|p| phase.is_none_or(|q| p.name == q)).collect();
    if phases.is_empty() {
        return Err(CliError::config(anyhow!("manifest has no {} phase", phase.map_or("", Phase::as_str))));
    }
    Ok(phases)
}

fn selected_tasks<'a>(m: &'a ChallengeManifest, sel: &Selection) -> CmdResult<Vec<(Phase, &'a TaskEntry)>> {
    if let Some(t) = &sel.task {
        if m.task(t).is_none() {
            return Err(CliError::config(anyhow!("unknown task {t}")));
        }
    }
    let tasks: Vec<_> = m
        .tasks()
        .filter(|(p, t)| sel.phase.is_none_or(|q| *p == q) && sel.task.as_ref().is_none_or(|id| &t.task_id == id))
        .collect();
    if tasks.is_empty() {
        return Err(CliError::config(anyhow!("no task matches the selection")));
    }
    Ok(tasks)
}

fn check_alpha(alpha: f64) -> CmdResult<f64> {
    if alpha > 0.0 && alpha <= 0.5 {
        Ok(alpha)
    } else {
        Err(CliError::config(anyhow!("alpha {alpha} must lie in (0, 0.5]")))
    }
}

fn ensure_dir(dir: &Path) -> CmdResult<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(CliError::data)
}

pub fn metrics_path(out: &Path, task_id: &str) -> PathBuf {
    out.join(task_id).join("metrics.csv")
}

pub fn leaderboard_path(out: &Path, phase: Phase) -> PathBuf {
    out.join(phase.as_str()).join("leaderboard.json")
}

pub fn bootstrap_path(out: &Path, task_id: &str) -> PathBuf {
    out.join(task_id).join("bootstrap.json")
}

/// Computes `metrics.csv` for every selected task.
///
/// A task with any failed case is not written; its failures go to stderr.
pub fn cmd_evaluate(m: &ChallengeManifest, sel: &Selection, jobs: usize, out: &Path) -> CmdResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut failed = Vec::new();
    for (_, task) in selected_tasks(m, sel)? {
        log::info!("evaluating {} ({} cases)", task.task_id, task.cases.len());
        match evaluate_task(m, task, jobs) {
            Ok(rows) => {
                let path = metrics_path(out, &task.task_id);
                ensure_dir(path.parent().expect("task dir"))?;
                write_metrics_csv(&path, &rows).map_err(CliError::data)?;
                written.push(path);
            }
            Err(failures) => {
                for f in &failures {
                    eprintln!("{}: {f}", task.task_id);
                }
                failed.push(task.task_id.clone());
            }
        }
    }
    if !failed.is_empty() {
        return Err(CliError::data(anyhow!("evaluation failed for {}", failed.join(", "))));
    }
    Ok(written)
}

/// Reads a task's metric table, checking full algorithm and case coverage.
pub fn load_task_table(m: &ChallengeManifest, out: &Path, task: &TaskEntry) -> CmdResult<CaseMetricTable> {
    let path = metrics_path(out, &task.task_id);
    if !path.is_file() {
        return Err(CliError::data(anyhow!("{} not found; run evaluate first", path.display())));
    }
    let rows = read_metrics_csv(&path).map_err(CliError::data)?;
    table_from_rows(&task.task_id, &m.algorithm_names(), &task.cases, &task.roi_ids(), &rows).map_err(CliError::data)
}

/// Builds and writes the leaderboard of every selected phase.
pub fn cmd_rank(
    m: &ChallengeManifest,
    phase: Option<Phase>,
    alpha: Option<f64>,
    variants: Option<Vec<RankingVariant>>,
    out: &Path,
) -> CmdResult<Vec<Leaderboard>> {
    let alpha = check_alpha(alpha.unwrap_or(m.ranking.alpha))?;
    let variants = match variants {
        Some(v) => v,
        None => m.variants().map_err(CliError::config)?,
    };
    let mut boards = Vec::new();
    for p in selected_phases(m, phase)? {
        let mut tables = Vec::new();
        let mut tasks = Vec::new();
        let mut pooled = Vec::new();
        for task in &p.tasks {
            let table = load_task_table(m, out, task)?;
            let tr = task_significance_ranking(&table, alpha).map_err(CliError::data)?;
            let roi_metric_ranks: Vec<RoiMetricRanks> = tr
                .roi_metric
                .iter()
                .map(|r| RoiMetricRanks {
                    roi_id: r.roi_id.clone(),
                    metric: r.metric,
                    ranking: r.ranking(),
                })
                .collect();
            pooled.extend(roi_metric_ranks.iter().map(|r| r.ranking.clone()));
            let variant_ranks = variants
                .iter()
                .map(|&v| {
                    task_variant_ranking(&table, v, alpha)
                        .map(|ranking| VariantRanks { variant: v, ranking })
                        .map_err(CliError::data)
                })
                .collect::<CmdResult<Vec<_>>>()?;
            tasks.push(TaskLeaderboard {
                task_id: task.task_id.clone(),
                roi_metric_ranks,
                task_ranks: tr.task,
                variants: variant_ranks,
            });
            tables.push(table);
        }
        let task_tables: Vec<RankingTable> = tasks.iter().map(|t| t.task_ranks.clone()).collect();
        let board = Leaderboard {
            phase: p.name,
            alpha,
            phase_ranks: phase_ranking(&task_tables).map_err(CliError::data)?,
            pooled_phase_ranks: pooled_phase_ranking(&pooled).map_err(CliError::data)?,
            tasks,
        };
        let json = leaderboard_path(out, p.name);
        ensure_dir(json.parent().expect("phase dir"))?;
        write_json(&json, &board).map_err(CliError::data)?;
        write_csv(&json.with_extension("csv"), &leaderboard_rows(&board.phase_ranks, &tables)).map_err(CliError::data)?;
        log::info!("wrote {}", json.display());
        boards.push(board);
    }
    Ok(boards)
}

fn resolve_seed(flag: Option<u64>, m: &ChallengeManifest) -> CmdResult<u64> {
    if let Some(s) = flag.or(m.bootstrap.seed) {
        return Ok(s);
    }
    if std::env::var_os(CI_ENV).is_some() {
        return Err(CliError::config(anyhow!("a bootstrap seed is required when {CI_ENV} is set")));
    }
    let seed = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64);
    log::warn!("no seed given; using {seed}");
    Ok(seed)
}

/// Bootstrap stability analysis of every selected task.
pub fn cmd_bootstrap(
    m: &ChallengeManifest,
    sel: &Selection,
    alpha: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
    jobs: usize,
    out: &Path,
) -> CmdResult<Vec<BootstrapOutput>> {
    let alpha = check_alpha(alpha.unwrap_or(m.ranking.alpha))?;
    let n_samples = samples.unwrap_or(m.bootstrap.n_samples);
    if n_samples == 0 {
        return Err(CliError::config(anyhow!("--samples must be at least 1")));
    }
    let seed = resolve_seed(seed, m)?;
    let config = BootstrapConfig { n_samples, seed };
    let ranker = SignificanceTaskRanker { alpha };
    let mut outputs = Vec::new();
    for (_, task) in selected_tasks(m, sel)? {
        let table = load_task_table(m, out, task)?;
        let original = task_significance_ranking(&table, alpha).map_err(CliError::data)?.task;
        log::info!("bootstrapping {} ({n_samples} samples)", task.task_id);
        let rankings = par_bootstrap_rankings(&table, &ranker, &config, jobs).map_err(CliError::data)?;
        let summary = summarize(&task.task_id, &original, &rankings).map_err(CliError::data)?;
        let output = BootstrapOutput { seed, alpha, summary };
        let path = bootstrap_path(out, &task.task_id);
        ensure_dir(path.parent().expect("task dir"))?;
        write_json(&path, &output).map_err(CliError::data)?;
        write_csv(&path.with_file_name("rank_frequency.csv"), &rank_frequency_rows(&output.summary))
            .map_err(CliError::data)?;
        outputs.push(output);
    }
    Ok(outputs)
}

/// What `report` produced and what it had to leave out.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportOutcome {
    pub written: Vec<PathBuf>,
    pub skipped: Vec<String>,
}

impl ReportOutcome {
    fn skip(&mut self, why: String) {
        log::warn!("{why}");
        self.skipped.push(why);
    }
}

fn emit<T: Serialize>(dir: &Path, stem: &str, svg: &str, rows: &[T], outcome: &mut ReportOutcome) -> CmdResult<()> {
    let svg_path = dir.join(format!("{stem}.svg"));
    write_text(&svg_path, svg).map_err(CliError::data)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    write_csv(&csv_path, rows).map_err(CliError::data)?;
    outcome.written.push(svg_path);
    outcome.written.push(csv_path);
    Ok(())
}

/// ROI-level ranks: mean of the DSC and NSD significance ranks, re-ranked.
fn roi_level_ranks(task: &TaskLeaderboard) -> CmdResult<Vec<RankingTable>> {
    let mut rois: Vec<&str> = Vec::new();
    for r in &task.roi_metric_ranks {
        if !rois.contains(&r.roi_id.as_str()) {
            rois.push(&r.roi_id);
        }
    }
    rois.into_iter()
        .map(|roi| {
            let tables: Vec<&RankingTable> = task
                .roi_metric_ranks
                .iter()
                .filter(|r| r.roi_id == roi && Metric::ALL.contains(&r.metric))
                .map(|r| &r.ranking)
                .collect();
            rank_by_mean(RankLevel::RoiMetric, &tables).map_err(CliError::data)
        })
        .collect()
}

/// Draws every plot whose inputs exist; missing inputs are skipped with a warning.
pub fn cmd_report(m: &ChallengeManifest, phase: Option<Phase>, out: &Path) -> CmdResult<ReportOutcome> {
    let dir = out.join("report");
    ensure_dir(&dir)?;
    let mut outcome = ReportOutcome::default();
    let algorithms = m.algorithm_names();
    let mut rank_groups: Vec<RankGroup> = Vec::new();
    for p in selected_phases(m, phase)? {
        for task in &p.tasks {
            if !metrics_path(out, &task.task_id).is_file() {
                outcome.skip(format!("no metrics for {}; DSC box plot skipped", task.task_id));
                continue;
            }
            let table = load_task_table(m, out, task)?;
            let plot = dsc_boxplot(&task.task_id, &dsc_groups(&table));
            emit(&dir, &format!("dsc_{}", task.task_id), &plot.svg, &plot.rows, &mut outcome)?;
        }

        let lb_path = leaderboard_path(out, p.name);
        if lb_path.is_file() {
            let board: Leaderboard = read_json(&lb_path).map_err(CliError::data)?;
            let mut per_alg: Vec<Vec<f64>> = vec![Vec::new(); algorithms.len()];
            for task in &board.tasks {
                for ranking in roi_level_ranks(task)? {
                    for (a, name) in algorithms.iter().enumerate() {
                        if let Some(r) = ranking.rank_of(name) {
                            per_alg[a].push(r);
                        }
                    }
                }
                let variants: Vec<(String, RankingTable)> = task
                    .variants
                    .iter()
                    .map(|v| (v.variant.as_str().to_string(), v.ranking.clone()))
                    .collect();
                match line_plot(&task.task_id, &variants) {
                    Ok(plot) => emit(&dir, &format!("ranking_methods_{}", task.task_id), &plot.svg, &plot.rows, &mut outcome)?,
                    Err(e) => outcome.skip(format!("{}: line plot skipped ({e})", task.task_id)),
                }
            }
            for (name, ranks) in algorithms.iter().zip(per_alg) {
                rank_groups.push(RankGroup {
                    algorithm: name.clone(),
                    phase: p.name,
                    ranks,
                });
            }
        } else {
            outcome.skip(format!("no {} leaderboard; rank and line plots skipped for it", p.name));
        }

        let mut summaries: Vec<BootstrapSummary> = Vec::new();
        for task in &p.tasks {
            let path = bootstrap_path(out, &task.task_id);
            if path.is_file() {
                let b: BootstrapOutput = read_json(&path).map_err(CliError::data)?;
                summaries.push(b.summary);
            } else {
                outcome.skip(format!("no bootstrap output for {}", task.task_id));
            }
        }
        match stacked_frequency(&summaries) {
            Ok(plot) => emit(&dir, &format!("rank_frequency_{}", p.name), &plot.svg, &plot.rows, &mut outcome)?,
            Err(_) => outcome.skip(format!("no bootstrap outputs for the {} phase; stacked frequency plot skipped", p.name)),
        }
    }
    if rank_groups.is_empty() {
        outcome.skip("no leaderboards; rank box plot skipped".into());
    } else {
        let plot = rank_boxplot(&rank_groups);
        emit(&dir, "rank_boxplot", &plot.svg, &plot.rows, &mut outcome)?;
    }
    Ok(outcome)
}

/// Checks a submission directory against a task's reference geometry and labels.
pub fn cmd_validate(m: &ChallengeManifest, task_id: &str, submission: &Path, out: &Path) -> CmdResult<ValidationReport> {
    let (_, task) = m
        .task(task_id)
        .ok_or_else(|| CliError::config(anyhow!("unknown task {task_id}")))?;
    let expected = SubmissionManifest::from_challenge(m, task).map_err(CliError::config)?;
    let report = validate_submission(submission, &expected);
    print!("{}", report.human());
    let path = out.join(task_id).join("validation.json");
    ensure_dir(path.parent().expect("task dir"))?;
    write_json(&path, &report).map_err(CliError::data)?;
    Ok(report)
}
