//! The four plot families, each as an SVG plus the table it was drawn from.
//!
//! Every datum is one tagged element (`class="box"`, `class="rank-line"`,
//! `class="bar"`) so tests can count what was drawn.

use msd_core::ranking::{CaseMetricTable, Metric, Phase, RankingTable};
use msd_core::stability::BootstrapSummary;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boxplot::{boxplot_stats, BoxplotStats};
use crate::svg::{num, palette, Svg, DEVELOPMENT_COLOR, INK, MYSTERY_COLOR, POINT_COLOR};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlotError {
    #[error("line plot needs at least two ranking variants, got {0}")]
    TooFewVariants(usize),
    #[error("nothing to plot")]
    NoData,
}

/// Rendered SVG and its data rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot<T> {
    pub svg: String,
    pub rows: Vec<T>,
}

const MARGIN_LEFT: f64 = 60.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 110.0;

/// Values feeding one box.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGroup {
    pub algorithm: String,
    pub roi: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxCsvRow {
    pub algorithm: String,
    pub roi: String,
    pub n: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: String,
}

impl BoxCsvRow {
    fn new(algorithm: &str, roi: &str, n: usize, s: &BoxplotStats) -> Self {
        BoxCsvRow {
            algorithm: algorithm.into(),
            roi: roi.into(),
            n,
            median: s.median,
            q1: s.q1,
            q3: s.q3,
            whisker_low: s.whisker_low,
            whisker_high: s.whisker_high,
            outliers: s.outliers.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"),
        }
    }
}

/// Per-(algorithm, ROI) DSC samples of a task, in table order.
pub fn dsc_groups(table: &CaseMetricTable) -> Vec<BoxGroup> {
    let mut groups = Vec::new();
    for (a, alg) in table.algorithms().iter().enumerate() {
        for (r, roi) in table.rois().iter().enumerate() {
            groups.push(BoxGroup {
                algorithm: alg.clone(),
                roi: roi.clone(),
                values: table.column(a, r, Metric::Dsc),
            });
        }
    }
    groups
}

fn unique_in_order<'a>(items: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in items {
        if !out.iter().any(|o| o == s) {
            out.push(s.to_string());
        }
    }
    out
}

/// Deterministic horizontal jitter in `[-1, 1]`.
fn jitter(i: usize) -> f64 {
    ((i * 37 % 17) as f64 / 8.0) - 1.0
}

/// Dot-and-box plot of DSC per algorithm, one colored box per ROI.
pub fn dsc_boxplot(task_id: &str, groups: &[BoxGroup]) -> Plot<BoxCsvRow> {
    let algorithms = unique_in_order(groups.iter().map(|g| g.algorithm.as_str()));
    let rois = unique_in_order(groups.iter().map(|g| g.roi.as_str()));
    let box_w = 16.0;
    let group_w = rois.len() as f64 * (box_w + 4.0) + 20.0;
    let plot_h = 300.0;
    let width = MARGIN_LEFT + algorithms.len() as f64 * group_w + 120.0;
    let height = MARGIN_TOP + plot_h + MARGIN_BOTTOM;
    let y_of = |v: f64| MARGIN_TOP + (1.0 - v.clamp(0.0, 1.0)) * plot_h;

    let mut svg = Svg::new(width, height);
    svg.text(width / 2.0, 20.0, "middle", 14.0, &format!("{task_id}: DSC"), None);
    value_axis(&mut svg, plot_h, width - 120.0, |v| y_of(v));

    let mut rows = Vec::new();
    for (ai, alg) in algorithms.iter().enumerate() {
        let gx = MARGIN_LEFT + ai as f64 * group_w + 10.0;
        for (ri, roi) in rois.iter().enumerate() {
            let Some(group) = groups.iter().find(|g| &g.algorithm == alg && &g.roi == roi) else {
                continue;
            };
            let stats = match boxplot_stats(&group.values) {
                Ok(s) => s,
                Err(_) => {
                    log::warn!("{task_id}: no DSC values for {alg} / {roi}; box omitted");
                    continue;
                }
            };
            let x = gx + ri as f64 * (box_w + 4.0);
            let cx = x + box_w / 2.0;
            let color = palette(ri);
            for (i, &v) in group.values.iter().enumerate() {
                svg.circle(cx + jitter(i) * box_w * 0.4, y_of(v), 1.5, &format!("fill:{POINT_COLOR}"), &[("class", "point".into())]);
            }
            draw_vertical_box(&mut svg, x, box_w, &stats, color, &y_of, &[
                ("data-algorithm", alg.clone()),
                ("data-roi", roi.clone()),
            ]);
            rows.push(BoxCsvRow::new(alg, roi, group.values.len(), &stats));
        }
        svg.text(gx + group_w / 2.0 - 10.0, MARGIN_TOP + plot_h + 12.0, "end", 10.0, alg, Some(-45.0));
    }
    for (ri, roi) in rois.iter().enumerate() {
        let ly = MARGIN_TOP + 10.0 + ri as f64 * 16.0;
        let lx = width - 110.0;
        svg.rect(lx, ly - 8.0, 10.0, 10.0, &format!("fill:{}", palette(ri)), &[("class", "legend".into())]);
        svg.text(lx + 14.0, ly, "start", 10.0, roi, None);
    }
    Plot { svg: svg.finish(), rows }
}

fn value_axis(svg: &mut Svg, plot_h: f64, right: f64, y_of: impl Fn(f64) -> f64) {
    svg.line(MARGIN_LEFT, MARGIN_TOP, MARGIN_LEFT, MARGIN_TOP + plot_h, &format!("stroke:{INK}"), &[]);
    for k in 0..=5 {
        let v = k as f64 / 5.0;
        let y = y_of(v);
        svg.line(MARGIN_LEFT - 4.0, y, right, y, "stroke:#e0e0e0", &[]);
        svg.text(MARGIN_LEFT - 6.0, y + 3.0, "end", 10.0, &num(v), None);
    }
}

fn draw_vertical_box(
    svg: &mut Svg,
    x: f64,
    w: f64,
    s: &BoxplotStats,
    color: &str,
    y_of: &impl Fn(f64) -> f64,
    tags: &[(&str, String)],
) {
    let cx = x + w / 2.0;
    let stroke = format!("stroke:{INK};stroke-width:1");
    svg.line(cx, y_of(s.whisker_high), cx, y_of(s.q3), &stroke, &[("class", "whisker".into())]);
    svg.line(cx, y_of(s.q1), cx, y_of(s.whisker_low), &stroke, &[("class", "whisker".into())]);
    let mut box_tags = vec![("class", "box".to_string())];
    box_tags.extend(tags.iter().cloned());
    svg.rect(
        x,
        y_of(s.q3),
        w,
        y_of(s.q1) - y_of(s.q3),
        &format!("fill:{color};fill-opacity:0.6;stroke:{INK}"),
        &box_tags,
    );
    svg.line(x, y_of(s.median), x + w, y_of(s.median), &format!("stroke:{INK};stroke-width:2"), &[("class", "median".into())]);
    for &o in &s.outliers {
        svg.circle(cx, y_of(o), 2.5, &format!("fill:none;stroke:{INK}"), &[("class", "outlier".into())]);
    }
}

/// Ranks of one algorithm over all ROIs of a phase.
#[derive(Debug, Clone, PartialEq)]
pub struct RankGroup {
    pub algorithm: String,
    pub phase: Phase,
    pub ranks: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankBoxCsvRow {
    pub algorithm: String,
    pub phase: Phase,
    pub n: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: String,
}

/// Horizontal box plots of ROI-level ranks, color-coded by phase.
pub fn rank_boxplot(groups: &[RankGroup]) -> Plot<RankBoxCsvRow> {
    let algorithms = unique_in_order(groups.iter().map(|g| g.algorithm.as_str()));
    let phases: Vec<Phase> = [Phase::Development, Phase::Mystery]
        .into_iter()
        .filter(|p| groups.iter().any(|g| g.phase == *p))
        .collect();
    let max_rank = groups
        .iter()
        .flat_map(|g| g.ranks.iter().copied())
        .fold(1.0, f64::max)
        .ceil();
    let row_h = 12.0 * phases.len().max(1) as f64 + 10.0;
    let plot_w = 400.0;
    let left = 130.0;
    let width = left + plot_w + 40.0;
    let height = MARGIN_TOP + algorithms.len() as f64 * row_h + 60.0;
    let x_of = |r: f64| left + (r - 1.0) / (max_rank - 1.0).max(1.0) * plot_w;

    let mut svg = Svg::new(width, height);
    svg.text(width / 2.0, 20.0, "middle", 14.0, "Ranks per target region", None);
    let axis_y = MARGIN_TOP + algorithms.len() as f64 * row_h + 5.0;
    svg.line(left, axis_y, left + plot_w, axis_y, &format!("stroke:{INK}"), &[]);
    for r in 1..=(max_rank as usize) {
        let x = x_of(r as f64);
        svg.line(x, MARGIN_TOP, x, axis_y, "stroke:#e0e0e0", &[]);
        svg.text(x, axis_y + 14.0, "middle", 10.0, &r.to_string(), None);
    }

    let mut rows = Vec::new();
    for (ai, alg) in algorithms.iter().enumerate() {
        let top = MARGIN_TOP + ai as f64 * row_h;
        svg.text(left - 8.0, top + row_h / 2.0 + 3.0, "end", 10.0, alg, None);
        for (pi, phase) in phases.iter().enumerate() {
            let Some(group) = groups.iter().find(|g| &g.algorithm == alg && g.phase == *phase) else {
                continue;
            };
            let Ok(s) = boxplot_stats(&group.ranks) else {
                log::warn!("no ranks for {alg} in the {phase} phase; box omitted");
                continue;
            };
            let y = top + 5.0 + pi as f64 * 12.0;
            let cy = y + 5.0;
            let color = if *phase == Phase::Development { DEVELOPMENT_COLOR } else { MYSTERY_COLOR };
            for (i, &r) in group.ranks.iter().enumerate() {
                svg.circle(x_of(r), cy + jitter(i) * 3.0, 1.5, &format!("fill:{POINT_COLOR}"), &[("class", "point".into())]);
            }
            let stroke = format!("stroke:{INK};stroke-width:1");
            svg.line(x_of(s.whisker_low), cy, x_of(s.q1), cy, &stroke, &[("class", "whisker".into())]);
            svg.line(x_of(s.q3), cy, x_of(s.whisker_high), cy, &stroke, &[("class", "whisker".into())]);
            svg.rect(
                x_of(s.q1),
                y,
                x_of(s.q3) - x_of(s.q1),
                10.0,
                &format!("fill:{color};fill-opacity:0.6;stroke:{INK}"),
                &[("class", "box".into()), ("data-algorithm", alg.clone()), ("data-phase", phase.to_string())],
            );
            svg.line(x_of(s.median), y, x_of(s.median), y + 10.0, &format!("stroke:{INK};stroke-width:2"), &[("class", "median".into())]);
            for &o in &s.outliers {
                svg.circle(x_of(o), cy, 2.5, &format!("fill:none;stroke:{INK}"), &[("class", "outlier".into())]);
            }
            rows.push(RankBoxCsvRow {
                algorithm: alg.clone(),
                phase: *phase,
                n: group.ranks.len(),
                median: s.median,
                q1: s.q1,
                q3: s.q3,
                whisker_low: s.whisker_low,
                whisker_high: s.whisker_high,
                outliers: s.outliers.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"),
            });
        }
    }
    for (pi, phase) in phases.iter().enumerate() {
        let color = if *phase == Phase::Development { DEVELOPMENT_COLOR } else { MYSTERY_COLOR };
        let lx = left + pi as f64 * 110.0;
        svg.rect(lx, height - 22.0, 10.0, 10.0, &format!("fill:{color}"), &[("class", "legend".into())]);
        svg.text(lx + 14.0, height - 13.0, "start", 10.0, phase.as_str(), None);
    }
    Plot { svg: svg.finish(), rows }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineCsvRow {
    pub algorithm: String,
    pub variant: String,
    pub rank: f64,
}

/// One polyline per algorithm through its rank under each ranking method.
pub fn line_plot(task_id: &str, variants: &[(String, RankingTable)]) -> Result<Plot<LineCsvRow>, PlotError> {
    if variants.len() < 2 {
        return Err(PlotError::TooFewVariants(variants.len()));
    }
    let algorithms: Vec<String> = variants[0].1.entries.iter().map(|e| e.algorithm.clone()).collect();
    let n = algorithms.len().max(2) as f64;
    let col_w = 120.0;
    let plot_h = 24.0 * n;
    let left = 60.0;
    let width = left + col_w * (variants.len() - 1) as f64 + 170.0;
    let height = MARGIN_TOP + plot_h + 60.0;
    let x_of = |i: usize| left + i as f64 * col_w;
    let y_of = |r: f64| MARGIN_TOP + (r - 1.0) / (n - 1.0) * plot_h;

    let mut svg = Svg::new(width, height);
    svg.text(width / 2.0, 20.0, "middle", 14.0, &format!("{task_id}: ranking methods"), None);
    for (i, (name, _)) in variants.iter().enumerate() {
        svg.line(x_of(i), MARGIN_TOP, x_of(i), MARGIN_TOP + plot_h, "stroke:#e0e0e0", &[]);
        svg.text(x_of(i), MARGIN_TOP + plot_h + 20.0, "middle", 10.0, name, None);
    }
    for r in 1..=algorithms.len() {
        svg.text(left - 10.0, y_of(r as f64) + 3.0, "end", 10.0, &r.to_string(), None);
    }
    let mut rows = Vec::new();
    for (ai, alg) in algorithms.iter().enumerate() {
        let mut pts = Vec::with_capacity(variants.len());
        for (i, (name, ranking)) in variants.iter().enumerate() {
            let rank = ranking.rank_of(alg).ok_or(PlotError::NoData)?;
            pts.push((x_of(i), y_of(rank)));
            rows.push(LineCsvRow {
                algorithm: alg.clone(),
                variant: name.clone(),
                rank,
            });
        }
        let color = palette(ai);
        svg.polyline(&pts, &format!("fill:none;stroke:{color};stroke-width:2"), &[
            ("class", "rank-line".into()),
            ("data-algorithm", alg.clone()),
        ]);
        let (lx, ly) = *pts.last().expect("two or more variants");
        svg.text(lx + 8.0, ly + 3.0, "start", 10.0, alg, None);
    }
    Ok(Plot { svg: svg.finish(), rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyCsvRow {
    pub task: String,
    pub algorithm: String,
    pub rank: f64,
    pub count: usize,
}

/// Per-algorithm panels of achieved bootstrap ranks, stacked and colored by task.
pub fn stacked_frequency(summaries: &[BootstrapSummary]) -> Result<Plot<FrequencyCsvRow>, PlotError> {
    if summaries.is_empty() {
        return Err(PlotError::NoData);
    }
    let algorithms = unique_in_order(
        summaries
            .iter()
            .flat_map(|s| s.original.sorted_by_rank().into_iter().map(|e| e.algorithm.as_str())),
    );
    let max_rank = summaries
        .iter()
        .flat_map(|s| s.rank_frequency.iter().flat_map(|r| r.counts.iter().map(|c| c.rank)))
        .fold(1.0, f64::max)
        .ceil();
    let total: usize = summaries.iter().map(|s| s.n_samples).sum();
    let cols = algorithms.len().min(4).max(1);
    let panel_w = 180.0;
    let panel_h = 120.0;
    let gap = 40.0;
    let panel_rows = algorithms.len().div_ceil(cols);
    let width = 30.0 + cols as f64 * (panel_w + gap) + 120.0;
    let height = MARGIN_TOP + panel_rows as f64 * (panel_h + gap + 10.0) + 20.0;
    let step = panel_w / max_rank;
    let bar_w = step * 0.45;

    let mut svg = Svg::new(width, height);
    svg.text(width / 2.0, 20.0, "middle", 14.0, "Bootstrap rank frequencies", None);
    let mut rows = Vec::new();
    for (ai, alg) in algorithms.iter().enumerate() {
        let px = 30.0 + (ai % cols) as f64 * (panel_w + gap);
        let py = MARGIN_TOP + (ai / cols) as f64 * (panel_h + gap + 10.0);
        let base = py + panel_h;
        svg.text(px + panel_w / 2.0, py - 4.0, "middle", 11.0, alg, None);
        svg.line(px, base, px + panel_w, base, &format!("stroke:{INK}"), &[]);
        for r in 1..=(max_rank as usize) {
            let x = px + (r as f64 - 0.5) * step;
            svg.text(x, base + 12.0, "middle", 9.0, &r.to_string(), None);
        }
        // running stack height per rank, keyed by rank bits
        let mut stacks: Vec<(u64, f64)> = Vec::new();
        for (ti, summary) in summaries.iter().enumerate() {
            let Some(row) = summary.rank_frequency.iter().find(|r| &r.algorithm == alg) else {
                continue;
            };
            for c in &row.counts {
                let h = c.count as f64 / total as f64 * panel_h;
                let slot = match stacks.iter_mut().find(|(k, _)| *k == c.rank.to_bits()) {
                    Some(s) => s,
                    None => {
                        stacks.push((c.rank.to_bits(), 0.0));
                        stacks.last_mut().expect("just pushed")
                    }
                };
                let x = px + (c.rank - 0.5) * step - bar_w / 2.0;
                svg.rect(x, base - slot.1 - h, bar_w, h, &format!("fill:{};stroke:{INK};stroke-width:0.5", palette(ti)), &[
                    ("class", "bar".into()),
                    ("data-task", summary.task_id.clone()),
                    ("data-algorithm", alg.clone()),
                    ("data-rank", c.rank.to_string()),
                    ("data-count", c.count.to_string()),
                ]);
                slot.1 += h;
                rows.push(FrequencyCsvRow {
                    task: summary.task_id.clone(),
                    algorithm: alg.clone(),
                    rank: c.rank,
                    count: c.count,
                });
            }
        }
    }
    for (ti, s) in summaries.iter().enumerate() {
        let lx = width - 110.0;
        let ly = MARGIN_TOP + ti as f64 * 16.0;
        svg.rect(lx, ly - 8.0, 10.0, 10.0, &format!("fill:{}", palette(ti)), &[("class", "legend".into())]);
        svg.text(lx + 14.0, ly, "start", 10.0, &s.task_id, None);
    }
    Ok(Plot { svg: svg.finish(), rows })
}
