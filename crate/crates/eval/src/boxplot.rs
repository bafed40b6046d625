//! Tukey box-plot statistics.

use msd_core::stats::quantile_sorted;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Whiskers extend to the most extreme data within this many IQRs of the box.
pub const WHISKER_IQR: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("box plot of an empty sample")]
pub struct EmptyInput;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

pub fn boxplot_stats(values: &[f64]) -> Result<BoxplotStats, EmptyInput> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25).ok_or(EmptyInput)?;
    let median = quantile_sorted(&sorted, 0.5).ok_or(EmptyInput)?;
    let q3 = quantile_sorted(&sorted, 0.75).ok_or(EmptyInput)?;
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - WHISKER_IQR * iqr, q3 + WHISKER_IQR * iqr);
    let inside = || sorted.iter().copied().filter(|v| *v >= lo_fence && *v <= hi_fence);
    // the box itself always lies within the fences, so `inside` is never empty
    let whisker_low = inside().next().unwrap_or(q1);
    let whisker_high = inside().last().unwrap_or(q3);
    let outliers = sorted
        .iter()
        .copied()
        .filter(|v| *v < lo_fence || *v > hi_fence)
        .collect();
    Ok(BoxplotStats {
        median,
        q1,
        q3,
        whisker_low,
        whisker_high,
        outliers,
    })
}
