//! One-sided Wilcoxon signed-rank test for paired differences.
//!
//! Zero differences are discarded, absolute differences get mid-ranks, and
//! the statistic is the rank sum of the positive differences. Up to
//! [`EXACT_MAX_N`] non-zero differences the upper-tail p-value is exact: the
//! null distribution over all `2^n` sign assignments of the observed
//! (possibly tied) ranks is counted by dynamic programming on doubled ranks.
//! Above that, a normal approximation with tie-corrected variance and a 0.5
//! continuity correction is used.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats::{midranks, tie_group_sizes};

/// Largest number of non-zero differences evaluated exactly.
pub const EXACT_MAX_N: usize = 25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WilcoxonError {
    #[error("no differences supplied")]
    EmptyInput,
    #[error("difference {0} is not finite")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PValueMethod {
    /// Every difference was zero.
    NoEvidence,
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    pub p_value: f64,
    pub significant: bool,
    /// Number of non-zero differences.
    pub n: usize,
    pub w_plus: f64,
    pub method: PValueMethod,
}

/// Signed ranks of the non-zero differences: `(ranks of |d|, positive?)`.
pub fn signed_ranks(diffs: &[f64]) -> (Vec<f64>, Vec<bool>) {
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|&d| d != 0.0).collect();
    let abs: Vec<f64> = nonzero.iter().map(|d| libm::fabs(*d)).collect();
    let ranks = midranks(&abs);
    let positive = nonzero.iter().map(|&d| d > 0.0).collect();
    (ranks, positive)
}

/// Exact `P(W+ >= w_plus)` under random signs on the given ranks.
///
/// Ranks must be multiples of 0.5 (mid-ranks are).
pub fn exact_upper_tail(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| libm::round(2.0 * r) as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            let c = counts[s];
            if c != 0 {
                counts[s + r] += c;
            }
        }
        reach += r;
    }
    let observed = libm::round(2.0 * w_plus) as usize;
    let tail: u64 = counts.iter().skip(observed).sum();
    tail as f64 / libm::ldexp(1.0, ranks.len() as i32)
}

/// Normal approximation of `P(W+ >= w_plus)` with tie correction and
/// continuity correction.
pub fn normal_upper_tail(ranks: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let ties: f64 = tie_group_sizes(ranks)
        .into_iter()
        .map(|t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - ties / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = (w_plus - mean - 0.5) / libm::sqrt(var);
    0.5 * libm::erfc(z / core::f64::consts::SQRT_2)
}

/// Tests H1: the differences are shifted above zero. Significant iff `p < alpha`.
pub fn wilcoxon_one_sided(diffs: &[f64], alpha: f64) -> Result<WilcoxonResult, WilcoxonError> {
    if diffs.is_empty() {
        return Err(WilcoxonError::EmptyInput);
    }
    if let Some(&bad) = diffs.iter().find(|d| !d.is_finite()) {
        return Err(WilcoxonError::NonFinite(bad));
    }
    let (ranks, positive) = signed_ranks(diffs);
    let n = ranks.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            p_value: 1.0,
            significant: false,
            n,
            w_plus: 0.0,
            method: PValueMethod::NoEvidence,
        });
    }
    let w_plus: f64 = ranks.iter().zip(&positive).filter(|(_, &p)| p).map(|(r, _)| r).sum();
    let (p_value, method) = if n <= EXACT_MAX_N {
        (exact_upper_tail(&ranks, w_plus), PValueMethod::Exact)
    } else {
        (normal_upper_tail(&ranks, w_plus), PValueMethod::NormalApprox)
    };
    Ok(WilcoxonResult {
        p_value,
        significant: p_value < alpha,
        n,
        w_plus,
        method,
    })
}
