//! Allocation-only kernels for segmentation challenge evaluation.
//!
//! The crate is `no_std` (it needs `alloc`) and covers everything that is a
//! pure function of in-memory data:
//!
//! * [`volume`]: dense 3D label grids and binary masks with voxel spacing.
//! * [`metrics`]: Dice similarity and normalised surface distance, backed by
//!   an exact anisotropic Euclidean distance transform ([`edt`]).
//! * [`wilcoxon`]: one-sided Wilcoxon signed-rank test with exact p-values.
//! * [`ranking`]: significance scores, hierarchical rank aggregation and the
//!   alternative ranking schemes.
//! * [`stability`]: paired bootstrap of rankings and Kendall's tau-b.
//!
//! File formats, parallel batch drivers and plotting live in `msd-eval`.
#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod edt;
pub mod metrics;
pub mod ranking;
pub mod stability;
pub mod stats;
pub mod volume;
pub mod wilcoxon;

pub use metrics::{evaluate_case, CaseMetricRecord, MetricError, RoiSpec};
pub use ranking::{CaseMetricTable, Metric, Phase, RankingTable, RankingVariant, SignificanceResult, TaskSpec};
pub use stability::{BootstrapConfig, BootstrapSummary};
pub use volume::{Extents, LabelVolume, Mask, Spacing};
