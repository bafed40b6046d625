//! Dice similarity coefficient and normalised surface distance.
//!
//! Surfaces are the foreground voxels with at least one background (or
//! out-of-grid) 6-neighbour, each weighted equally. Distances are physical,
//! using per-axis voxel spacing.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::edt::squared_edt;
use crate::volume::{Extents, LabelVolume, Mask, Spacing};

/// Relative tolerance for treating two voxel spacings as equal.
pub const SPACING_REL_TOL: f64 = 1e-6;

/// NSD tolerance used when a task does not override it.
pub const DEFAULT_NSD_TOLERANCE_MM: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("grid extents differ: {0:?} vs {1:?}")]
    ExtentMismatch(Extents, Extents),
    #[error("voxel spacing differs: {0:?} vs {1:?}")]
    SpacingMismatch([f64; 3], [f64; 3]),
    #[error("target surface is empty")]
    EmptyTargetSurface,
    #[error("invalid ROI {roi_id}: {reason}")]
    InvalidRoi { roi_id: String, reason: &'static str },
}

/// One target region: which label encodes it and the NSD tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoiSpec {
    pub roi_id: String,
    pub label_value: u32,
    pub nsd_tolerance_mm: f64,
}

impl RoiSpec {
    pub fn new(roi_id: impl Into<String>, label_value: u32, nsd_tolerance_mm: f64) -> Result<Self, MetricError> {
        let roi = RoiSpec {
            roi_id: roi_id.into(),
            label_value,
            nsd_tolerance_mm,
        };
        roi.validate()?;
        Ok(roi)
    }

    pub fn validate(&self) -> Result<(), MetricError> {
        if self.label_value == 0 {
            return Err(MetricError::InvalidRoi {
                roi_id: self.roi_id.clone(),
                reason: "label 0 is background",
            });
        }
        if !(self.nsd_tolerance_mm.is_finite() && self.nsd_tolerance_mm > 0.0) {
            return Err(MetricError::InvalidRoi {
                roi_id: self.roi_id.clone(),
                reason: "NSD tolerance must be positive",
            });
        }
        Ok(())
    }
}

/// A metric value, with `undefined` set when it was substituted by 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub value: f64,
    pub undefined: bool,
}

impl Score {
    fn defined(value: f64) -> Self {
        Score { value, undefined: false }
    }

    const UNDEFINED: Score = Score {
        value: 0.0,
        undefined: true,
    };
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricFlags {
    pub gt_empty: bool,
    pub pred_empty: bool,
    pub undefined_substituted: bool,
}

/// Both metrics for one (case, ROI).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseMetricRecord {
    pub case_id: String,
    pub roi_id: String,
    pub dsc: f64,
    pub nsd: f64,
    pub flags: MetricFlags,
}

pub fn binary_mask(volume: &LabelVolume, label_value: u32) -> Mask {
    Mask::from_label(volume, label_value)
}

fn check_extents(a: &Mask, b: &Mask) -> Result<(), MetricError> {
    if a.extents() != b.extents() {
        return Err(MetricError::ExtentMismatch(a.extents(), b.extents()));
    }
    Ok(())
}

fn check_spacing(a: Spacing, b: Spacing) -> Result<(), MetricError> {
    if !a.approx_eq(&b, SPACING_REL_TOL) {
        return Err(MetricError::SpacingMismatch(a.0, b.0));
    }
    Ok(())
}

/// `2|G ∩ P| / (|G| + |P|)`; undefined (0) when both masks are empty.
pub fn dice(gt: &Mask, pred: &Mask) -> Result<Score, MetricError> {
    check_extents(gt, pred)?;
    let (mut g, mut p, mut both) = (0usize, 0usize, 0usize);
    for (&a, &b) in gt.voxels().iter().zip(pred.voxels()) {
        g += a as usize;
        p += b as usize;
        both += (a & b) as usize;
    }
    if g + p == 0 {
        return Ok(Score::UNDEFINED);
    }
    Ok(Score::defined(2.0 * both as f64 / (g + p) as f64))
}

/// Surface voxels of a mask in grid coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub extents: Extents,
    pub spacing: Spacing,
    pub points: Vec<[usize; 3]>,
}

impl Surface {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Foreground voxels with a 6-neighbour that is background or off-grid,
/// in x-fastest index order.
pub fn extract_surface(mask: &Mask) -> Surface {
    let extents = mask.extents();
    let mut points = Vec::new();
    if let Some((lo, hi)) = mask.bounding_box() {
        let [nx, ny, nz] = extents.as_array();
        let v = mask.voxels();
        let (sy, sz) = (nx, nx * ny);
        for z in lo[2]..=hi[2] {
            for y in lo[1]..=hi[1] {
                for x in lo[0]..=hi[0] {
                    let i = extents.index(x, y, z);
                    if !v[i] {
                        continue;
                    }
                    let border = x == 0
                        || y == 0
                        || z == 0
                        || x + 1 == nx
                        || y + 1 == ny
                        || z + 1 == nz
                        || !v[i - 1]
                        || !v[i + 1]
                        || !v[i - sy]
                        || !v[i + sy]
                        || !v[i - sz]
                        || !v[i + sz];
                    if border {
                        points.push([x, y, z]);
                    }
                }
            }
        }
    }
    Surface {
        extents,
        spacing: mask.spacing(),
        points,
    }
}

fn union_box(a: &[[usize; 3]], b: &[[usize; 3]]) -> ([usize; 3], [usize; 3]) {
    let mut lo = [usize::MAX; 3];
    let mut hi = [0usize; 3];
    for p in a.iter().chain(b) {
        for ax in 0..3 {
            lo[ax] = lo[ax].min(p[ax]);
            hi[ax] = hi[ax].max(p[ax]);
        }
    }
    (lo, hi)
}

/// Squared distances from each `from` point to the nearest `to` point.
///
/// The transform runs on the bounding box of both point sets only; every
/// feature lies inside it, so the result is the same as on the full grid.
fn squared_surface_distances(from: &[[usize; 3]], to: &[[usize; 3]], spacing: Spacing) -> Vec<f64> {
    if from.is_empty() {
        return Vec::new();
    }
    let (lo, hi) = union_box(from, to);
    let crop = Extents::new(hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1);
    let mut features = vec![false; crop.len()];
    for p in to {
        features[crop.index(p[0] - lo[0], p[1] - lo[1], p[2] - lo[2])] = true;
    }
    let field = squared_edt(&features, crop, spacing);
    from.iter()
        .map(|p| field[crop.index(p[0] - lo[0], p[1] - lo[1], p[2] - lo[2])])
        .collect()
}

/// Distance in millimeters from each element of `from` to the nearest element of `to`.
pub fn surface_distances(from: &Surface, to: &Surface) -> Result<Vec<f64>, MetricError> {
    if to.is_empty() {
        return Err(MetricError::EmptyTargetSurface);
    }
    if from.extents != to.extents {
        return Err(MetricError::ExtentMismatch(from.extents, to.extents));
    }
    check_spacing(from.spacing, to.spacing)?;
    Ok(squared_surface_distances(&from.points, &to.points, to.spacing)
        .into_iter()
        .map(libm::sqrt)
        .collect())
}

/// Count of `from` points whose nearest `to` point is within `tolerance_mm`.
fn count_within(from: &[[usize; 3]], to: &[[usize; 3]], spacing: Spacing, tolerance_mm: f64) -> usize {
    squared_surface_distances(from, to, spacing)
        .into_iter()
        .filter(|&d2| libm::sqrt(d2) <= tolerance_mm)
        .count()
}

/// Normalised surface distance at tolerance `tolerance_mm`.
///
/// Both surfaces empty is undefined (0, flagged). Exactly one empty surface
/// gives a plain 0.
pub fn nsd(gt: &Mask, pred: &Mask, tolerance_mm: f64) -> Result<Score, MetricError> {
    check_extents(gt, pred)?;
    check_spacing(gt.spacing(), pred.spacing())?;
    let sg = extract_surface(gt);
    let sp = extract_surface(pred);
    Ok(nsd_from_surfaces(&sg, &sp, tolerance_mm))
}

fn nsd_from_surfaces(sg: &Surface, sp: &Surface, tolerance_mm: f64) -> Score {
    match (sg.is_empty(), sp.is_empty()) {
        (true, true) => return Score::UNDEFINED,
        (true, false) | (false, true) => return Score::defined(0.0),
        _ => {}
    }
    let spacing = sg.spacing;
    let close = count_within(&sg.points, &sp.points, spacing, tolerance_mm)
        + count_within(&sp.points, &sg.points, spacing, tolerance_mm);
    Score::defined(close as f64 / (sg.len() + sp.len()) as f64)
}

/// DSC and NSD for every ROI of one case.
pub fn evaluate_case(
    case_id: &str,
    gt: &LabelVolume,
    pred: &LabelVolume,
    rois: &[RoiSpec],
) -> Result<Vec<CaseMetricRecord>, MetricError> {
    if gt.extents() != pred.extents() {
        return Err(MetricError::ExtentMismatch(gt.extents(), pred.extents()));
    }
    check_spacing(gt.spacing(), pred.spacing())?;
    let mut records = Vec::with_capacity(rois.len());
    for roi in rois {
        roi.validate()?;
        let g = binary_mask(gt, roi.label_value);
        let p = binary_mask(pred, roi.label_value).with_spacing(gt.spacing());
        let d = dice(&g, &p)?;
        let n = nsd(&g, &p, roi.nsd_tolerance_mm)?;
        let flags = MetricFlags {
            gt_empty: g.is_empty(),
            pred_empty: p.is_empty(),
            undefined_substituted: d.undefined || n.undefined,
        };
        records.push(CaseMetricRecord {
            case_id: case_id.into(),
            roi_id: roi.roi_id.clone(),
            dsc: d.value,
            nsd: n.value,
            flags,
        });
    }
    Ok(records)
}
