//! Label volumes and binary masks.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Grid extents in voxels, x fastest in memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Extents {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl Extents {
    pub const fn new(nx: usize, ny: usize, nz: usize) -> Self {
        Extents { nx, ny, nz }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.nx * (y + self.ny * z)
    }

    #[inline]
    pub fn coords(&self, index: usize) -> [usize; 3] {
        let x = index % self.nx;
        let rest = index / self.nx;
        [x, rest % self.ny, rest / self.ny]
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.nx, self.ny, self.nz]
    }
}

/// Physical voxel edge lengths in millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spacing(pub [f64; 3]);

impl Spacing {
    pub const UNIT: Spacing = Spacing([1.0, 1.0, 1.0]);

    pub fn is_valid(&self) -> bool {
        self.0.iter().all(|s| s.is_finite() && *s > 0.0)
    }

    /// Componentwise relative agreement.
    pub fn approx_eq(&self, other: &Spacing, rel_tol: f64) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| {
            let scale = libm::fmax(libm::fabs(*a), libm::fabs(*b));
            libm::fabs(a - b) <= rel_tol * scale
        })
    }

    pub fn scaled(&self, factor: f64) -> Spacing {
        Spacing([self.0[0] * factor, self.0[1] * factor, self.0[2] * factor])
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VolumeError {
    #[error("label buffer has {actual} voxels, extents require {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("voxel spacing {0:?} must be finite and positive")]
    InvalidSpacing([f64; 3]),
}

/// A 3D grid of non-negative integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelVolume {
    extents: Extents,
    spacing: Spacing,
    labels: Vec<u32>,
    source: String,
}

impl LabelVolume {
    pub fn new(
        extents: Extents,
        spacing: Spacing,
        labels: Vec<u32>,
        source: impl Into<String>,
    ) -> Result<Self, VolumeError> {
        if labels.len() != extents.len() {
            return Err(VolumeError::LengthMismatch {
                expected: extents.len(),
                actual: labels.len(),
            });
        }
        if !spacing.is_valid() {
            return Err(VolumeError::InvalidSpacing(spacing.0));
        }
        Ok(LabelVolume {
            extents,
            spacing,
            labels,
            source: source.into(),
        })
    }

    /// Volume filled with a single label.
    pub fn filled(extents: Extents, spacing: Spacing, label: u32) -> Result<Self, VolumeError> {
        Self::new(extents, spacing, alloc::vec![label; extents.len()], "")
    }

    pub fn extents(&self) -> Extents {
        self.extents
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn labels_mut(&mut self) -> &mut [u32] {
        &mut self.labels
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> u32 {
        self.labels[self.extents.index(x, y, z)]
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, label: u32) {
        let i = self.extents.index(x, y, z);
        self.labels[i] = label;
    }

    pub fn max_label(&self) -> u32 {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// Voxel grid and spacing equality, ignoring the source identifier.
    pub fn same_content(&self, other: &LabelVolume) -> bool {
        self.extents == other.extents && self.spacing == other.spacing && self.labels == other.labels
    }
}

/// Binary foreground mask on a voxel grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    extents: Extents,
    spacing: Spacing,
    voxels: Vec<bool>,
}

impl Mask {
    pub fn new(extents: Extents, spacing: Spacing, voxels: Vec<bool>) -> Result<Self, VolumeError> {
        if voxels.len() != extents.len() {
            return Err(VolumeError::LengthMismatch {
                expected: extents.len(),
                actual: voxels.len(),
            });
        }
        if !spacing.is_valid() {
            return Err(VolumeError::InvalidSpacing(spacing.0));
        }
        Ok(Mask {
            extents,
            spacing,
            voxels,
        })
    }

    pub fn empty(extents: Extents, spacing: Spacing) -> Self {
        Mask {
            extents,
            spacing,
            voxels: alloc::vec![false; extents.len()],
        }
    }

    /// Foreground wherever the volume holds `label`.
    pub fn from_label(volume: &LabelVolume, label: u32) -> Self {
        Mask {
            extents: volume.extents,
            spacing: volume.spacing,
            voxels: volume.labels.iter().map(|&l| l == label).collect(),
        }
    }

    pub fn extents(&self) -> Extents {
        self.extents
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn voxels(&self) -> &[bool] {
        &self.voxels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> bool {
        self.voxels[self.extents.index(x, y, z)]
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, value: bool) {
        let i = self.extents.index(x, y, z);
        self.voxels[i] = value;
    }

    pub fn count(&self) -> usize {
        self.voxels.iter().filter(|&&v| v).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.voxels.iter().any(|&v| v)
    }

    pub fn with_spacing(mut self, spacing: Spacing) -> Self {
        self.spacing = spacing;
        self
    }

    /// Inclusive bounding box `(min, max)` of the foreground.
    pub fn bounding_box(&self) -> Option<([usize; 3], [usize; 3])> {
        let mut bounds: Option<([usize; 3], [usize; 3])> = None;
        for (i, _) in self.voxels.iter().enumerate().filter(|(_, &v)| v) {
            let c = self.extents.coords(i);
            match bounds.as_mut() {
                None => bounds = Some((c, c)),
                Some((lo, hi)) => {
                    for a in 0..3 {
                        lo[a] = lo[a].min(c[a]);
                        hi[a] = hi[a].max(c[a]);
                    }
                }
            }
        }
        bounds
    }
}
