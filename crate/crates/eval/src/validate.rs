//! Submission completeness checks run before a submission is scored.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use msd_core::metrics::SPACING_REL_TOL;
use msd_core::volume::{Extents, Spacing};
use serde::{Deserialize, Serialize};

use crate::manifest::{ChallengeManifest, ManifestError, TaskEntry};
use crate::nifti::{load_header, load_label_volume};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCase {
    pub case_id: String,
    pub extents: Extents,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmissionManifest {
    pub task_id: String,
    pub cases: Vec<ExpectedCase>,
    /// `{case}` is replaced by the case id.
    pub file_pattern: String,
    pub legal_labels: BTreeSet<u32>,
}

impl SubmissionManifest {
    /// Reference geometry comes from the ground-truth headers of the task.
    pub fn from_challenge(manifest: &ChallengeManifest, task: &TaskEntry) -> Result<Self, ManifestError> {
        let mut cases = Vec::with_capacity(task.cases.len());
        for case in &task.cases {
            let path = manifest.gt_path(task, case);
            let header = load_header(&path).map_err(|e| ManifestError::Invalid(format!("reference {}: {e}", path.display())))?;
            let bad = |e: crate::nifti::NiftiError| ManifestError::Invalid(format!("reference {}: {e}", path.display()));
            cases.push(ExpectedCase {
                case_id: case.clone(),
                extents: header.extents().map_err(bad)?,
                spacing: header.spacing().map_err(bad)?,
            });
        }
        let mut legal_labels: BTreeSet<u32> = task.rois.iter().map(|r| r.label).collect();
        legal_labels.insert(0);
        let m = SubmissionManifest {
            task_id: task.task_id.clone(),
            cases,
            file_pattern: task.file_pattern.clone(),
            legal_labels,
        };
        m.check()?;
        Ok(m)
    }

    pub fn check(&self) -> Result<(), ManifestError> {
        let mut seen = BTreeSet::new();
        for c in &self.cases {
            if !seen.insert(&c.case_id) {
                return Err(ManifestError::Invalid(format!("duplicate case {}", c.case_id)));
            }
        }
        Ok(())
    }

    pub fn file_name(&self, case: &str) -> String {
        self.file_pattern.replace("{case}", case)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseProblem {
    MissingCase { case_id: String },
    Unreadable { case_id: String, reason: String },
    DimensionMismatch { case_id: String, expected: [usize; 3], found: [usize; 3] },
    SpacingMismatch { case_id: String, expected: [f64; 3], found: [f64; 3] },
    IllegalLabels { case_id: String, labels: Vec<u32> },
}

impl fmt::Display for CaseProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseProblem::MissingCase { case_id } => write!(f, "{case_id}: missing"),
            CaseProblem::Unreadable { case_id, reason } => write!(f, "{case_id}: unreadable ({reason})"),
            CaseProblem::DimensionMismatch { case_id, expected, found } => {
                write!(f, "{case_id}: extents {found:?}, expected {expected:?}")
            }
            CaseProblem::SpacingMismatch { case_id, expected, found } => {
                write!(f, "{case_id}: spacing {found:?}, expected {expected:?}")
            }
            CaseProblem::IllegalLabels { case_id, labels } => write!(f, "{case_id}: illegal labels {labels:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_id: String,
    pub ok: bool,
    pub problems: Vec<CaseProblem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub task_id: String,
    pub valid: bool,
    pub failures: usize,
    pub cases: Vec<CaseReport>,
}

impl ValidationReport {
    pub fn problems(&self) -> impl Iterator<Item = &CaseProblem> {
        self.cases.iter().flat_map(|c| c.problems.iter())
    }

    pub fn human(&self) -> String {
        let mut s = format!(
            "{}: {} ({} of {} cases failed)\n",
            self.task_id,
            if self.valid { "valid" } else { "INVALID" },
            self.failures,
            self.cases.len()
        );
        for c in &self.cases {
            if c.ok {
                s.push_str(&format!("  ok    {}\n", c.case_id));
            }
            for p in &c.problems {
                s.push_str(&format!("  FAIL  {p}\n"));
            }
        }
        s
    }
}

fn check_case(dir: &Path, manifest: &SubmissionManifest, expected: &ExpectedCase) -> Vec<CaseProblem> {
    let case_id = expected.case_id.clone();
    let path = dir.join(manifest.file_name(&case_id));
    if !path.is_file() {
        return vec![CaseProblem::MissingCase { case_id }];
    }
    let volume = match load_label_volume(&path) {
        Ok(v) => v,
        Err(e) => {
            return vec![CaseProblem::Unreadable {
                case_id,
                reason: e.to_string(),
            }]
        }
    };
    let mut problems = Vec::new();
    if volume.extents() != expected.extents {
        problems.push(CaseProblem::DimensionMismatch {
            case_id: case_id.clone(),
            expected: expected.extents.as_array(),
            found: volume.extents().as_array(),
        });
    }
    if !volume.spacing().approx_eq(&expected.spacing, SPACING_REL_TOL) {
        problems.push(CaseProblem::SpacingMismatch {
            case_id: case_id.clone(),
            expected: expected.spacing.0,
            found: volume.spacing().0,
        });
    }
    let present: BTreeSet<u32> = volume.labels().iter().copied().collect();
    let illegal: Vec<u32> = present.difference(&manifest.legal_labels).copied().collect();
    if !illegal.is_empty() {
        problems.push(CaseProblem::IllegalLabels { case_id, labels: illegal });
    }
    problems
}

/// Never fails: every problem becomes report content.
pub fn validate_submission(dir: &Path, manifest: &SubmissionManifest) -> ValidationReport {
    let cases: Vec<CaseReport> = manifest
        .cases
        .iter()
        .map(|c| {
            let problems = check_case(dir, manifest, c);
            CaseReport {
                case_id: c.case_id.clone(),
                ok: problems.is_empty(),
                problems,
            }
        })
        .collect();
    let failures = cases.iter().filter(|c| !c.ok).count();
    ValidationReport {
        task_id: manifest.task_id.clone(),
        valid: failures == 0,
        failures,
        cases,
    }
}
