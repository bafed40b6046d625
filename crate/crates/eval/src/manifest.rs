//! Challenge manifest (TOML).
//!
//! ```toml
//! [ranking]
//! alpha = 0.05
//! variants = ["significance", "mean_then_rank", "median_then_rank", "rank_then_mean"]
//!
//! [bootstrap]
//! n_samples = 1000
//! seed = 42
//!
//! [[phases]]
//! name = "development"
//!
//! [[phases.tasks]]
//! task_id = "Task01_Liver"
//! gt_dir = "gt/Task01_Liver"
//! file_pattern = "{case}.nii.gz"
//! cases = ["liver_001", "liver_002"]
//! rois = [
//!   { roi_id = "liver", label = 1 },
//!   { roi_id = "tumour", label = 2, nsd_tolerance_mm = 2.0 },
//! ]
//!
//! [[algorithms]]
//! name = "team_a"
//! predictions = { Task01_Liver = "pred/team_a/Task01_Liver" }
//! ```
//!
//! Relative paths resolve against the manifest's directory.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use msd_core::metrics::{RoiSpec, DEFAULT_NSD_TOLERANCE_MM};
use msd_core::ranking::{Phase, RankingVariant, TaskSpec, DEFAULT_ALPHA};
use msd_core::stability::DEFAULT_SAMPLES;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("reading {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("parsing {0}: {1}")]
    Parse(PathBuf, toml::de::Error),
    #[error("invalid manifest: {0}")]
    Invalid(String),
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_pattern() -> String {
    "{case}.nii.gz".into()
}

fn default_tolerance() -> f64 {
    DEFAULT_NSD_TOLERANCE_MM
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankingConfig {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub variants: Vec<String>,
}

impl Default for RankingConfig {
    fn default() -> Self {
        RankingConfig {
            alpha: DEFAULT_ALPHA,
            variants: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BootstrapSection {
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    pub seed: Option<u64>,
}

impl Default for BootstrapSection {
    fn default() -> Self {
        BootstrapSection {
            n_samples: DEFAULT_SAMPLES,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoiEntry {
    pub roi_id: String,
    pub label: u32,
    #[serde(default = "default_tolerance")]
    pub nsd_tolerance_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskEntry {
    pub task_id: String,
    pub gt_dir: PathBuf,
    #[serde(default = "default_pattern")]
    pub file_pattern: String,
    pub cases: Vec<String>,
    pub rois: Vec<RoiEntry>,
}

impl TaskEntry {
    pub fn file_name(&self, case: &str) -> String {
        self.file_pattern.replace("{case}", case)
    }

    pub fn roi_ids(&self) -> Vec<String> {
        self.rois.iter().map(|r| r.roi_id.clone()).collect()
    }

    pub fn roi_specs(&self) -> Vec<RoiSpec> {
        self.rois
            .iter()
            .map(|r| RoiSpec {
                roi_id: r.roi_id.clone(),
                label_value: r.label,
                nsd_tolerance_mm: r.nsd_tolerance_mm,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseEntry {
    pub name: Phase,
    pub tasks: Vec<TaskEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmEntry {
    pub name: String,
    pub predictions: BTreeMap<String, PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChallengeManifest {
    #[serde(default)]
    pub ranking: RankingConfig,
    #[serde(default)]
    pub bootstrap: BootstrapSection,
    pub phases: Vec<PhaseEntry>,
    pub algorithms: Vec<AlgorithmEntry>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn invalid(msg: impl Into<String>) -> ManifestError {
    ManifestError::Invalid(msg.into())
}

impl ChallengeManifest {
    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let text = fs::read_to_string(path).map_err(|e| ManifestError::Io(path.to_path_buf(), e))?;
        let mut m: ChallengeManifest = toml::from_str(&text).map_err(|e| ManifestError::Parse(path.to_path_buf(), e))?;
        m.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        m.validate()?;
        Ok(m)
    }

    pub fn from_str_at(text: &str, base_dir: &Path) -> Result<Self, ManifestError> {
        let mut m: ChallengeManifest =
            toml::from_str(text).map_err(|e| ManifestError::Parse(base_dir.to_path_buf(), e))?;
        m.base_dir = base_dir.to_path_buf();
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), ManifestError> {
        let alpha = self.ranking.alpha;
        if !(alpha > 0.0 && alpha <= 0.5) {
            return Err(invalid(format!("alpha {alpha} must lie in (0, 0.5]")));
        }
        self.variants()?;
        if self.bootstrap.n_samples == 0 {
            return Err(invalid("bootstrap.n_samples must be at least 1"));
        }
        if self.phases.is_empty() {
            return Err(invalid("no phases"));
        }
        if self.algorithms.is_empty() {
            return Err(invalid("no algorithms"));
        }
        let mut phases = BTreeSet::new();
        let mut task_ids = BTreeSet::new();
        for phase in &self.phases {
            if !phases.insert(phase.name) {
                return Err(invalid(format!("phase {} listed twice", phase.name)));
            }
            if phase.tasks.is_empty() {
                return Err(invalid(format!("phase {} has no tasks", phase.name)));
            }
            for task in &phase.tasks {
                if !task_ids.insert(task.task_id.as_str()) {
                    return Err(invalid(format!("task {} listed twice", task.task_id)));
                }
                validate_task(task)?;
            }
        }
        let mut names = BTreeSet::new();
        for alg in &self.algorithms {
            if !names.insert(alg.name.as_str()) {
                return Err(invalid(format!("algorithm {} listed twice", alg.name)));
            }
            for task in &task_ids {
                if !alg.predictions.contains_key(*task) {
                    return Err(invalid(format!("algorithm {} has no predictions for task {task}", alg.name)));
                }
            }
        }
        Ok(())
    }

    pub fn variants(&self) -> Result<Vec<RankingVariant>, ManifestError> {
        self.ranking
            .variants
            .iter()
            .map(|v| v.parse::<RankingVariant>().map_err(|e| invalid(e.to_string())))
            .collect()
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn algorithm_names(&self) -> Vec<String> {
        self.algorithms.iter().map(|a| a.name.clone()).collect()
    }

    pub fn tasks(&self) -> impl Iterator<Item = (Phase, &TaskEntry)> {
        self.phases
            .iter()
            .flat_map(|p| p.tasks.iter().map(move |t| (p.name, t)))
    }

    pub fn task(&self, task_id: &str) -> Option<(Phase, &TaskEntry)> {
        self.tasks().find(|(_, t)| t.task_id == task_id)
    }

    pub fn phase(&self, phase: Phase) -> Option<&PhaseEntry> {
        self.phases.iter().find(|p| p.name == phase)
    }

    pub fn gt_path(&self, task: &TaskEntry, case: &str) -> PathBuf {
        self.resolve(&task.gt_dir).join(task.file_name(case))
    }

    pub fn prediction_path(&self, algorithm: &AlgorithmEntry, task: &TaskEntry, case: &str) -> PathBuf {
        let dir = &algorithm.predictions[&task.task_id];
        self.resolve(dir).join(task.file_name(case))
    }

    pub fn task_spec(&self, phase: Phase, task: &TaskEntry) -> TaskSpec {
        TaskSpec {
            task_id: task.task_id.clone(),
            rois: task.roi_specs(),
            case_ids: task.cases.clone(),
            phase,
        }
    }
}

fn validate_task(task: &TaskEntry) -> Result<(), ManifestError> {
    let id = &task.task_id;
    if task.rois.is_empty() {
        return Err(invalid(format!("task {id} lists no ROI")));
    }
    if task.rois.len() > 3 {
        log::warn!("task {id} has {} ROIs; decathlon tasks have 1 to 3", task.rois.len());
    }
    if task.cases.is_empty() {
        return Err(invalid(format!("task {id} lists no cases")));
    }
    if !task.file_pattern.contains("{case}") {
        return Err(invalid(format!("task {id}: file_pattern must contain {{case}}")));
    }
    let mut cases = BTreeSet::new();
    for c in &task.cases {
        if !cases.insert(c.as_str()) {
            return Err(invalid(format!("task {id}: case {c} listed twice")));
        }
    }
    let mut labels = BTreeSet::new();
    let mut roi_ids = BTreeSet::new();
    for roi in task.roi_specs() {
        roi.validate().map_err(|e| invalid(format!("task {id}: {e}")))?;
        if !labels.insert(roi.label_value) || !roi_ids.insert(roi.roi_id.clone()) {
            return Err(invalid(format!("task {id}: duplicate ROI {} / label {}", roi.roi_id, roi.label_value)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[ranking]
alpha = 0.05
variants = ["significance", "mean_then_rank"]

[bootstrap]
n_samples = 200
seed = 3

[[phases]]
name = "development"

[[phases.tasks]]
task_id = "T1"
gt_dir = "gt/T1"
cases = ["a", "b"]
rois = [{ roi_id = "organ", label = 1 }, { roi_id = "lesion", label = 2, nsd_tolerance_mm = 2.5 }]

[[algorithms]]
name = "x"
predictions = { T1 = "pred/x" }
"#;

    #[test]
    fn parses_sample() {
        let m = ChallengeManifest::from_str_at(SAMPLE, Path::new("/base")).unwrap();
        let (phase, t) = m.task("T1").unwrap();
        assert_eq!(phase, Phase::Development);
        assert_eq!(t.rois[0].nsd_tolerance_mm, 1.0);
        assert_eq!(t.rois[1].nsd_tolerance_mm, 2.5);
        assert_eq!(m.gt_path(t, "a"), PathBuf::from("/base/gt/T1/a.nii.gz"));
        assert_eq!(m.prediction_path(&m.algorithms[0], t, "b"), PathBuf::from("/base/pred/x/b.nii.gz"));
        assert_eq!(m.variants().unwrap(), vec![RankingVariant::Significance, RankingVariant::MeanThenRank]);
        assert_eq!(m.bootstrap.seed, Some(3));
    }

    #[test]
    fn rejects_bad_alpha_and_variants() {
        let bad = SAMPLE.replace("alpha = 0.05", "alpha = 0.7");
        assert!(matches!(ChallengeManifest::from_str_at(&bad, Path::new(".")), Err(ManifestError::Invalid(_))));
        let bad = SAMPLE.replace("\"mean_then_rank\"", "\"coin_flip\"");
        assert!(ChallengeManifest::from_str_at(&bad, Path::new(".")).is_err());
    }

    #[test]
    fn rejects_missing_predictions_and_duplicates() {
        let bad = SAMPLE.replace("predictions = { T1 = \"pred/x\" }", "predictions = {}");
        assert!(ChallengeManifest::from_str_at(&bad, Path::new(".")).is_err());
        let bad = SAMPLE.replace("cases = [\"a\", \"b\"]", "cases = [\"a\", \"a\"]");
        assert!(ChallengeManifest::from_str_at(&bad, Path::new(".")).is_err());
        let bad = SAMPLE.replace("label = 2", "label = 1");
        assert!(ChallengeManifest::from_str_at(&bad, Path::new(".")).is_err());
        let bad = SAMPLE.replace("label = 2", "label = 0");
        assert!(ChallengeManifest::from_str_at(&bad, Path::new(".")).is_err());
    }
}
