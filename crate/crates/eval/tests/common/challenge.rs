//! A small synthetic two-phase challenge with a planted algorithm ordering.
//!
//! `alpha` is best everywhere, `delta` worst, `bravo` and `charlie` close and
//! trading places case by case.

use std::fs;
use std::path::Path;

use msd_core::volume::{Extents, LabelVolume, Spacing};
use msd_eval::nifti::{gzip, write_synthetic, Datatype, Endian};

pub const ALGORITHMS: [&str; 4] = ["alpha", "bravo", "charlie", "delta"];
pub const EXTENTS: Extents = Extents { nx: 14, ny: 12, nz: 8 };
pub const SPACING: [f64; 3] = [0.75, 0.75, 2.0];
pub const N_CASES: usize = 8;

pub struct TaskDef {
    pub phase: &'static str,
    pub id: &'static str,
    pub prefix: &'static str,
    /// `(roi_id, label, nsd tolerance)`
    pub rois: &'static [(&'static str, u32, f64)],
}

pub const TASKS: [TaskDef; 3] = [
    TaskDef { phase: "development", id: "Task01_Organ", prefix: "organ", rois: &[("organ", 1, 1.0), ("lesion", 2, 2.0)] },
    TaskDef { phase: "development", id: "Task02_Node", prefix: "node", rois: &[("node", 1, 1.0)] },
    TaskDef { phase: "mystery", id: "Task03_Mass", prefix: "mass", rois: &[("mass", 1, 1.5)] },
];

pub fn case_id(task: &TaskDef, c: usize) -> String {
    format!("{}_{:03}", task.prefix, c + 1)
}

#[derive(Clone, Copy)]
struct Blob {
    center: [f64; 3],
    radii: [f64; 3],
}

impl Blob {
    fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        let p = [x as f64, y as f64, z as f64];
        (0..3)
            .map(|i| ((p[i] - self.center[i]) * SPACING[i] / self.radii[i]).powi(2))
            .sum::<f64>()
            <= 1.0
    }

    fn shifted(self, dx_mm: f64, scale: f64) -> Blob {
        Blob {
            center: [self.center[0] + dx_mm / SPACING[0], self.center[1], self.center[2]],
            radii: self.radii.map(|r| r * scale),
        }
    }
}

/// Displacement in mm of algorithm `a` on case `c`.
fn displacement(a: usize, c: usize) -> f64 {
    let jitter = ((c * 7 + a * 3) % 5) as f64 / 5.0 - 0.4;
    match a {
        0 => 0.1 * jitter,
        1 => 0.9 + 0.5 * jitter,
        2 => 1.1 - 0.5 * jitter,
        _ => 2.4 + 0.2 * jitter,
    }
}

fn paint(blobs: &[(u32, Option<Blob>)]) -> LabelVolume {
    let mut v = LabelVolume::filled(EXTENTS, Spacing(SPACING), 0).unwrap();
    for z in 0..EXTENTS.nz {
        for y in 0..EXTENTS.ny {
            for x in 0..EXTENTS.nx {
                for (label, blob) in blobs {
                    if blob.is_some_and(|b| b.contains(x, y, z)) {
                        v.set(x, y, z, *label);
                    }
                }
            }
        }
    }
    v
}

/// Ground-truth blobs per ROI label for one case (`None` = ROI absent).
fn truth(task: usize, c: usize) -> Vec<(u32, Option<Blob>)> {
    let wobble = (c % 3) as f64;
    let main = Blob {
        center: [6.5 + 0.3 * wobble, 5.5, 3.5],
        radii: [3.6 + 0.3 * wobble, 3.0, 4.5],
    };
    match task {
        0 => vec![
            (1, Some(main)),
            (2, Some(Blob { center: [6.0 + 0.5 * wobble, 5.0, 3.5], radii: [1.6, 1.4, 2.1] })),
        ],
        // the last node case has no node at all
        1 => vec![(1, (c + 1 < N_CASES).then_some(Blob { radii: [2.4, 2.1, 3.2], ..main }))],
        _ => vec![(1, Some(Blob { radii: [4.2, 3.4, 5.0], ..main }))],
    }
}

fn prediction(task: usize, a: usize, c: usize) -> Vec<(u32, Option<Blob>)> {
    truth(task, c)
        .into_iter()
        .map(|(label, blob)| {
            let blob = match (task, label, blob) {
                // delta misses the lesion on the first case
                (0, 2, _) if a == 3 && c == 0 => None,
                // on the empty node case only charlie and delta hallucinate a node
                (1, _, None) if a >= 2 => Some(Blob { center: [6.5, 5.5, 3.5], radii: [1.5, 1.5, 2.0] }),
                (_, _, Some(b)) => Some(b.shifted(displacement(a, c), 1.0 - 0.03 * a as f64)),
                (_, _, None) => None,
            };
            (label, blob)
        })
        .collect()
}

fn write_volume(path: &Path, v: &LabelVolume) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, gzip(&write_synthetic(v, Datatype::Uint8, Endian::Little).unwrap())).unwrap();
}

pub fn manifest_text(n_samples: usize, seed: u64) -> String {
    let mut s = format!(
        "[ranking]\nalpha = 0.05\nvariants = [\"significance\", \"mean_then_rank\", \"median_then_rank\", \"rank_then_mean\"]\n\n[bootstrap]\nn_samples = {n_samples}\nseed = {seed}\n"
    );
    for phase in ["development", "mystery"] {
        s.push_str(&format!("\n[[phases]]\nname = \"{phase}\"\n"));
        for t in TASKS.iter().filter(|t| t.phase == phase) {
            let cases: Vec<String> = (0..N_CASES).map(|c| format!("\"{}\"", case_id(t, c))).collect();
            let rois: Vec<String> = t
                .rois
                .iter()
                .map(|(id, label, tol)| format!("{{ roi_id = \"{id}\", label = {label}, nsd_tolerance_mm = {tol:.1} }}"))
                .collect();
            s.push_str(&format!(
                "\n[[phases.tasks]]\ntask_id = \"{}\"\ngt_dir = \"gt/{}\"\ncases = [{}]\nrois = [{}]\n",
                t.id,
                t.id,
                cases.join(", "),
                rois.join(", ")
            ));
        }
    }
    for a in ALGORITHMS {
        let preds: Vec<String> = TASKS.iter().map(|t| format!("{} = \"pred/{a}/{}\"", t.id, t.id)).collect();
        s.push_str(&format!("\n[[algorithms]]\nname = \"{a}\"\npredictions = {{ {} }}\n", preds.join(", ")));
    }
    s
}

/// Writes manifest and volumes under `dir`.
pub fn write_challenge(dir: &Path, n_samples: usize, seed: u64) {
    fs::create_dir_all(dir).unwrap();
    fs::write(dir.join("manifest.toml"), manifest_text(n_samples, seed)).unwrap();
    for (ti, t) in TASKS.iter().enumerate() {
        for c in 0..N_CASES {
            let case = case_id(t, c);
            write_volume(&dir.join("gt").join(t.id).join(format!("{case}.nii.gz")), &paint(&truth(ti, c)));
            for (a, name) in ALGORITHMS.iter().enumerate() {
                let path = dir.join("pred").join(name).join(t.id).join(format!("{case}.nii.gz"));
                write_volume(&path, &paint(&prediction(ti, a, c)));
            }
        }
    }
}
