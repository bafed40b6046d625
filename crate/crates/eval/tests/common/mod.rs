#![allow(dead_code)]

pub mod challenge;
pub mod layout;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const BIN: &str = env!("CARGO_BIN_EXE_msd-eval");

/// Runs the binary with logging silenced.
pub fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("RUST_LOG", "off")
        .env_remove("CI")
        .output()
        .expect("spawn msd-eval")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Every file under `root`, keyed by relative path.
pub fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    if root.exists() {
        walk(root, root, &mut out);
    }
    out
}

/// First difference between two trees, if any.
pub fn tree_diff(a: &BTreeMap<PathBuf, Vec<u8>>, b: &BTreeMap<PathBuf, Vec<u8>>) -> Option<String> {
    for k in a.keys().chain(b.keys()) {
        match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) if x == y => {}
            (Some(_), Some(_)) => return Some(format!("{} differs", k.display())),
            (Some(_), None) => return Some(format!("{} only in the first tree", k.display())),
            (None, _) => return Some(format!("{} only in the second tree", k.display())),
        }
    }
    None
}

/// The full evaluate, rank, bootstrap, report sequence; panics on any failure.
pub fn pipeline(manifest: &Path, out: &Path, jobs: usize) {
    let m = manifest.to_str().unwrap();
    let o = out.to_str().unwrap();
    let j = jobs.to_string();
    for args in [
        vec!["evaluate", "--manifest", m, "--out-dir", o, "--jobs", &j],
        vec!["rank", "--manifest", m, "--out-dir", o],
        vec!["bootstrap", "--manifest", m, "--out-dir", o, "--jobs", &j],
        vec!["report", "--manifest", m, "--out-dir", o],
    ] {
        let r = run(&args);
        assert!(r.status.success(), "{args:?} failed: {}", stderr(&r));
    }
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn blessing() -> bool {
    std::env::var_os("BLESS").is_some_and(|v| v == "1")
}
