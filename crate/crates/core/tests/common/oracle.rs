//! Brute-force reference implementations, written straight from the
//! definitions and sharing no code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub type Point = [usize; 3];

/// Foreground voxels as a set, `dims` x-fastest.
pub fn voxel_set(dims: [usize; 3], voxels: &[bool]) -> BTreeSet<Point> {
    let mut s = BTreeSet::new();
    for z in 0..dims[2] {
        for y in 0..dims[1] {
            for x in 0..dims[0] {
                if voxels[x + dims[0] * (y + dims[1] * z)] {
                    s.insert([x, y, z]);
                }
            }
        }
    }
    s
}

pub fn dice(g: &BTreeSet<Point>, p: &BTreeSet<Point>) -> f64 {
    if g.is_empty() && p.is_empty() {
        return 0.0;
    }
    2.0 * g.intersection(p).count() as f64 / (g.len() + p.len()) as f64
}

/// Foreground voxels with a 6-neighbour outside the set (the grid edge counts as outside).
pub fn surface(dims: [usize; 3], set: &BTreeSet<Point>) -> Vec<Point> {
    let mut out = Vec::new();
    for &v in set {
        let mut border = false;
        for axis in 0..3 {
            for step in [-1i64, 1] {
                let c = v[axis] as i64 + step;
                if c < 0 || c >= dims[axis] as i64 {
                    border = true;
                } else {
                    let mut n = v;
                    n[axis] = c as usize;
                    if !set.contains(&n) {
                        border = true;
                    }
                }
            }
        }
        if border {
            out.push(v);
        }
    }
    out
}

pub fn distance(a: Point, b: Point, spacing: [f64; 3]) -> f64 {
    let d = |i: usize| (a[i] as f64 - b[i] as f64) * spacing[i];
    ((d(0) * d(0) + d(1) * d(1)) + d(2) * d(2)).sqrt()
}

fn within(from: &[Point], to: &[Point], spacing: [f64; 3], tol: f64) -> usize {
    from.iter()
        .filter(|&&a| to.iter().map(|&b| distance(a, b, spacing)).fold(f64::INFINITY, f64::min) <= tol)
        .count()
}

pub fn nsd(dims: [usize; 3], spacing: [f64; 3], g: &BTreeSet<Point>, p: &BTreeSet<Point>, tol: f64) -> f64 {
    let sg = surface(dims, g);
    let sp = surface(dims, p);
    if sg.is_empty() || sp.is_empty() {
        return 0.0;
    }
    (within(&sg, &sp, spacing, tol) + within(&sp, &sg, spacing, tol)) as f64 / (sg.len() + sp.len()) as f64
}

/// Mid-ranks, 1-based, by comparing every pair.
pub fn midranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&x| {
            let below = v.iter().filter(|&&y| y < x).count() as f64;
            let equal = v.iter().filter(|&&y| y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

/// One-sided signed-rank p-value by enumerating every sign assignment.
pub fn wilcoxon_p(diffs: &[f64]) -> f64 {
    let nz: Vec<f64> = diffs.iter().copied().filter(|&d| d != 0.0).collect();
    if nz.is_empty() {
        return 1.0;
    }
    let ranks = midranks(&nz.iter().map(|d| d.abs()).collect::<Vec<_>>());
    let observed: f64 = nz.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let n = nz.len();
    let mut hits = 0u64;
    for mask in 0u64..(1 << n) {
        let w: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if w >= observed - 1e-9 {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

/// Kendall tau-b over all pairs; `None` on a total tie.
pub fn tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mut c, mut d, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    let n = x.len();
    for i in 0..n {
        for j in i + 1..n {
            let a = (x[i] - x[j]).signum() * ((x[i] != x[j]) as i32 as f64);
            let b = (y[i] - y[j]).signum() * ((y[i] != y[j]) as i32 as f64);
            if a == 0.0 && b == 0.0 {
                continue;
            } else if a == 0.0 {
                tx += 1;
            } else if b == 0.0 {
                ty += 1;
            } else if a == b {
                c += 1;
            } else {
                d += 1;
            }
        }
    }
    let denom = (((c + d + tx) * (c + d + ty)) as f64).sqrt();
    if c + d + tx == 0 || c + d + ty == 0 {
        return None;
    }
    Some((c - d) as f64 / denom)
}
