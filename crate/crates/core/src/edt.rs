//! Exact Euclidean distance transform on anisotropic 3D grids.
//!
//! Separable lower-envelope-of-parabolas method (Felzenszwalb & Huttenlocher),
//! one pass per axis with the squared voxel spacing as parabola weight. Each
//! output is the squared distance `((dx*sx)^2 + (dy*sy)^2) + (dz*sz)^2` to
//! some nearest feature voxel, evaluated in that order.

use alloc::vec;
use alloc::vec::Vec;

use crate::volume::{Extents, Spacing};

/// Squared physical distance from every voxel to the nearest `true` voxel.
///
/// Voxels are `f64::INFINITY` when the grid holds no feature at all.
pub fn squared_edt(features: &[bool], extents: Extents, spacing: Spacing) -> Vec<f64> {
    assert_eq!(features.len(), extents.len(), "feature grid does not match extents");
    let mut field: Vec<f64> = features
        .iter()
        .map(|&f| if f { 0.0 } else { f64::INFINITY })
        .collect();
    if field.is_empty() {
        return field;
    }
    let [nx, ny, nz] = extents.as_array();
    let mut pass = LinePass::new(nx.max(ny).max(nz));

    // x lines are contiguous
    for line in field.chunks_exact_mut(nx) {
        pass.run(line, spacing.0[0]);
    }
    // y lines, stride nx
    let mut buf = vec![0.0; ny.max(nz)];
    for z in 0..nz {
        for x in 0..nx {
            let base = x + nx * ny * z;
            for y in 0..ny {
                buf[y] = field[base + nx * y];
            }
            pass.run(&mut buf[..ny], spacing.0[1]);
            for y in 0..ny {
                field[base + nx * y] = buf[y];
            }
        }
    }
    // z lines, stride nx*ny
    let plane = nx * ny;
    for i in 0..plane {
        for z in 0..nz {
            buf[z] = field[i + plane * z];
        }
        pass.run(&mut buf[..nz], spacing.0[2]);
        for z in 0..nz {
            field[i + plane * z] = buf[z];
        }
    }
    field
}

/// Scratch space for the 1D lower envelope.
struct LinePass {
    input: Vec<f64>,
    vertices: Vec<usize>,
    bounds: Vec<f64>,
}

impl LinePass {
    fn new(max_len: usize) -> Self {
        LinePass {
            input: vec![0.0; max_len],
            vertices: vec![0; max_len],
            bounds: vec![0.0; max_len + 1],
        }
    }

    /// In-place 1D transform: `line[p] = min_q line[q] + ((p - q) * step)^2`.
    fn run(&mut self, line: &mut [f64], step: f64) {
        let n = line.len();
        let f = &mut self.input[..n];
        f.copy_from_slice(line);
        let weight = step * step;
        let v = &mut self.vertices;
        let z = &mut self.bounds;

        let mut k: usize = 0;
        let mut seeded = false;
        for q in 0..n {
            if f[q] == f64::INFINITY {
                continue;
            }
            if !seeded {
                v[0] = q;
                z[0] = f64::NEG_INFINITY;
                z[1] = f64::INFINITY;
                seeded = true;
                continue;
            }
            let qf = q as f64;
            loop {
                let p = v[k];
                let pf = p as f64;
                let s = ((f[q] + weight * qf * qf) - (f[p] + weight * pf * pf))
                    / (2.0 * weight * (qf - pf));
                if s <= z[k] {
                    // z[0] is -inf so k never underflows here
                    k -= 1;
                    continue;
                }
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
        if !seeded {
            return;
        }
        k = 0;
        for (p, out) in line.iter_mut().enumerate() {
            let pf = p as f64;
            while z[k + 1] < pf {
                k += 1;
            }
            let d = (p as f64 - v[k] as f64) * step;
            *out = f[v[k]] + d * d;
        }
    }
}
