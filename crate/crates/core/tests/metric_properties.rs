mod common;

use common::oracle;
use msd_core::metrics::{dice, nsd};
use msd_core::volume::{Extents, Mask, Spacing};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Pair {
    dims: [usize; 3],
    spacing: [f64; 3],
    g: Vec<bool>,
    p: Vec<bool>,
}

impl Pair {
    fn masks(&self, spacing: [f64; 3]) -> (Mask, Mask) {
        let e = Extents { nx: self.dims[0], ny: self.dims[1], nz: self.dims[2] };
        let s = Spacing(spacing);
        (Mask::new(e, s, self.g.clone()).unwrap(), Mask::new(e, s, self.p.clone()).unwrap())
    }
}

/// Random masks, with the prediction often a perturbed copy of the truth.
fn pair(max: usize) -> impl Strategy<Value = Pair> {
    (
        [1..=max, 1..=max, 1..=max],
        [0.25f64..3.0, 0.25f64..3.0, 0.25f64..3.0],
        0.05f64..0.9,
    )
        .prop_flat_map(|(dims, spacing, density)| {
            let n = dims[0] * dims[1] * dims[2];
            (
                Just(dims),
                Just(spacing),
                proptest::collection::vec(proptest::bool::weighted(density), n),
                proptest::collection::vec(proptest::bool::weighted(0.15), n),
                any::<bool>(),
            )
                .prop_map(|(dims, spacing, g, flips, correlated)| {
                    let p = if correlated {
                        g.iter().zip(&flips).map(|(a, f)| a ^ f).collect()
                    } else {
                        flips.iter().zip(&g).map(|(f, a)| *f || (*a && !f)).map(|v| !v).collect()
                    };
                    Pair { dims, spacing, g, p }
                })
        })
}

const TOLS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 4.5];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_brute_force(v in pair(9), tol in prop::sample::select(TOLS.to_vec())) {
        let (g, p) = v.masks(v.spacing);
        let gs = oracle::voxel_set(v.dims, &v.g);
        let ps = oracle::voxel_set(v.dims, &v.p);
        prop_assert_eq!(dice(&g, &p).unwrap().value, oracle::dice(&gs, &ps));
        let got = nsd(&g, &p, tol).unwrap().value;
        let want = oracle::nsd(v.dims, v.spacing, &gs, &ps, tol);
        prop_assert!((got - want).abs() <= 1e-9, "nsd {got} vs oracle {want}");
    }

    #[test]
    fn symmetric_and_bounded(v in pair(8), tol in 0.0f64..5.0) {
        let (g, p) = v.masks(v.spacing);
        let d = dice(&g, &p).unwrap().value;
        let n = nsd(&g, &p, tol).unwrap().value;
        prop_assert_eq!(d, dice(&p, &g).unwrap().value);
        prop_assert_eq!(n, nsd(&p, &g, tol).unwrap().value);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!((0.0..=1.0).contains(&n));
    }

    #[test]
    fn nsd_monotone_in_tolerance(v in pair(8), t1 in 0.0f64..4.0, extra in 0.0f64..4.0) {
        let (g, p) = v.masks(v.spacing);
        prop_assert!(nsd(&g, &p, t1).unwrap().value <= nsd(&g, &p, t1 + extra).unwrap().value);
    }

    // Power-of-two factors keep every product exact.
    #[test]
    fn spacing_covariance(v in pair(8), tol in 0.0f64..4.0, k in -3i32..=3) {
        let f = 2f64.powi(k);
        let (g, p) = v.masks(v.spacing);
        let scaled = [v.spacing[0] * f, v.spacing[1] * f, v.spacing[2] * f];
        let (g2, p2) = v.masks(scaled);
        prop_assert_eq!(nsd(&g, &p, tol).unwrap().value, nsd(&g2, &p2, tol * f).unwrap().value);
    }

    #[test]
    fn self_comparison_is_perfect(v in pair(8)) {
        let (g, _) = v.masks(v.spacing);
        prop_assume!(!g.is_empty());
        prop_assert_eq!(dice(&g, &g).unwrap().value, 1.0);
        prop_assert_eq!(nsd(&g, &g, 0.0).unwrap().value, 1.0);
    }
}

#[test]
fn full_extent_oracle_sweep() {
    // a few volumes at the maximum extent, anisotropic
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(6));
    runner
        .run(&pair(16), |v| {
            let (g, p) = v.masks(v.spacing);
            let gs = oracle::voxel_set(v.dims, &v.g);
            let ps = oracle::voxel_set(v.dims, &v.p);
            assert_eq!(dice(&g, &p).unwrap().value, oracle::dice(&gs, &ps));
            let got = nsd(&g, &p, 1.0).unwrap().value;
            let want = oracle::nsd(v.dims, v.spacing, &gs, &ps, 1.0);
            assert!((got - want).abs() <= 1e-9);
            Ok(())
        })
        .unwrap();
}
