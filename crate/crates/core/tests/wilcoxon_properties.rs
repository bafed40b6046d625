mod common;

use common::oracle;
use msd_core::wilcoxon::{wilcoxon_one_sided, PValueMethod};
use msd_core::wilcoxon::{exact_upper_tail, normal_upper_tail, signed_ranks};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

/// Differences on a coarse grid so ties and zeros are frequent.
fn diffs(lo: usize, hi: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec((-6i32..=6).prop_map(|k| k as f64 / 8.0), lo..=hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn exact_matches_enumeration(d in diffs(1, 12)) {
        let r = wilcoxon_one_sided(&d, 0.05).unwrap();
        let want = oracle::wilcoxon_p(&d);
        prop_assert!((r.p_value - want).abs() <= 1e-12, "{} vs {want}", r.p_value);
    }

    #[test]
    fn at_most_one_direction_significant(d in diffs(1, 30), alpha in 0.001f64..0.499) {
        let neg: Vec<f64> = d.iter().map(|x| -x).collect();
        let a = wilcoxon_one_sided(&d, alpha).unwrap();
        let b = wilcoxon_one_sided(&neg, alpha).unwrap();
        prop_assert!(!(a.significant && b.significant));
    }

    #[test]
    fn p_value_is_a_probability(d in diffs(1, 40)) {
        let p = wilcoxon_one_sided(&d, 0.05).unwrap().p_value;
        prop_assert!((0.0..=1.0).contains(&p));
    }
}

#[test]
fn all_positive_ten() {
    let d: Vec<f64> = (1..=10).map(f64::from).collect();
    let r = wilcoxon_one_sided(&d, 0.05).unwrap();
    assert_eq!(r.p_value, 1.0 / 1024.0);
    assert_eq!(r.method, PValueMethod::Exact);
}

#[test]
fn exact_and_normal_agree_near_the_cutoff() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = proptest::collection::vec(-1.0f64..1.0, 20..=25)
        .prop_map(|v| v.into_iter().map(|x| x + 0.1).collect::<Vec<f64>>());
    let (mut total, mut disagree) = (0, Vec::new());
    for _ in 0..2000 {
        let d = strategy.new_tree(&mut runner).unwrap().current();
        let (ranks, positive) = signed_ranks(&d);
        let w: f64 = ranks.iter().zip(&positive).filter(|(_, p)| **p).map(|(r, _)| r).sum();
        let exact = exact_upper_tail(&ranks, w);
        let normal = normal_upper_tail(&ranks, w);
        total += 1;
        if (exact < 0.05) != (normal < 0.05) {
            disagree.push((d.len(), exact, normal));
        }
    }
    for (n, e, a) in &disagree {
        println!("decision differs: n={n} exact={e:.5} normal={a:.5}");
    }
    assert!(disagree.len() * 100 <= total, "{} of {total} disagree", disagree.len());
}
