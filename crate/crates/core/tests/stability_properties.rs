mod common;

use common::oracle;
use msd_core::ranking::{CaseMetricTable, RankLevel, RankingTable, SignificanceTaskRanker};
use msd_core::stability::{bootstrap_rankings, kendall_tau, summarize, tau_b, BootstrapConfig};
use proptest::prelude::*;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn ranking(ranks: &[f64]) -> RankingTable {
    RankingTable::from_scores(RankLevel::Task, &names("a", ranks.len()), ranks.to_vec(), false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tau_b_matches_pair_enumeration(pairs in proptest::collection::vec((0u8..4, 0u8..4), 2..15)) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
        let got = tau_b(&x, &y);
        let want = oracle::tau_b(&x, &y);
        match (got, want) {
            (Some(g), Some(w)) => prop_assert!((g - w).abs() <= 1e-12, "{g} vs {w}"),
            (None, None) => {}
            other => prop_assert!(false, "{other:?}"),
        }
        if let Some(t) = got {
            prop_assert!((-1.0..=1.0).contains(&t));
        }
    }

    #[test]
    fn summaries_conserve_frequency(seed in any::<u64>()) {
        let t = CaseMetricTable::from_fn("t", names("a", 4), names("c", 12), names("r", 1), |a, c, _, m| {
            ((a * 3 + (c * 7 + m as usize) % 11) as f64 / 20.0).min(1.0)
        }).unwrap();
        let ranker = SignificanceTaskRanker { alpha: 0.05 };
        let cfg = BootstrapConfig { n_samples: 30, seed };
        let samples = bootstrap_rankings(&t, &ranker, &cfg).unwrap();
        let original = msd_core::ranking::task_significance_ranking(&t, 0.05).unwrap().task;
        let s = summarize("t", &original, &samples).unwrap();
        for row in &s.rank_frequency {
            prop_assert_eq!(row.total(), 30);
        }
        prop_assert!(s.tau_q1 <= s.tau_median && s.tau_median <= s.tau_q3);
        prop_assert!((-1.0..=1.0).contains(&s.tau_q1) && (-1.0..=1.0).contains(&s.tau_q3));
        prop_assert_eq!(bootstrap_rankings(&t, &ranker, &cfg).unwrap(), samples);
    }
}

#[test]
fn tau_endpoints() {
    let a = ranking(&[1.0, 2.0, 3.0, 4.0, 5.0]);
    let rev = ranking(&[5.0, 4.0, 3.0, 2.0, 1.0]);
    assert_eq!(kendall_tau(&a, &a).unwrap(), 1.0);
    assert_eq!(kendall_tau(&a, &rev).unwrap(), -1.0);
}

#[test]
fn rank_one_frequency_grows_with_dominance() {
    let ranker = SignificanceTaskRanker { alpha: 0.05 };
    let cfg = BootstrapConfig { n_samples: 100, seed: 3 };
    let mut last = 0;
    for gap in [0u32, 1, 2, 4, 8, 16] {
        let t = CaseMetricTable::from_fn("t", names("a", 4), names("c", 15), names("r", 1), |a, c, _, _| {
            let base = ((c * 13 + a * 5) % 17) as f64 / 40.0;
            if a == 0 { base + gap as f64 / 40.0 } else { base }
        })
        .unwrap();
        let original = msd_core::ranking::task_significance_ranking(&t, 0.05).unwrap().task;
        let s = summarize("t", &original, &bootstrap_rankings(&t, &ranker, &cfg).unwrap()).unwrap();
        let first = s.rank_frequency.iter().find(|r| r.algorithm == "a0").unwrap().count_at(1.0);
        assert!(first >= last, "gap {gap}: {first} < {last}");
        last = first;
    }
    assert_eq!(last, 100);
}
