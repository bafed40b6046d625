mod common;

use common::fixture_dir;
use msd_core::ranking::{RankEntry, RankLevel, RankingTable};
use msd_eval::plots::line_plot;
use msd_eval::tables::{read_json, write_json, Leaderboard};

fn count_class(doc: &roxmltree::Document, class: &str) -> usize {
    doc.descendants().filter(|n| n.attribute("class") == Some(class)).count()
}

fn ranking(order: &[&str]) -> RankingTable {
    RankingTable {
        level: RankLevel::Task,
        entries: order
            .iter()
            .enumerate()
            .map(|(i, a)| RankEntry { algorithm: (*a).into(), score: (i + 1) as f64, rank: (i + 1) as f64 })
            .collect(),
    }
}

#[test]
fn golden_svgs_are_well_formed_and_countable() {
    let report = fixture_dir().join("golden").join("report");
    let mut families = [0usize; 4];
    for entry in std::fs::read_dir(&report).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "svg") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let rows = std::fs::read_to_string(path.with_extension("csv")).unwrap().lines().count() - 1;
        let name = path.file_name().unwrap().to_str().unwrap();
        let (family, drawn) = if name.starts_with("dsc_") {
            (0, count_class(&doc, "box"))
        } else if name == "rank_boxplot.svg" {
            (1, count_class(&doc, "box"))
        } else if name.starts_with("ranking_methods_") {
            (2, count_class(&doc, "rank-line") * 4)
        } else {
            (3, count_class(&doc, "bar"))
        };
        assert_eq!(drawn, rows, "{name}");
        families[family] += 1;
    }
    assert_eq!(families, [3, 1, 3, 2]);
}

#[test]
fn stacked_bars_carry_every_sample() {
    let text = std::fs::read_to_string(fixture_dir().join("golden/report/rank_frequency_development.svg")).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let mut per_task_alg = std::collections::BTreeMap::<(String, String), usize>::new();
    for bar in doc.descendants().filter(|n| n.attribute("class") == Some("bar")) {
        let key = (bar.attribute("data-task").unwrap().to_string(), bar.attribute("data-algorithm").unwrap().to_string());
        *per_task_alg.entry(key).or_default() += bar.attribute("data-count").unwrap().parse::<usize>().unwrap();
    }
    assert_eq!(per_task_alg.len(), 2 * 4);
    assert!(per_task_alg.values().all(|&n| n == 200));
}

fn segments(svg: &str) -> Vec<Vec<(f64, f64)>> {
    let doc = roxmltree::Document::parse(svg).unwrap();
    doc.descendants()
        .filter(|n| n.attribute("class") == Some("rank-line"))
        .map(|n| {
            n.attribute("points")
                .unwrap()
                .split(' ')
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect()
        })
        .collect()
}

#[test]
fn planted_swap_crosses_exactly_two_lines() {
    let base = ranking(&["a", "b", "c", "d"]);
    let swapped = ranking(&["a", "c", "b", "d"]);
    let plot = line_plot("T", &[("x".into(), base.clone()), ("y".into(), swapped), ("z".into(), base)]).unwrap();
    let lines = segments(&plot.svg);
    let mut crossing = std::collections::BTreeSet::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            for k in 0..lines[i].len() - 1 {
                let before = lines[i][k].1 - lines[j][k].1;
                let after = lines[i][k + 1].1 - lines[j][k + 1].1;
                if before * after < 0.0 {
                    crossing.insert(i);
                    crossing.insert(j);
                }
            }
        }
    }
    assert_eq!(crossing.len(), 2);
    assert_eq!(crossing.into_iter().collect::<Vec<_>>(), vec![1, 2]);
}

#[test]
fn leaderboard_json_round_trips() {
    let path = fixture_dir().join("golden/development/leaderboard.json");
    let board: Leaderboard = read_json(&path).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("l.json");
    write_json(&copy, &board).unwrap();
    assert_eq!(std::fs::read(&copy).unwrap(), std::fs::read(&path).unwrap());
    let again: Leaderboard = read_json(&copy).unwrap();
    assert_eq!(again, board);
}
