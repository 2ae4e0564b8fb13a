use super::*;
use crate::constraint::WeightConstraint;
use crate::cover::{approx_min_cover, CoverSet};
use crate::graph::tests::example;
use crate::query::{query_2hop, query_lwkri, Query};

fn iv(lo: u32, hi: u32) -> WeightInterval {
    WeightInterval::new(lo, hi)
}

fn reference_order(g: &WeightedGraph) -> VertexOrder {
    let seq = [3, 4, 2, 1, 6, 5, 7].map(|x| g.resolve(&x.to_string()).unwrap());
    VertexOrder::from_sequence(7, seq.to_vec()).unwrap()
}

/// Entries of `L(v)` as `(hop external id, lo, hi, k)`, self-entries dropped.
fn named(index: &LabelIndex, g: &WeightedGraph, v: u64) -> Vec<(u64, u32, u32, u32)> {
    let dense = g.resolve(&v.to_string()).unwrap();
    let mut out: Vec<_> = index
        .label(dense)
        .entries()
        .iter()
        .filter(|e| !e.is_self_entry())
        .map(|e| {
            let (lo, hi) = e.interval.bounds().unwrap();
            (g.external_id(index.hop_vertex(e.hop_rank)), lo, hi, e.dist)
        })
        .collect();
    out.sort();
    out
}

fn crafted(g: &WeightedGraph, labels: Vec<(u64, Vec<LabelEntry>)>) -> LabelIndex {
    let order = reference_order(g);
    let mut all = vec![VertexLabel::default(); 7];
    for (v, entries) in labels {
        all[g.resolve(&v.to_string()).unwrap() as usize] = VertexLabel::from_entries(entries);
    }
    LabelIndex::from_parts(Variant::Wkri, order, 7, None, all, None)
}

#[test]
fn same_hop_rejection() {
    let g = example();
    let mut idx = crafted(&g, vec![(3, vec![LabelEntry::self_entry(0)]), (2, vec![LabelEntry::new(0, iv(4, 4), 1)])]);
    let v2 = g.resolve("v2").unwrap();
    assert_eq!(idx.try_insert(v2, LabelEntry::new(0, iv(3, 5), 2)).unwrap(), InsertOutcome::RejectedSameHop);
    assert_eq!(idx.label(v2).len(), 1);
    // A dominating candidate replaces the weaker entry.
    assert_eq!(idx.try_insert(v2, LabelEntry::new(0, iv(4, 4), 1)).unwrap(), InsertOutcome::RejectedSameHop);
    let mut idx2 = crafted(&g, vec![(3, vec![LabelEntry::self_entry(0)]), (2, vec![LabelEntry::new(0, iv(3, 5), 2)])]);
    assert_eq!(idx2.try_insert(v2, LabelEntry::new(0, iv(4, 4), 1)).unwrap(), InsertOutcome::Inserted);
    assert_eq!(idx2.label(v2).entries(), &[LabelEntry::new(0, iv(4, 4), 1)]);
}

#[test]
fn cross_hop_rejection() {
    let g = example();
    let mut idx = crafted(
        &g,
        vec![
            (3, vec![LabelEntry::self_entry(0)]),
            (
                4,
                vec![
                    LabelEntry::new(0, iv(4, 5), 2),
                    LabelEntry::new(0, iv(7, 8), 2),
                    LabelEntry::self_entry(1),
                ],
            ),
            (5, vec![LabelEntry::new(0, iv(6, 6), 1), LabelEntry::new(0, iv(2, 3), 2)]),
        ],
    );
    let v5 = g.resolve("v5").unwrap();
    assert_eq!(idx.try_insert(v5, LabelEntry::new(1, iv(4, 6), 3)).unwrap(), InsertOutcome::RejectedCrossHop);
    assert_eq!(idx.try_insert(v5, LabelEntry::new(1, iv(2, 5), 3)).unwrap(), InsertOutcome::Inserted);
    // Rank 0 after rank 1 breaks monotonicity.
    assert!(idx.try_insert(v5, LabelEntry::new(0, iv(1, 9), 9)).is_err());
}

#[test]
fn first_insert_into_empty_label() {
    let g = example();
    let mut idx = crafted(&g, vec![(3, vec![LabelEntry::self_entry(0)])]);
    let v7 = g.resolve("v7").unwrap();
    assert_eq!(idx.try_insert(v7, LabelEntry::new(0, iv(3, 5), 3)).unwrap(), InsertOutcome::Inserted);
}

#[test]
fn wkri_matches_running_example() {
    let g = example();
    let idx = build_wkri(&g, &reference_order(&g)).unwrap();
    assert_eq!(
        named(&idx, &g, 1),
        vec![(2, 5, 5, 1), (3, 3, 3, 1), (3, 4, 5, 2), (3, 5, 8, 4), (4, 5, 5, 2)]
    );
    assert_eq!(idx.entry_count(), 27);
    assert!(scan_redundancy(&idx).is_clean());
    for v in g.vertices() {
        let e = idx.label(v).entries();
        assert!(e.windows(2).all(|w| w[0].hop_rank <= w[1].hop_rank));
        assert_eq!(e.iter().filter(|x| x.is_self_entry()).count(), 1);
    }
}

#[test]
fn gwkri_and_lwkri_match_running_example() {
    let g = example();
    let cover = approx_min_cover(&g);
    let order = VertexOrder::for_cover(&g, &cover);
    let gw = build_gwkri(&g, &cover, &order).unwrap();
    assert_eq!(named(&gw, &g, 2), vec![(1, 5, 5, 1), (3, 4, 4, 1), (3, 5, 8, 3), (4, 5, 5, 1)]);
    assert!(scan_redundancy(&gw).is_clean());

    let lw = build_lwkri(&g, &cover, &order).unwrap();
    assert_eq!(named(&lw, &g, 4), vec![(3, 4, 5, 2), (3, 7, 8, 2)]);
    for v in [2, 5, 6, 7] {
        assert!(lw.label(g.resolve(&v.to_string()).unwrap()).is_empty());
    }
    assert_eq!(lw.entry_count(), 9);
    assert!(scan_redundancy(&lw).is_clean());
}

#[test]
fn builds_reject_bad_covers_and_orders() {
    let g = example();
    let partial = CoverSet::from_members(7, vec![g.resolve("v3").unwrap()]).unwrap();
    let order = reference_order(&g);
    assert!(build_gwkri(&g, &partial, &order).is_err());
    assert!(build_lwkri(&g, &partial, &order).is_err());
    let cover = approx_min_cover(&g);
    // v2 (not in cover) sits in the hop prefix of the reference order.
    assert!(build_gwkri(&g, &cover, &order).is_err());
    let short = VertexOrder::from_sequence(2, vec![1, 0]).unwrap();
    assert!(build_wkri(&g, &short).is_err());
}

#[test]
fn trivial_graphs() {
    let g = WeightedGraph::random(1, 0, 1, 0).unwrap();
    let idx = crate::build_default(&g, Variant::Wkri).unwrap();
    assert_eq!(idx.label(0).entries(), &[LabelEntry::self_entry(0)]);

    let g = WeightedGraph::random(4, 0, 1, 0).unwrap();
    let m = approx_min_cover(&g);
    assert!(m.is_empty());
    let gw = build_gwkri(&g, &m, &VertexOrder::for_cover(&g, &m)).unwrap();
    assert_eq!(gw.entry_count(), 4);
    assert!(gw.labels().iter().all(|l| l.entries()[0].is_self_entry()));
}

#[test]
fn full_cover_lwkri_equals_wkri() {
    for seed in 0..30 {
        let g = WeightedGraph::random(9, 14, 4, seed).unwrap();
        let order = crate::cover::degree_descending_order(&g, &Default::default()).unwrap();
        let all = CoverSet::from_members(9, order.as_slice().to_vec()).unwrap();
        let lw = build_lwkri(&g, &all, &order).unwrap();
        let wk = build_wkri(&g, &order).unwrap();
        assert_eq!(lw.labels(), wk.labels(), "seed {seed}");
    }
}

#[test]
fn scan_flags_injected_redundancy() {
    let g = example();
    let mut idx = build_wkri(&g, &reference_order(&g)).unwrap();
    let v1 = g.resolve("v1").unwrap();
    // (v3,[3,8],5) is dominated by (v3,[3,3],1).
    idx.label_mut(v1).insert(1, LabelEntry::new(0, iv(3, 8), 5));
    let report = scan_redundancy(&idx);
    assert_eq!(report.violations.len(), 1);
    assert!(matches!(report.violations[0].kind, ViolationKind::SameHop { .. }));

    let mut idx = build_wkri(&g, &reference_order(&g)).unwrap();
    let v5 = g.resolve("v5").unwrap();
    // (v4,[4,6],3) at v5 is implied through hop v3.
    let pos = idx.label(v5).entries().iter().position(|e| e.hop_rank == 1).unwrap();
    idx.label_mut(v5).insert(pos, LabelEntry::new(1, iv(4, 6), 3));
    let report = scan_redundancy(&idx);
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].kind, ViolationKind::CrossHop { via_rank: 0 });
}

#[test]
fn prune_flag_keeps_answers() {
    for seed in 0..40 {
        let g = WeightedGraph::random(10, 18, 4, 100 + seed).unwrap();
        let m = approx_min_cover(&g);
        let order = VertexOrder::for_cover(&g, &m);
        let plain = build_lwkri(&g, &m, &order).unwrap();
        let pruned = build_lwkri_with(&g, &m, &order, BuildOptions { prune_uncovered: true, ..Default::default() }).unwrap();
        assert_eq!(plain.labels(), pruned.labels(), "seed {seed}");
    }
}

#[test]
fn example_queries_on_all_variants() {
    let g = example();
    let v = |s: &str| g.resolve(s).unwrap();
    let qs = [
        (Query::new(v("v2"), v("v6"), WeightConstraint::between(5, 8).unwrap(), 3), true),
        (Query::new(v("v2"), v("v7"), WeightConstraint::between(4, 5).unwrap(), 1), false),
        (Query::new(v("v6"), v("v7"), WeightConstraint::between(6, 8).unwrap(), 2), false),
    ];
    let wk = build_wkri(&g, &reference_order(&g)).unwrap();
    let cover = approx_min_cover(&g);
    let order = VertexOrder::for_cover(&g, &cover);
    let gw = build_gwkri(&g, &cover, &order).unwrap();
    let lw = build_lwkri(&g, &cover, &order).unwrap();
    for (q, want) in qs {
        assert_eq!(query_2hop(&wk, &q).unwrap(), want);
        assert_eq!(query_2hop(&gw, &q).unwrap(), want);
        assert_eq!(query_lwkri(&lw, &q).unwrap(), want);
    }
    assert!(query_2hop(&lw, &qs[0].0).is_err());
    assert!(query_lwkri(&wk, &qs[0].0).is_err());
}

#[test]
fn binary_round_trip_and_corruption() {
    let g = example();
    let cover = approx_min_cover(&g);
    let order = VertexOrder::for_cover(&g, &cover);
    for idx in [
        build_wkri(&g, &reference_order(&g)).unwrap(),
        build_gwkri(&g, &cover, &order).unwrap(),
        build_lwkri(&g, &cover, &order).unwrap(),
    ] {
        let bytes = idx.to_bytes();
        let back = LabelIndex::from_bytes(&bytes).unwrap();
        assert_eq!(back, idx);
        assert_eq!(back.to_bytes(), bytes);

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(LabelIndex::from_bytes(&bad), Err(Error::Format(m)) if m.contains("magic")));
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(matches!(LabelIndex::from_bytes(&bad), Err(Error::Format(m)) if m.contains("version")));
        assert!(LabelIndex::from_bytes(&bytes[..bytes.len() - 3]).is_err());
        for i in 6..bytes.len() {
            let mut bad = bytes.clone();
            bad[i] ^= 0x40;
            assert!(LabelIndex::from_bytes(&bad).is_err(), "flip at {i} undetected");
        }
    }
}

#[test]
fn budgets_stop_the_build() {
    let g = WeightedGraph::random(60, 150, 5, 1).unwrap();
    let order = crate::cover::degree_descending_order(&g, &Default::default()).unwrap();
    let past = BuildOptions {
        deadline: Some(std::time::Instant::now()),
        ..Default::default()
    };
    std::thread::sleep(std::time::Duration::from_millis(2));
    assert!(matches!(
        build_wkri_with(&g, &order, past),
        Err(Error::BudgetExceeded { hops_done: 0, .. })
    ));
    let small = BuildOptions {
        max_entries: Some(100),
        ..Default::default()
    };
    match build_wkri_with(&g, &order, small) {
        Err(Error::BudgetExceeded { hops_done, entries, .. }) => assert!(hops_done > 0 && entries > 100),
        other => panic!("expected budget error, got {other:?}"),
    }
    let full = build_wkri_with(&g, &order, BuildOptions { max_entries: Some(1 << 40), ..Default::default() }).unwrap();
    assert_eq!(full, build_wkri(&g, &order).unwrap());
}
