use std::collections::BTreeSet;

use proptest::prelude::*;
use tangles::finite::FiniteGraph;
use tangles::finite_tangle::{
    connected_graphs_up_to, count_tangles, enumerate_tangles, is_consistent, join_closure_check,
    star_t_equivalence, FiniteSep, SepSystem,
};

/// Every `(A, B)` with `A ∪ B = V`, no edge across, and `|A ∩ B| < k`, by
/// scanning all three-way vertex labellings.
fn oracle_separations(g: &FiniteGraph, k: usize) -> BTreeSet<(u64, u64)> {
    let n = g.vertex_count();
    let mut out = BTreeSet::new();
    for code in 0..3u64.pow(n as u32) {
        let (mut a, mut b, mut c) = (0u64, 0u64, code);
        for v in 0..n {
            match c % 3 {
                0 => a |= 1 << v,
                1 => b |= 1 << v,
                _ => {
                    a |= 1 << v;
                    b |= 1 << v;
                }
            }
            c /= 3;
        }
        let crossing = g.edges().iter().any(|&(u, v)| {
            let only_a = |x: usize| a >> x & 1 == 1 && b >> x & 1 == 0;
            let only_b = |x: usize| b >> x & 1 == 1 && a >> x & 1 == 0;
            (only_a(u) && only_b(v)) || (only_b(u) && only_a(v))
        });
        if !crossing && ((a & b).count_ones() as usize) < k {
            out.insert((a, b));
        }
    }
    out
}

fn oracle_covers(g: &FiniteGraph, smalls: &[u64]) -> bool {
    let n = g.vertex_count();
    let all = smalls.iter().fold(0, |m, a| m | a) == (1u64 << n) - 1;
    all && g
        .edges()
        .iter()
        .all(|&(u, v)| smalls.iter().any(|a| a >> u & 1 == 1 && a >> v & 1 == 1))
}

/// Tangle count by scanning every orientation.
fn oracle_count(g: &FiniteGraph, k: usize) -> usize {
    let seps = oracle_separations(g, k);
    let pairs: Vec<(u64, u64)> = seps
        .iter()
        .copied()
        .filter(|&(a, b)| (a, b) <= (b, a))
        .collect();
    assert!(pairs.len() <= 22, "oracle scan too large");
    let mut count = 0;
    for pick in 0u64..1 << pairs.len() {
        let chosen: Vec<u64> = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if pick >> i & 1 == 1 && a != b { b } else { a })
            .collect();
        if a_distinct_duplicate(&pairs, pick) {
            continue;
        }
        let mut ok = true;
        'outer: for i in 0..chosen.len() {
            for j in i..chosen.len() {
                for l in j..chosen.len() {
                    if oracle_covers(g, &[chosen[i], chosen[j], chosen[l]]) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        count += ok as usize;
    }
    count
}

/// Degenerate separations have one orientation; skip the duplicate pick.
fn a_distinct_duplicate(pairs: &[(u64, u64)], pick: u64) -> bool {
    pairs
        .iter()
        .enumerate()
        .any(|(i, &(a, b))| a == b && pick >> i & 1 == 1)
}

#[test]
fn separation_lists_match_oracle() {
    for (g, k) in [
        (FiniteGraph::complete(2), 2),
        (FiniteGraph::path(3), 2),
        (FiniteGraph::complete(4), 2),
        (FiniteGraph::cycle(5), 3),
        (FiniteGraph::grid(2, 3), 3),
    ] {
        let sys = SepSystem::new(&g, k).unwrap();
        let ours: BTreeSet<(u64, u64)> = sys.pairs.iter().flatten().map(|s| (s.a, s.b)).collect();
        assert_eq!(ours, oracle_separations(&g, k));
    }
}

#[test]
fn k4_has_only_trivial_order_one_separations() {
    let sys = SepSystem::new(&FiniteGraph::complete(4), 2).unwrap();
    for p in &sys.pairs {
        let small = p
            .iter()
            .map(|s| s.a.count_ones().min(s.b.count_ones()))
            .min()
            .unwrap();
        assert!(small <= 1);
        assert!(p.iter().any(|s| s.b == 0b1111));
    }
}

#[test]
fn frozen_tangle_counts() {
    // computed by the exhaustive oracle scan above
    assert_eq!(oracle_count(&FiniteGraph::complete(3), 3), 0);
    assert_eq!(oracle_count(&FiniteGraph::complete(4), 2), 1);
    assert_eq!(oracle_count(&FiniteGraph::cycle(4), 2), 1);
    assert_eq!(count_tangles(&FiniteGraph::complete(3), 3).unwrap(), 0);
    assert_eq!(count_tangles(&FiniteGraph::complete(4), 2).unwrap(), 1);
    assert_eq!(count_tangles(&FiniteGraph::cycle(4), 2).unwrap(), 1);
}

#[test]
fn counts_agree_with_oracle_on_small_graphs() {
    for g in connected_graphs_up_to(4) {
        for k in 1..=3 {
            if oracle_separations(&g, k).len() > 40 {
                continue;
            }
            assert_eq!(
                count_tangles(&g, k).unwrap(),
                oracle_count(&g, k),
                "{}",
                g.to_text()
            );
        }
    }
}

#[test]
fn tangles_are_consistent_and_contain_trivial_separations() {
    for g in [
        FiniteGraph::complete(4),
        FiniteGraph::cycle(4),
        FiniteGraph::grid(3, 3),
    ] {
        let full = (1u64 << g.vertex_count()) - 1;
        for k in 1..=3 {
            for t in enumerate_tangles(&g, k).unwrap() {
                assert!(is_consistent(&t.seps));
                assert!(t.seps.contains(&FiniteSep { a: 0, b: full }));
                for v in 0..g.vertex_count() {
                    let mut removed = vec![false; g.vertex_count()];
                    removed[v] = true;
                    if k >= 2 && g.components_avoiding(&removed).len() == 1 {
                        assert!(t.seps.contains(&FiniteSep { a: 1 << v, b: full }));
                    }
                }
            }
        }
    }
}

#[test]
fn star_reduction_small_graphs() {
    for g in connected_graphs_up_to(5) {
        for k in 1..=3 {
            let r = star_t_equivalence(&g, k).unwrap();
            assert!(r.counterexample.is_none(), "{}", g.to_text());
        }
    }
    let r = star_t_equivalence(&FiniteGraph::path(3), 2).unwrap();
    assert!(r.counterexample.is_none() && r.orientations_checked > 0);
}

#[test]
fn join_closure_on_suite_graphs() {
    for (g, k) in [
        (FiniteGraph::complete(4), 2),
        (FiniteGraph::cycle(4), 2),
        (FiniteGraph::grid(3, 3), 3),
    ] {
        let r = join_closure_check(&g, k).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.tangles > 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn counts_are_isomorphism_invariant(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(), k in 1usize..4) {
        let g = FiniteGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]);
        prop_assert_eq!(count_tangles(&g, k).unwrap(), count_tangles(&g.relabeled(&perm), k).unwrap());
    }

    #[test]
    fn random_six_vertex_graphs_star_reduction(bits in 0u64..(1 << 15)) {
        let pairs: Vec<(usize, usize)> = (0..6).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &p)| p).collect();
        let g = FiniteGraph::from_edges(6, &edges);
        prop_assume!(g.is_connected());
        let r = star_t_equivalence(&g, 3).unwrap();
        prop_assert!(r.counterexample.is_none());
    }
}
