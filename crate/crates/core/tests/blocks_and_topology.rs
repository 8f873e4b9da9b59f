use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangles::abstract_sep::{AbstractSystem, Corruption};
use tangles::blocks::{
    aleph0_blocks, build_tk, is_inseparable, k_blocks, min_vertex_cut, verify_tk,
};
use tangles::finite::FiniteGraph;
use tangles::finite_tangle::connected_graphs_up_to;
use tangles::schema::find_schema;
use tangles::tangle::{representative_tangles, Tangle};
use tangles::topology::{extract_subcover, parse_cover, SpacePoint, Verdict};
use tangles::ultrafilter::Policy;

fn random_graph(n: usize, p: f64, seed: u64) -> FiniteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = FiniteGraph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn blocks_are_maximal_and_incomparable(seed in any::<u64>(), k in 2usize..5) {
        let g = random_graph(7, 0.5, seed);
        let blocks = k_blocks(&g, k);
        for (i, b) in blocks.iter().enumerate() {
            prop_assert!(b.len() >= k && is_inseparable(&g, b, k));
            for v in (0..7).filter(|v| !b.contains(v)) {
                let mut bigger = b.clone();
                bigger.push(v);
                prop_assert!(!is_inseparable(&g, &bigger, k));
            }
            for c in &blocks[i + 1..] {
                prop_assert!(!b.iter().all(|v| c.contains(v)) && !c.iter().all(|v| b.contains(v)));
            }
        }
    }

    #[test]
    fn certificates_respect_cuts(seed in any::<u64>()) {
        let g = random_graph(8, 0.75, seed);
        let branch = [0, 2, 5, 7];
        match build_tk(&g, &branch) {
            Ok(cert) => {
                prop_assert!(verify_tk(&g, &cert).is_ok());
                for (i, &a) in branch.iter().enumerate() {
                    for &b in &branch[i + 1..] {
                        let paths = cert.paths.iter().filter(|p| p.contains(&a) && p.contains(&b)).count();
                        prop_assert!(paths <= 1);
                        prop_assert!(min_vertex_cut(&g, a, b, 8).is_none_or(|c| c >= branch.len() - 1));
                    }
                }
            }
            Err(f) => {
                prop_assert!(!is_inseparable(&g, &branch, branch.len()));
                prop_assert!(branch.contains(&f.pair.0) && branch.contains(&f.pair.1));
            }
        }
    }
}

#[test]
fn aleph0_blocks_of_the_suite() {
    let count = |name: &str| aleph0_blocks(&find_schema(name).unwrap()).len();
    assert_eq!(count("CLIQ"), 1);
    assert_eq!(count("RAY"), 0);
    assert_eq!(count("SPIDER"), 0);
    assert_eq!(count("CLIQRAY"), 1);
}

/// On truncations the clique vertices and `z` stay pairwise joined, while
/// every ray vertex is cut off from the clique by at most two vertices, so
/// the block is exactly the clique plus `z` at every depth.
#[test]
fn clique_block_on_truncations() {
    let s = find_schema("CLIQRAY").unwrap();
    let block = &aleph0_blocks(&s)[0];
    for n in [8, 16, 24] {
        let t = s.truncate(n);
        let far = t.index[&s.parse_vertex(&format!("K[{}]", n - 1)).unwrap()];
        for (i, v) in t.vertices.iter().enumerate() {
            let cut = min_vertex_cut(&t.graph, i, far, n as usize);
            if block.contains(v) {
                assert!(
                    cut.is_none_or(|c| c >= n as usize - 1),
                    "{} at depth {n}",
                    t.graph.name(i)
                );
            } else {
                assert!(
                    cut.is_some_and(|c| c <= 2),
                    "{} at depth {n}",
                    t.graph.name(i)
                );
            }
        }
    }
}

#[test]
fn kernel_of_the_clique_end_contains_its_attachment() {
    let s = find_schema("CLIQRAY").unwrap();
    let t = Tangle::parse_id(&s, "end:K").unwrap();
    let z = s.parse_vertex("z").unwrap();
    assert!(t.kernel().contains(&z));
    assert!(t.kernel_witness(&z).unwrap().is_none());
    let r3 = s.parse_vertex("R[3]").unwrap();
    let w = t.kernel_witness(&r3).unwrap().unwrap();
    assert!(t.contains(&w) && w.a().contains(&r3) && !w.b().contains(&r3));
}

#[test]
fn refuted_covers_miss_their_witness() {
    let s = find_schema("SPIDER").unwrap();
    let cover = parse_cover(&s, "open X={c} C={legs{0..5}}\npiece {c}\n").unwrap();
    let Verdict::Refuted { witness } = extract_subcover(&s, &cover).unwrap() else {
        panic!("expected a refutation")
    };
    assert!(matches!(witness, SpacePoint::Tangle(_)));
    for item in &cover {
        assert!(!item.contains(&witness).unwrap());
    }
}

#[test]
fn confirmed_covers_contain_every_suite_tangle() {
    let s = find_schema("SPIDER").unwrap();
    let cover = parse_cover(
        &s,
        "open X={c} C={legs{0+2n}}\nopen X={c} C={legs{1+2n}}\npiece {c}\n",
    )
    .unwrap();
    assert!(extract_subcover(&s, &cover).unwrap().is_confirmed());
    for t in representative_tangles(&s, Policy::Seeded(4)) {
        let p = SpacePoint::Tangle(t);
        assert!(cover.iter().any(|c| c.contains(&p).unwrap()));
    }
}

#[test]
fn separation_systems_of_small_graphs_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let graphs = connected_graphs_up_to(4);
    let mut rejected = 0;
    for g in &graphs {
        let sys = AbstractSystem::from_graph(g, None).unwrap();
        assert!(sys.validate().valid(), "{}", g.to_text());
        for c in Corruption::ALL.iter().cycle().take(12) {
            if let Some(bad) = c.apply(&sys, &mut rng) {
                assert!(!bad.validate().valid(), "{c:?} on {}", g.to_text());
                rejected += 1;
            }
        }
    }
    assert!(rejected >= 100);
}
