use std::collections::BTreeSet;

use proptest::prelude::*;
use tangles::components::components;
use tangles::sampling::Sampler;
use tangles::schema::{find_schema, suite_schemas, SchemaRef, Vertex};
use tangles::separation::Separation;

fn schema_at(i: usize) -> SchemaRef {
    let all = suite_schemas();
    all[i % all.len()].schema()
}

/// Components of `truncate(n) - X`, as sets of vertices.
fn truncated_components(schema: &SchemaRef, x: &BTreeSet<Vertex>, n: u64) -> Vec<BTreeSet<Vertex>> {
    let t = schema.truncate(n);
    let removed: Vec<bool> = t.vertices.iter().map(|v| x.contains(v)).collect();
    t.graph
        .components_avoiding(&removed)
        .into_iter()
        .map(|c| c.into_iter().map(|i| t.vertices[i]).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn components_restrict_to_truncations(i in 0usize..9, seed in any::<u64>()) {
        let schema = schema_at(i);
        let mut smp = Sampler::new(&schema, seed, 6);
        let x = smp.vertex_set(5);
        let comps = components(&schema, &x).unwrap();
        for n in [10, 20, 40] {
            let mut seen = BTreeSet::new();
            for c in truncated_components(&schema, &x, n) {
                let refs: BTreeSet<_> = c.iter().map(|v| comps.locate(v)).collect();
                prop_assert_eq!(refs.len(), 1);
                let r = refs.into_iter().next().unwrap().expect("vertex outside X has a component");
                prop_assert!(seen.insert(r), "component split by the truncation");
                for v in &c {
                    prop_assert!(comps.component_vertices(r).contains(v));
                }
            }
        }
    }

    #[test]
    fn sides_are_separations_on_truncations(i in 0usize..9, seed in any::<u64>()) {
        let schema = schema_at(i);
        let mut smp = Sampler::new(&schema, seed, 6);
        let s = smp.separation(4).unwrap();
        for n in [10, 20] {
            let t = schema.truncate(n);
            for (j, v) in t.vertices.iter().enumerate() {
                prop_assert!(s.a().contains(v) || s.b().contains(v));
                let a_only = s.a().contains(v) && !s.b().contains(v);
                for w in t.graph.neighbors(j) {
                    let u = &t.vertices[w];
                    prop_assert!(!(a_only && s.b().contains(u) && !s.a().contains(u)));
                }
            }
        }
    }

    #[test]
    fn inverse_reverses_the_order(i in 0usize..9, seed in any::<u64>()) {
        let schema = schema_at(i);
        let mut smp = Sampler::new(&schema, seed, 6);
        let s = smp.separation(3).unwrap();
        let t = smp.separation(3).unwrap();
        prop_assert_eq!(s.leq(&t).unwrap(), t.inverse().leq(&s.inverse()).unwrap());
        prop_assert_eq!(s.inverse().inverse(), s.clone());
        prop_assert!(s.leq(&s).unwrap());
    }

    #[test]
    fn corner_joins_are_separations(i in 0usize..9, seed in any::<u64>()) {
        let schema = schema_at(i);
        let mut smp = Sampler::new(&schema, seed, 6);
        let s = smp.separation(3).unwrap();
        let t = smp.separation(3).unwrap();
        let j = s.corner_join(&t).unwrap();
        prop_assert!(j.order() <= s.order() + t.order());
        prop_assert!(s.leq(&j).unwrap() && t.leq(&j).unwrap());
        prop_assert_eq!(j.a(), &s.a().union(t.a()));
    }
}

#[test]
fn parsed_separation_round_trips() {
    let s = find_schema("SPIDER").unwrap();
    let sep =
        Separation::parse(&s, "sep X={c, legs[2].t[3]} B={legs{0..2}, @legs[2].t[4]}").unwrap();
    assert_eq!(Separation::parse(&s, &sep.text()).unwrap(), sep);
    assert_eq!(sep.order(), 2);
    assert!(!sep.b().is_finite());
}
