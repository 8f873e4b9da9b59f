use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use tangles::components::components;
use tangles::sampling::Sampler;
use tangles::schema::{find_schema, suite_schemas, Vertex};
use tangles::separation::Separation;
use tangles::tangle::{census, representative_tangles, Tangle};
use tangles::ultrafilter::{CommitLog, LogDump, Policy, UltrafilterHandle};

#[test]
fn ultrafilter_axioms_under_random_queries() {
    for (k, entry) in suite_schemas().iter().enumerate() {
        let schema = entry.schema();
        let mut smp = Sampler::new(&schema, 40 + k as u64, 6);
        for t in representative_tangles(&schema, Policy::Seeded(k as u64)) {
            let Tangle::Uf { .. } = t else { continue };
            let h = t.induced_uf(&t.minimal_witness().unwrap()).unwrap();
            let comps = h.comps().clone();
            assert!(!h.membership(&Default::default()));
            for _ in 0..500 {
                let s = smp.selection(&comps);
                let u = smp.selection(&comps);
                let (ms, mu) = (h.membership(&s), h.membership(&u));
                assert_ne!(
                    ms,
                    h.membership(&comps.complement(&s)),
                    "exactly one of a set and its complement"
                );
                if ms && mu {
                    assert!(h.membership(&s.intersect(&u)));
                }
                if ms {
                    assert!(h.membership(&s.union(&u)));
                }
            }
        }
    }
}

#[test]
fn restriction_keeps_principal_ultrafilters_principal() {
    let s = find_schema("SPIDER").unwrap();
    let mut smp = Sampler::new(&s, 8, 6);
    let t = Tangle::parse_id(&s, "end:legs[1].t").unwrap();
    for _ in 0..50 {
        let x2 = smp.vertex_set(5);
        let x = smp.subset(&x2);
        let h = t.induced_uf(&x2).unwrap();
        assert!(h.is_principal());
        assert!(h.restrict(&x).unwrap().is_principal());
    }
}

#[test]
fn seeded_logs_disagree_on_a_constructed_separation() {
    let s = find_schema("STAR").unwrap();
    let x: BTreeSet<Vertex> = s.parse_vertex_list("c").unwrap();
    let comps = components(&s, &x).unwrap();
    // Evens against odds is decided by the tie-break alone, so two logs
    // with different preferences split on it.
    let evens = comps.parse_selection("{L{0+2n}}").unwrap();
    let sep = Separation::new(comps.clone(), evens);
    let answers: BTreeSet<bool> = (0..16)
        .map(|seed| {
            Tangle::parse_id(&s, &format!("uf:L:seed={seed}"))
                .unwrap()
                .contains(&sep)
        })
        .collect();
    assert_eq!(answers.len(), 2);

    // Two tangles sharing the log agree everywhere.
    let a = Tangle::parse_id(&s, "uf:L:seed=3").unwrap();
    let b = Tangle::from_limit(&a.limit().unwrap());
    let mut smp = Sampler::new(&s, 2, 6);
    for _ in 0..100 {
        let sep = smp.separation(4).unwrap();
        assert_eq!(a.contains(&sep), b.contains(&sep));
    }
}

#[test]
fn log_dumps_replay_to_the_same_answers() {
    let log = Arc::new(CommitLog::new(0, 0, Policy::Seeded(11)));
    let queries = ["{0+2n}", "{0+4n, 1+4n}", "{5..40}", "{3+7n}"];
    let answers: Vec<bool> = queries
        .iter()
        .map(|q| log.decide(&q.parse().unwrap()))
        .collect();
    let text = serde_json::to_string(&log.dump()).unwrap();
    let dump: LogDump = serde_json::from_str(&text).unwrap();
    let again = CommitLog::replay(&dump).unwrap();
    for (q, a) in queries.iter().zip(answers) {
        assert_eq!(again.decide(&q.parse().unwrap()), a);
    }
    let s = find_schema("STAR").unwrap();
    let comps = components(&s, &s.parse_vertex_list("c").unwrap()).unwrap();
    assert!(!UltrafilterHandle::lazy(comps, log).unwrap().is_principal());
}

#[test]
fn locally_finite_schemas_have_no_ultrafilter_tangles() {
    for entry in suite_schemas() {
        let schema = entry.schema();
        if schema.is_locally_finite() {
            assert!(census(&schema).uf_classes.is_empty(), "{}", schema.name);
        }
    }
}

#[test]
fn small_separations_are_in_every_tangle() {
    for entry in suite_schemas() {
        let schema = entry.schema();
        let mut smp = Sampler::new(&schema, 6, 6);
        for t in representative_tangles(&schema, Policy::Canonical) {
            for _ in 0..50 {
                let a = smp.vertex_set(4);
                let comps = components(&schema, &a).unwrap();
                let small = Separation::new(comps.clone(), comps.all());
                assert!(small.is_small());
                assert_eq!(t.orient(&small), small, "{}", t.id());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orientations_are_consistent(i in 0usize..9, seed in any::<u64>()) {
        let schema = suite_schemas()[i].schema();
        let mut smp = Sampler::new(&schema, seed, 6);
        for t in representative_tangles(&schema, Policy::Seeded(seed)) {
            let s = smp.separation(3).unwrap();
            let u = smp.separation(3).unwrap();
            let (s, u) = if s.lt(&u).unwrap() { (s, u) } else if u.lt(&s).unwrap() { (u, s) } else { continue };
            prop_assert!(!(t.contains(&s.inverse()) && t.contains(&u)) || s.inverse() == u,
                "{} contains the inverse of {} and {}", t.id(), s.text(), u.text());
        }
    }

    #[test]
    fn induced_ultrafilters_commute_with_restriction(i in 0usize..9, seed in any::<u64>()) {
        let schema = suite_schemas()[i].schema();
        let mut smp = Sampler::new(&schema, seed, 6);
        for t in representative_tangles(&schema, Policy::Canonical) {
            let x2 = smp.vertex_set(5);
            let x = smp.subset(&x2);
            prop_assert_eq!(t.induced_uf(&x2).unwrap().restrict(&x).unwrap(), t.induced_uf(&x).unwrap());
        }
    }
}
