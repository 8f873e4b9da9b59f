//! Exhaustive tangle enumeration on small finite graphs.
//!
//! Vertex and edge sets are bitmasks, so graphs are limited to 64 vertices
//! and 64 edges.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::FiniteGraph;

/// Default bound on search nodes before giving up.
pub const NODE_LIMIT: u64 = 1 << 25;

/// An oriented separation `(A, B)` of a finite graph as vertex bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteSep {
    pub a: u64,
    pub b: u64,
}

impl FiniteSep {
    pub fn inverse(self) -> Self {
        FiniteSep {
            a: self.b,
            b: self.a,
        }
    }

    pub fn order(self) -> u32 {
        (self.a & self.b).count_ones()
    }

    pub fn leq(self, other: Self) -> bool {
        self.a & !other.a == 0 && other.b & !self.b == 0
    }

    pub fn lt(self, other: Self) -> bool {
        self != other && self.leq(other)
    }
}

/// The separations of order `< k` of a finite graph, grouped into unordered
/// pairs.
#[derive(Clone, Debug)]
pub struct SepSystem {
    pub n: usize,
    pub k: usize,
    full: u64,
    edges: Vec<u64>,
    full_edges: u64,
    /// Each unordered separation with its one or two orientations.
    pub pairs: Vec<Vec<FiniteSep>>,
}

fn mask_of(vs: &[usize]) -> u64 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

fn subsets_below(n: usize, k: usize) -> Vec<u64> {
    fn rec(start: usize, n: usize, left: usize, cur: u64, out: &mut Vec<u64>) {
        out.push(cur);
        if left == 0 {
            return;
        }
        for v in start..n {
            rec(v + 1, n, left - 1, cur | 1 << v, out);
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(0, n, k - 1, 0, &mut out);
    }
    out
}

impl SepSystem {
    pub fn new(g: &FiniteGraph, k: usize) -> Result<Self> {
        let n = g.vertex_count();
        if n > 64 || g.edge_count() > 64 {
            return Err(Error::Precondition(
                "finite tangle search supports at most 64 vertices and 64 edges".into(),
            ));
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let edges: Vec<u64> = g
            .edges()
            .into_iter()
            .map(|(u, v)| 1 << u | 1 << v)
            .collect();
        let full_edges = if edges.len() == 64 {
            u64::MAX
        } else {
            (1u64 << edges.len()) - 1
        };
        let mut oriented: BTreeSet<FiniteSep> = BTreeSet::new();
        for x in subsets_below(n, k) {
            let removed: Vec<bool> = (0..n).map(|v| x >> v & 1 == 1).collect();
            let comps: Vec<u64> = g
                .components_avoiding(&removed)
                .iter()
                .map(|c| mask_of(c))
                .collect();
            if comps.len() > 24 {
                return Err(Error::ResourceGuard(format!(
                    "{} components after deleting a separator",
                    comps.len()
                )));
            }
            for pick in 0u64..1 << comps.len() {
                let mut b = x;
                let mut a = x;
                for (i, c) in comps.iter().enumerate() {
                    if pick >> i & 1 == 1 {
                        b |= c;
                    } else {
                        a |= c;
                    }
                }
                oriented.insert(FiniteSep { a, b });
            }
        }
        let mut pairs: Vec<Vec<FiniteSep>> = oriented
            .iter()
            .filter(|s| (s.a, s.b) <= (s.b, s.a))
            .map(|&s| {
                if s.a == s.b {
                    vec![s]
                } else {
                    vec![s, s.inverse()]
                }
            })
            .collect();
        pairs.sort_by_key(|p| (p[0].order(), p[0]));
        Ok(SepSystem {
            n,
            k,
            full,
            edges,
            full_edges,
            pairs,
        })
    }

    /// Edges of `G[A]` as a bitmask over the edge list.
    fn inner_edges(&self, a: u64) -> u64 {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &e)| e & !a == 0)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// `G[A₁] ∪ G[A₂] ∪ G[A₃] = G`.
    pub fn covers(&self, smalls: &[u64]) -> bool {
        let v = smalls.iter().fold(0, |m, a| m | a);
        let e = smalls.iter().fold(0, |m, &a| m | self.inner_edges(a));
        v == self.full && e == self.full_edges
    }

    /// A triple (with repetition) of members whose small sides cover `G`.
    pub fn covering_triple(&self, seps: &[FiniteSep]) -> Option<[FiniteSep; 3]> {
        let e: Vec<u64> = seps.iter().map(|s| self.inner_edges(s.a)).collect();
        for i in 0..seps.len() {
            for j in i..seps.len() {
                for l in j..seps.len() {
                    let v = seps[i].a | seps[j].a | seps[l].a;
                    if v == self.full && e[i] | e[j] | e[l] == self.full_edges {
                        return Some([seps[i], seps[j], seps[l]]);
                    }
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Orientation of every separation of order `< k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteOrientation {
    pub k: usize,
    pub seps: Vec<FiniteSep>,
}

/// No triple, repetition allowed, whose small sides cover `G`.
pub fn is_rs_tangle(sys: &SepSystem, o: &FiniteOrientation) -> bool {
    sys.covering_triple(&o.seps).is_none()
}

pub fn is_consistent(seps: &[FiniteSep]) -> bool {
    seps.iter()
        .all(|s| seps.iter().all(|t| s == t || !s.inverse().lt(*t)))
}

/// Distinct members pairwise point towards each other.
pub fn is_star(seps: &[FiniteSep]) -> bool {
    seps.iter()
        .enumerate()
        .all(|(i, s)| seps[i + 1..].iter().all(|t| s == t || s.leq(t.inverse())))
}

struct Search<'a> {
    sys: &'a SepSystem,
    nodes: u64,
    limit: u64,
}

/// Incremental check state: unions of small sides over chosen members and
/// over pairs of chosen members, kept as stacks.
#[derive(Default)]
struct Unions {
    singles: Vec<(u64, u64)>,
    doubles: Vec<(u64, u64)>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::ResourceGuard(format!(
                "search exceeded {} nodes",
                self.limit
            )));
        }
        Ok(())
    }
}

/// All `k`-tangles of `g`.
pub fn enumerate_tangles(g: &FiniteGraph, k: usize) -> Result<Vec<FiniteOrientation>> {
    let sys = SepSystem::new(g, k)?;
    enumerate_in(&sys, NODE_LIMIT)
}

pub fn enumerate_in(sys: &SepSystem, limit: u64) -> Result<Vec<FiniteOrientation>> {
    let mut search = Search {
        sys,
        nodes: 0,
        limit,
    };
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    tangle_dfs(
        &mut search,
        0,
        &mut chosen,
        &mut Unions::default(),
        &mut out,
    )?;
    Ok(out)
}

fn tangle_dfs(
    s: &mut Search,
    depth: usize,
    chosen: &mut Vec<FiniteSep>,
    unions: &mut Unions,
    out: &mut Vec<FiniteOrientation>,
) -> Result<()> {
    s.tick()?;
    if depth == s.sys.pairs.len() {
        out.push(FiniteOrientation {
            k: s.sys.k,
            seps: chosen.clone(),
        });
        return Ok(());
    }
    for &cand in &s.sys.pairs[depth] {
        let e = s.sys.inner_edges(cand.a);
        let hits = |v: u64, em: u64| v == s.sys.full && em == s.sys.full_edges;
        if hits(cand.a, e)
            || unions
                .singles
                .iter()
                .any(|&(v, em)| hits(v | cand.a, em | e))
            || unions
                .doubles
                .iter()
                .any(|&(v, em)| hits(v | cand.a, em | e))
        {
            continue;
        }
        let (ns, nd) = (unions.singles.len(), unions.doubles.len());
        for i in 0..ns {
            let (v, em) = unions.singles[i];
            unions.doubles.push((v | cand.a, em | e));
        }
        unions.singles.push((cand.a, e));
        chosen.push(cand);
        let res = tangle_dfs(s, depth + 1, chosen, unions, out);
        chosen.pop();
        unions.singles.truncate(ns);
        unions.doubles.truncate(nd);
        res?;
    }
    Ok(())
}

pub fn count_tangles(g: &FiniteGraph, k: usize) -> Result<usize> {
    enumerate_tangles(g, k).map(|t| t.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub orientations_checked: u64,
    pub counterexample: Option<Vec<FiniteSep>>,
}

/// Checks that every consistent orientation of `S_k` without a star whose
/// small sides cover `G` has no covering triple at all.
pub fn star_t_equivalence(g: &FiniteGraph, k: usize) -> Result<EquivalenceReport> {
    let sys = SepSystem::new(g, k)?;
    let mut search = Search {
        sys: &sys,
        nodes: 0,
        limit: NODE_LIMIT,
    };
    let mut report = EquivalenceReport {
        orientations_checked: 0,
        counterexample: None,
    };
    let mut chosen = Vec::new();
    star_dfs(&mut search, 0, &mut chosen, &mut report)?;
    Ok(report)
}

fn star_dfs(
    s: &mut Search,
    depth: usize,
    chosen: &mut Vec<FiniteSep>,
    report: &mut EquivalenceReport,
) -> Result<()> {
    s.tick()?;
    if report.counterexample.is_some() {
        return Ok(());
    }
    if depth == s.sys.pairs.len() {
        report.orientations_checked += 1;
        if s.sys.covering_triple(chosen).is_some() {
            report.counterexample = Some(chosen.clone());
        }
        return Ok(());
    }
    for &cand in &s.sys.pairs[depth] {
        let consistent = chosen
            .iter()
            .all(|&t| !cand.inverse().lt(t) && !t.inverse().lt(cand));
        if !consistent || star_triple_with(s.sys, chosen, cand) {
            continue;
        }
        chosen.push(cand);
        star_dfs(s, depth + 1, chosen, report)?;
        chosen.pop();
    }
    Ok(())
}

/// A covering star triple that uses `cand`, the rest drawn from `chosen`.
fn star_triple_with(sys: &SepSystem, chosen: &[FiniteSep], cand: FiniteSep) -> bool {
    if sys.covers(&[cand.a]) {
        return true;
    }
    for (i, &t) in chosen.iter().enumerate() {
        if !is_star(&[cand, t]) {
            continue;
        }
        if sys.covers(&[cand.a, t.a]) {
            return true;
        }
        for &u in &chosen[i + 1..] {
            if is_star(&[cand, t, u]) && sys.covers(&[cand.a, t.a, u.a]) {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinReport {
    pub tangles: usize,
    pub joins_checked: u64,
    pub violations: Vec<(FiniteSep, FiniteSep)>,
}

/// For members `(A, B)`, `(A′, B′)` of a tangle whose corner
/// `(A ∪ A′, B ∩ B′)` has order `< k`, checks that the corner is a member.
pub fn join_closure_check(g: &FiniteGraph, k: usize) -> Result<JoinReport> {
    let tangles = enumerate_tangles(g, k)?;
    let mut report = JoinReport {
        tangles: tangles.len(),
        joins_checked: 0,
        violations: Vec::new(),
    };
    for t in &tangles {
        let members: BTreeSet<FiniteSep> = t.seps.iter().copied().collect();
        for &s in &t.seps {
            for &u in &t.seps {
                let join = FiniteSep {
                    a: s.a | u.a,
                    b: s.b & u.b,
                };
                if (join.order() as usize) < k {
                    report.joins_checked += 1;
                    if !members.contains(&join) {
                        report.violations.push((s, u));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Smallest edge bitmask over all relabellings, for graphs up to 8 vertices.
pub fn canonical_form(g: &FiniteGraph) -> (usize, u64) {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    let pair_index = |u: usize, v: usize| {
        let (u, v) = (u.min(v), u.max(v));
        v * (v - 1) / 2 + u
    };
    loop {
        let code = g
            .edges()
            .iter()
            .fold(0u64, |m, &(u, v)| m | 1 << pair_index(perm[u], perm[v]));
        best = best.min(code);
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    (n, best)
}

/// Connected graphs on `1..=max_n` vertices, one per isomorphism class.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<FiniteGraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        for bits in 0u64..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = FiniteGraph::from_edges(n, &edges);
            if g.is_connected() && seen.insert(canonical_form(&g)) {
                out.push(g);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_separations() {
        let sys = SepSystem::new(&FiniteGraph::complete(2), 2).unwrap();
        // {∅,V}, {{a},V}, {{b},V}
        assert_eq!(sys.len(), 3);
        let p3 = SepSystem::new(&FiniteGraph::path(3), 2).unwrap();
        assert!(p3
            .pairs
            .iter()
            .any(|p| p.contains(&FiniteSep { a: 0b011, b: 0b110 })));
    }

    #[test]
    fn k2_tangle() {
        let g = FiniteGraph::complete(2);
        let sys = SepSystem::new(&g, 2).unwrap();
        let o = FiniteOrientation {
            k: 2,
            seps: vec![
                FiniteSep { a: 0, b: 3 },
                FiniteSep { a: 1, b: 3 },
                FiniteSep { a: 2, b: 3 },
            ],
        };
        assert!(is_rs_tangle(&sys, &o));
        assert!(is_consistent(&o.seps));
    }

    #[test]
    fn connected_graph_counts() {
        // 1, 1, 2, 6, 21 connected graphs on 1..=5 vertices
        assert_eq!(connected_graphs_up_to(4).len(), 1 + 1 + 2 + 6);
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let g = FiniteGraph::path(4);
        assert_eq!(
            canonical_form(&g),
            canonical_form(&g.relabeled(&[2, 0, 3, 1]))
        );
        assert_ne!(canonical_form(&g), canonical_form(&FiniteGraph::cycle(4)));
    }

    #[test]
    fn resource_guard_triggers() {
        let sys = SepSystem::new(&FiniteGraph::grid(3, 3), 3).unwrap();
        assert!(matches!(
            enumerate_in(&sys, 10),
            Err(Error::ResourceGuard(_))
        ));
    }
}
