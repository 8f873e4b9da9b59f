//! Vertex sets of schema graphs that may be infinite.
//!
//! Every set is a finite union of "uniform" parts: explicit core vertices,
//! semilinear position sets on each ray level, per-family maps from copy
//! indices to pattern-local sets (piecewise constant on semilinear index
//! classes), and semilinear index sets on each clique.

use std::collections::{BTreeMap, BTreeSet};

use crate::schema::{Body, Family, Local, Schema, Vertex};
use crate::semilinear::SemilinearSet;

/// A subset of the vertices of one body (the core or a family pattern).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalSet {
    pub verts: BTreeSet<u32>,
    /// Positions included on each `(ray, depth)` level.
    pub rays: BTreeMap<(u32, u32), SemilinearSet>,
}

impl LocalSet {
    pub fn full(body: &Body) -> Self {
        let mut s = LocalSet {
            verts: (0..body.vertices.len() as u32).collect(),
            ..Default::default()
        };
        for (r, decl) in body.rays.iter().enumerate() {
            for d in 0..=decl.teeth {
                s.rays.insert((r as u32, d), SemilinearSet::naturals());
            }
        }
        s
    }

    /// All vertices of one piece of a family pattern.
    pub fn piece(fam: &Family, piece: u32) -> Self {
        let p = &fam.pieces[piece as usize];
        let mut s = LocalSet {
            verts: p.verts.iter().copied().collect(),
            ..Default::default()
        };
        for &r in &p.rays {
            for d in 0..=fam.body.rays[r as usize].teeth {
                s.rays.insert((r, d), SemilinearSet::naturals());
            }
        }
        s
    }

    pub fn single(l: Local) -> Self {
        let mut s = LocalSet::default();
        s.insert(l);
        s
    }

    pub fn insert(&mut self, l: Local) {
        match l {
            Local::V(i) => {
                self.verts.insert(i);
            }
            Local::R { ray, pos, depth } => {
                let e = self.rays.entry((ray, depth)).or_default();
                *e = e.union(&SemilinearSet::singleton(pos));
            }
        }
    }

    /// All positions from `from` onwards on every level of `ray`.
    pub fn ray_tail(ray: u32, teeth: u32, from: u64) -> Self {
        let mut s = LocalSet::default();
        for d in 0..=teeth {
            s.rays.insert((ray, d), SemilinearSet::at_least(from));
        }
        s
    }

    pub fn contains(&self, l: Local) -> bool {
        match l {
            Local::V(i) => self.verts.contains(&i),
            Local::R { ray, pos, depth } => self
                .rays
                .get(&(ray, depth))
                .is_some_and(|s| s.contains(pos)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty() && self.rays.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rays.values().all(SemilinearSet::is_finite)
    }

    fn combine(
        &self,
        other: &Self,
        vop: impl Fn(bool, bool) -> bool,
        sop: impl Fn(&SemilinearSet, &SemilinearSet) -> SemilinearSet,
    ) -> Self {
        let verts = self
            .verts
            .union(&other.verts)
            .copied()
            .filter(|v| vop(self.verts.contains(v), other.verts.contains(v)))
            .collect();
        let empty = SemilinearSet::empty();
        let keys: BTreeSet<&(u32, u32)> = self.rays.keys().chain(other.rays.keys()).collect();
        let rays = keys
            .into_iter()
            .filter_map(|k| {
                let s = sop(
                    self.rays.get(k).unwrap_or(&empty),
                    other.rays.get(k).unwrap_or(&empty),
                );
                (!s.is_empty()).then_some((*k, s))
            })
            .collect();
        LocalSet { verts, rays }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b, SemilinearSet::union)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b, SemilinearSet::intersect)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b, SemilinearSet::minus)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.minus(other).is_empty()
    }

    pub fn min_local(&self) -> Option<Local> {
        if let Some(&v) = self.verts.iter().next() {
            return Some(Local::V(v));
        }
        self.rays
            .iter()
            .filter_map(|(&(ray, depth), s)| s.min().map(|pos| Local::R { ray, pos, depth }))
            .min()
    }

    /// Members, for finite sets.
    pub fn locals(&self) -> Option<Vec<Local>> {
        if !self.is_finite() {
            return None;
        }
        let mut out: Vec<Local> = self.verts.iter().map(|&v| Local::V(v)).collect();
        for (&(ray, depth), s) in &self.rays {
            out.extend(s.iter().map(|pos| Local::R { ray, pos, depth }));
        }
        out.sort();
        Some(out)
    }

    pub fn len(&self) -> Option<u64> {
        self.rays
            .values()
            .try_fold(self.verts.len() as u64, |acc, s| s.len().map(|n| acc + n))
    }

    fn describe(&self, body: &Body) -> String {
        let mut items: Vec<String> = self
            .verts
            .iter()
            .map(|&v| body.vertices[v as usize].clone())
            .collect();
        for (&(ray, depth), s) in &self.rays {
            let name = &body.rays[ray as usize].name;
            if depth == 0 {
                items.push(format!("{name}[{s}]"));
            } else {
                items.push(format!("{name}[{s}].{depth}"));
            }
        }
        items.join(",")
    }
}

/// Copy indices mapped to the part of the pattern included for them.
/// Canonical: index sets pairwise disjoint and non-empty, local sets distinct
/// and non-empty, entries sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamPart(pub Vec<(LocalSet, SemilinearSet)>);

impl FamPart {
    pub fn uniform(locals: LocalSet, indices: SemilinearSet) -> Self {
        if locals.is_empty() || indices.is_empty() {
            FamPart::default()
        } else {
            FamPart(vec![(locals, indices)])
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|(l, i)| i.is_finite() && l.is_finite())
    }

    pub fn locals_at(&self, copy: u64) -> Option<&LocalSet> {
        self.0
            .iter()
            .find(|(_, i)| i.contains(copy))
            .map(|(l, _)| l)
    }

    fn combine(&self, other: &Self, op: impl Fn(&LocalSet, &LocalSet) -> LocalSet) -> Self {
        let with_rest = |p: &FamPart| {
            let covered =
                p.0.iter()
                    .fold(SemilinearSet::empty(), |acc, (_, i)| acc.union(i));
            let mut items = p.0.clone();
            let rest = covered.complement();
            if !rest.is_empty() {
                items.push((LocalSet::default(), rest));
            }
            items
        };
        let (xs, ys) = (with_rest(self), with_rest(other));
        let mut merged: BTreeMap<LocalSet, SemilinearSet> = BTreeMap::new();
        for (la, ia) in &xs {
            for (lb, ib) in &ys {
                let idx = ia.intersect(ib);
                if idx.is_empty() {
                    continue;
                }
                let l = op(la, lb);
                if l.is_empty() {
                    continue;
                }
                let e = merged.entry(l).or_default();
                *e = e.union(&idx);
            }
        }
        FamPart(merged.into_iter().collect())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymVertexSet {
    pub top: LocalSet,
    pub fams: BTreeMap<u32, FamPart>,
    pub cliques: BTreeMap<u32, SemilinearSet>,
}

impl SymVertexSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn universe(schema: &Schema) -> Self {
        let mut s = SymVertexSet {
            top: LocalSet::full(&schema.top),
            ..Default::default()
        };
        for (f, fam) in schema.families.iter().enumerate() {
            s.fams.insert(
                f as u32,
                FamPart::uniform(LocalSet::full(&fam.body), SemilinearSet::naturals()),
            );
        }
        for q in 0..schema.cliques.len() {
            s.cliques.insert(q as u32, SemilinearSet::naturals());
        }
        s
    }

    pub fn from_vertices<'a>(vs: impl IntoIterator<Item = &'a Vertex>) -> Self {
        let mut s = Self::default();
        for v in vs {
            s.insert(*v);
        }
        s
    }

    pub fn singleton(v: Vertex) -> Self {
        Self::from_vertices([&v])
    }

    pub fn insert(&mut self, v: Vertex) {
        *self = self.union(&Self::raw_single(v));
    }

    fn raw_single(v: Vertex) -> Self {
        let mut s = Self::default();
        match v {
            Vertex::Top(l) => s.top.insert(l),
            Vertex::Fam { fam, copy, at } => {
                s.fams.insert(
                    fam,
                    FamPart::uniform(LocalSet::single(at), SemilinearSet::singleton(copy)),
                );
            }
            Vertex::Clique { clique, idx } => {
                s.cliques.insert(clique, SemilinearSet::singleton(idx));
            }
        }
        s
    }

    /// Copies `indices` of family `fam`, each restricted to `locals`.
    pub fn family_part(fam: u32, locals: LocalSet, indices: SemilinearSet) -> Self {
        let mut s = Self::default();
        let part = FamPart::uniform(locals, indices);
        if !part.is_empty() {
            s.fams.insert(fam, part);
        }
        s
    }

    pub fn clique_part(clique: u32, indices: SemilinearSet) -> Self {
        let mut s = Self::default();
        if !indices.is_empty() {
            s.cliques.insert(clique, indices);
        }
        s
    }

    pub fn top_part(locals: LocalSet) -> Self {
        SymVertexSet {
            top: locals,
            ..Default::default()
        }
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        match *v {
            Vertex::Top(l) => self.top.contains(l),
            Vertex::Fam { fam, copy, at } => self
                .fams
                .get(&fam)
                .and_then(|p| p.locals_at(copy))
                .is_some_and(|l| l.contains(at)),
            Vertex::Clique { clique, idx } => {
                self.cliques.get(&clique).is_some_and(|s| s.contains(idx))
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.top.is_empty() && self.fams.is_empty() && self.cliques.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.top.is_finite()
            && self.fams.values().all(FamPart::is_finite)
            && self.cliques.values().all(SemilinearSet::is_finite)
    }

    fn combine(
        &self,
        other: &Self,
        lop: impl Fn(&LocalSet, &LocalSet) -> LocalSet,
        sop: impl Fn(&SemilinearSet, &SemilinearSet) -> SemilinearSet,
    ) -> Self {
        let top = lop(&self.top, &other.top);
        let empty_part = FamPart::default();
        let fam_keys: BTreeSet<u32> = self.fams.keys().chain(other.fams.keys()).copied().collect();
        let fams = fam_keys
            .into_iter()
            .filter_map(|f| {
                let p = self
                    .fams
                    .get(&f)
                    .unwrap_or(&empty_part)
                    .combine(other.fams.get(&f).unwrap_or(&empty_part), &lop);
                (!p.is_empty()).then_some((f, p))
            })
            .collect();
        let empty = SemilinearSet::empty();
        let q_keys: BTreeSet<u32> = self
            .cliques
            .keys()
            .chain(other.cliques.keys())
            .copied()
            .collect();
        let cliques = q_keys
            .into_iter()
            .filter_map(|q| {
                let s = sop(
                    self.cliques.get(&q).unwrap_or(&empty),
                    other.cliques.get(&q).unwrap_or(&empty),
                );
                (!s.is_empty()).then_some((q, s))
            })
            .collect();
        SymVertexSet { top, fams, cliques }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, LocalSet::union, SemilinearSet::union)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, LocalSet::intersect, SemilinearSet::intersect)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.combine(other, LocalSet::minus, SemilinearSet::minus)
    }

    pub fn complement(&self, schema: &Schema) -> Self {
        Self::universe(schema).minus(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.minus(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }

    /// Least member in the derived vertex order.
    pub fn min_vertex(&self) -> Option<Vertex> {
        if let Some(l) = self.top.min_local() {
            return Some(Vertex::Top(l));
        }
        if let Some((&fam, part)) = self.fams.iter().next() {
            return part
                .0
                .iter()
                .filter_map(|(l, i)| Some((i.min()?, l.min_local()?)))
                .min()
                .map(|(copy, at)| Vertex::Fam { fam, copy, at });
        }
        self.cliques
            .iter()
            .next()
            .and_then(|(&clique, s)| s.min().map(|idx| Vertex::Clique { clique, idx }))
    }

    /// Members in increasing order, for finite sets.
    pub fn vertices(&self) -> Option<Vec<Vertex>> {
        if !self.is_finite() {
            return None;
        }
        let mut out: Vec<Vertex> = self.top.locals()?.into_iter().map(Vertex::Top).collect();
        for (&fam, part) in &self.fams {
            for (l, i) in &part.0 {
                let locals = l.locals()?;
                for copy in i.iter() {
                    out.extend(locals.iter().map(|&at| Vertex::Fam { fam, copy, at }));
                }
            }
        }
        for (&clique, s) in &self.cliques {
            out.extend(s.iter().map(|idx| Vertex::Clique { clique, idx }));
        }
        out.sort();
        Some(out)
    }

    pub fn len(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        let mut n = self.top.len()?;
        for part in self.fams.values() {
            for (l, i) in &part.0 {
                n += l.len()? * i.len()?;
            }
        }
        for s in self.cliques.values() {
            n += s.len()?;
        }
        Some(n)
    }

    /// Human-readable description, e.g. `{c,R[{3+1n}],L[{0+2n}].{x},K[{0+1n}]}`.
    pub fn describe(&self, schema: &Schema) -> String {
        let mut items = Vec::new();
        let top = self.top.describe(&schema.top);
        if !top.is_empty() {
            items.push(top);
        }
        for (&f, part) in &self.fams {
            let fam = &schema.families[f as usize];
            for (l, i) in &part.0 {
                items.push(format!("{}[{}].{{{}}}", fam.name, i, l.describe(&fam.body)));
            }
        }
        for (&q, s) in &self.cliques {
            items.push(format!("{}[{}]", schema.cliques[q as usize].name, s));
        }
        format!("{{{}}}", items.join(","))
    }
}
