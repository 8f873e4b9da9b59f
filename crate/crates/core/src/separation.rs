//! Oriented separations of finite order in canonical form.
//!
//! A separation is stored as its separator `X` together with the collection
//! of components of `G - X` that lie on the `B` side. Both sides are cached as
//! symbolic vertex sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::components::{components, ComponentSet, Descriptor, Selection};
use crate::error::{Error, Result};
use crate::schema::{SchemaRef, Vertex};
use crate::semilinear::SemilinearSet;
use crate::symset::{LocalSet, SymVertexSet};

#[derive(Clone, Debug)]
pub struct Separation {
    comps: Arc<ComponentSet>,
    to_b: Selection,
    a: SymVertexSet,
    b: SymVertexSet,
}

impl PartialEq for Separation {
    fn eq(&self, other: &Self) -> bool {
        same_schema(self.schema(), other.schema())
            && self.separator() == other.separator()
            && self.to_b == other.to_b
    }
}

impl Eq for Separation {}

fn same_schema(a: &SchemaRef, b: &SchemaRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Indices `i` of family `fam` whose copy of piece `piece` lies inside `set`.
pub(crate) fn copies_inside(
    set: &SymVertexSet,
    schema: &crate::schema::Schema,
    fam: u32,
    piece: u32,
) -> SemilinearSet {
    let want = LocalSet::piece(&schema.families[fam as usize], piece);
    set.fams
        .get(&fam)
        .map(|part| {
            part.0
                .iter()
                .filter(|(l, _)| want.is_subset(l))
                .fold(SemilinearSet::empty(), |acc, (_, i)| acc.union(i))
        })
        .unwrap_or_default()
}

impl Separation {
    /// The separation with separator `X` whose `B ∖ A` is the union of `to_b`.
    pub fn new(comps: Arc<ComponentSet>, to_b: Selection) -> Self {
        let to_b = comps.clamp(&to_b);
        let xs = SymVertexSet::from_vertices(comps.separator());
        let b = xs.union(&comps.vertices(&to_b));
        let a = xs.union(&comps.vertices(&comps.complement(&to_b)));
        Separation { comps, to_b, a, b }
    }

    pub fn from_bipartition(
        schema: &SchemaRef,
        x: &BTreeSet<Vertex>,
        to_b: Selection,
    ) -> Result<Self> {
        Ok(Self::new(components(schema, x)?, to_b))
    }

    /// Canonical form of `(A, B)`, checking that it is a separation of
    /// finite order.
    pub fn from_sides(schema: &SchemaRef, a: &SymVertexSet, b: &SymVertexSet) -> Result<Self> {
        if a.union(b) != SymVertexSet::universe(schema) {
            return Err(Error::NotASeparation(
                "A ∪ B is not the whole vertex set".into(),
            ));
        }
        let x = a
            .intersect(b)
            .vertices()
            .ok_or_else(|| Error::NotASeparation("A ∩ B is infinite".into()))?;
        let comps = components(schema, &x.into_iter().collect())?;
        let b_only = b.minus(a);
        let a_only = a.minus(b);
        let mut to_b = Selection::default();
        for (d, desc) in comps.descriptors().iter().enumerate() {
            match desc {
                Descriptor::Concrete(s) => {
                    if s.is_subset(&b_only) {
                        to_b.concrete.insert(d);
                    } else if !s.is_subset(&a_only) {
                        return Err(Error::NotASeparation(format!(
                            "component {} meets both sides",
                            comps.descriptor_text(d)
                        )));
                    }
                }
                Descriptor::Class {
                    fam,
                    piece,
                    indices,
                } => {
                    let jb = copies_inside(&b_only, schema, *fam, *piece).intersect(indices);
                    let ja = copies_inside(&a_only, schema, *fam, *piece).intersect(indices);
                    if &ja.union(&jb) != indices {
                        return Err(Error::NotASeparation(format!(
                            "some component of {} meets both sides",
                            comps.descriptor_text(d)
                        )));
                    }
                    if !jb.is_empty() {
                        to_b.classes.insert(d, jb);
                    }
                }
            }
        }
        Ok(Self::new(comps, to_b))
    }

    /// Parses `sep X={...} B={...}`.
    pub fn parse(schema: &SchemaRef, text: &str) -> Result<Self> {
        let bad = || {
            Error::Syntax(format!(
                "expected `sep X={{...}} B={{...}}`, got `{}`",
                text.trim()
            ))
        };
        let rest = text
            .trim()
            .strip_prefix("sep")
            .ok_or_else(bad)?
            .trim_start();
        let rest = rest.strip_prefix("X=").ok_or_else(bad)?;
        let close = rest.find('}').ok_or_else(bad)?;
        let x = schema.parse_vertex_list(&rest[..=close])?;
        let rest = rest[close + 1..]
            .trim_start()
            .strip_prefix("B=")
            .ok_or_else(bad)?;
        let comps = components(schema, &x)?;
        let to_b = comps.parse_selection(rest)?;
        Ok(Self::new(comps, to_b))
    }

    pub fn schema(&self) -> &SchemaRef {
        self.comps.schema()
    }

    pub fn comps(&self) -> &Arc<ComponentSet> {
        &self.comps
    }

    pub fn separator(&self) -> &BTreeSet<Vertex> {
        self.comps.separator()
    }

    pub fn to_b(&self) -> &Selection {
        &self.to_b
    }

    pub fn to_a(&self) -> Selection {
        self.comps.complement(&self.to_b)
    }

    pub fn a(&self) -> &SymVertexSet {
        &self.a
    }

    pub fn b(&self) -> &SymVertexSet {
        &self.b
    }

    pub fn order(&self) -> usize {
        self.separator().len()
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.comps.clone(), self.to_a())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_schema(self.schema(), other.schema()) {
            Ok(())
        } else {
            Err(Error::MismatchedGraphs)
        }
    }

    /// `(A, B) ≤ (C, D)` iff `A ⊆ C` and `B ⊇ D`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.a.is_subset(&other.a) && other.b.is_subset(&self.b))
    }

    pub fn lt(&self, other: &Self) -> Result<bool> {
        Ok(self != other && self.leq(other)?)
    }

    /// `(A ∪ A′, B ∩ B′)`.
    pub fn corner_join(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Self::from_sides(
            self.schema(),
            &self.a.union(&other.a),
            &self.b.intersect(&other.b),
        )
    }

    /// `B = V`.
    pub fn is_small(&self) -> bool {
        self.to_a().is_empty()
    }

    /// `(A ∩ Z, B ∩ Z)`.
    pub fn restrict(&self, z: &BTreeSet<Vertex>) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
        let a = z.iter().filter(|v| self.a.contains(v)).copied().collect();
        let b = z.iter().filter(|v| self.b.contains(v)).copied().collect();
        (a, b)
    }

    pub fn agrees_on(&self, other: &Self, z: &BTreeSet<Vertex>) -> bool {
        self.restrict(z) == other.restrict(z)
    }

    pub fn text(&self) -> String {
        format!(
            "sep X={} B={}",
            self.schema().vertex_list_text(self.separator()),
            self.comps.selection_text(&self.to_b)
        )
    }
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// Distinct members pairwise satisfy `(A, B) ≤ (B′, A′)`.
pub fn is_star(seps: &[Separation]) -> Result<bool> {
    for (i, s) in seps.iter().enumerate() {
        for t in &seps[i + 1..] {
            if s != t && !s.leq(&t.inverse())? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// No distinct `(B, A)`, `(C, D)` in the set with `(A, B) < (C, D)`.
pub fn is_consistent(seps: &[Separation]) -> Result<bool> {
    for s in seps {
        let inv = s.inverse();
        for t in seps {
            if s != t && inv.lt(t)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(⋃ A_i, ⋂ B_i)`, the supremum of a finite star.
pub fn supremum(seps: &[Separation]) -> Result<Separation> {
    let first = seps
        .first()
        .ok_or_else(|| Error::Precondition("empty star".into()))?;
    let mut a = first.a().clone();
    let mut b = first.b().clone();
    for s in &seps[1..] {
        first.check_same(s)?;
        a = a.union(s.a());
        b = b.intersect(s.b());
    }
    Separation::from_sides(first.schema(), &a, &b)
}

/// `⋂ B_i` of a finite set of separations.
pub fn meet_of_b(seps: &[Separation]) -> SymVertexSet {
    let mut it = seps.iter();
    match it.next() {
        None => SymVertexSet::empty(),
        Some(first) => it.fold(first.b().clone(), |acc, s| acc.intersect(s.b())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FiniteGraph;
    use crate::schema::{find_schema, Schema};

    fn p3() -> SchemaRef {
        Arc::new(Schema::from_finite(
            "P3",
            &FiniteGraph::parse("v a\nv b\nv c\ne a b\ne b c\n").unwrap(),
        ))
    }

    fn sep(s: &SchemaRef, text: &str) -> Separation {
        Separation::parse(s, text).unwrap()
    }

    #[test]
    fn path_separations() {
        let s = p3();
        let ab_bc = sep(&s, "sep X={b} B={@c}");
        assert_eq!(ab_bc.order(), 1);
        assert_eq!(ab_bc.a().vertices().unwrap().len(), 2);
        let trivial = sep(&s, "sep X={} B={@a}");
        assert!(trivial.is_small());
        assert!(trivial.leq(&ab_bc).unwrap());
        let cb_ba = ab_bc.inverse();
        let join = ab_bc.corner_join(&cb_ba).unwrap();
        assert_eq!(
            join.b().vertices().unwrap(),
            vec![s.parse_vertex("b").unwrap()]
        );
        assert!(join.a().complement(&s).is_empty());
        assert!(is_star(&[ab_bc.clone(), cb_ba.clone()]).unwrap());
        assert!(!ab_bc.is_small());
    }

    #[test]
    fn pointing_away_is_inconsistent() {
        let s = p3();
        let small = sep(&s, "sep X={} B={@a}");
        let big = small.inverse();
        // an orientation pair on its own has no strictly smaller member
        assert!(is_consistent(&[small.clone(), big.clone()]).unwrap());
        let a_v = sep(&s, "sep X={a} B={@b}");
        assert!(small.lt(&a_v).unwrap());
        assert!(!is_consistent(&[big.clone(), a_v.clone()]).unwrap());
        assert!(is_consistent(&[small, a_v]).unwrap());
    }

    #[test]
    fn splitting_the_star_of_leaves() {
        let s = find_schema("STAR").unwrap();
        let even = sep(&s, "sep X={c} B={L{0+2n}}");
        assert_eq!(even.order(), 1);
        assert!(even.b().contains(&s.parse_vertex("L[4].x").unwrap()));
        assert!(!even.b().contains(&s.parse_vertex("L[5].x").unwrap()));
        assert_eq!(Separation::parse(&s, &even.text()).unwrap(), even);
        let round = Separation::from_sides(&s, even.a(), even.b()).unwrap();
        assert_eq!(round, even);
        assert_eq!(even.inverse().inverse(), even);
    }

    #[test]
    fn restriction_to_a_finite_set() {
        let s = find_schema("RAY").unwrap();
        let cut = sep(&s, "sep X={R[5]} B={@R[6]}");
        let z = s.parse_vertex_list("R[0], R[2]").unwrap();
        let (a, b) = cut.restrict(&z);
        assert_eq!(a, z);
        assert!(b.is_empty());
        assert_eq!(
            cut.restrict(&BTreeSet::new()),
            (BTreeSet::new(), BTreeSet::new())
        );
    }

    #[test]
    fn rejects_non_separations() {
        let s = find_schema("RAY").unwrap();
        let evens = {
            let mut l = LocalSet::default();
            l.rays.insert((0, 0), SemilinearSet::progression(0, 2));
            SymVertexSet::top_part(l)
        };
        let odds = evens.complement(&s);
        assert!(Separation::from_sides(&s, &evens, &odds).is_err());
        let all = SymVertexSet::universe(&s);
        assert!(Separation::from_sides(&s, &all, &all).is_err());
    }

    #[test]
    fn mismatched_graphs() {
        let a = sep(&find_schema("RAY").unwrap(), "sep X={} B={}");
        let b = sep(&p3(), "sep X={} B={}");
        assert_eq!(a.leq(&b), Err(Error::MismatchedGraphs));
    }
}
