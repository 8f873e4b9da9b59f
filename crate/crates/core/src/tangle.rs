//! Tangles of order ℵ0 of schema graphs: end tangles and ultrafilter tangles.
//!
//! An end tangle orients every separation towards the side where its end
//! lives. An ultrafilter tangle is determined by a non-principal ultrafilter
//! on the copies of one family piece, viewed at the piece's hubs: every
//! separation whose separator contains the hubs is oriented by asking the
//! ultrafilter about the copies on its `B` side, and every other separation
//! towards the component holding all untouched copies.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::components::{components, ComponentRef, ComponentSet, Selection};
use crate::ends::{end_classes, EndClass, EndRep};
use crate::error::{Error, Result};
use crate::schema::{Local, SchemaRef, Vertex};
use crate::semilinear::SemilinearSet;
use crate::separation::{copies_inside, Separation};
use crate::symset::SymVertexSet;
use crate::ultrafilter::{CommitLog, LimitFamily, Policy, UfKind, UltrafilterHandle};

#[derive(Clone, Debug)]
pub enum Tangle {
    End {
        schema: SchemaRef,
        end: EndRep,
    },
    Uf {
        schema: SchemaRef,
        fam: u32,
        piece: u32,
        log: Arc<CommitLog>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangleKind {
    End,
    Ultrafilter,
}

impl TangleKind {
    pub fn text(self) -> &'static str {
        match self {
            TangleKind::End => "end",
            TangleKind::Ultrafilter => "ultrafilter",
        }
    }
}

pub(crate) fn hub_set(schema: &crate::schema::Schema, fam: u32, piece: u32) -> BTreeSet<Vertex> {
    schema.families[fam as usize].pieces[piece as usize]
        .hubs
        .iter()
        .map(|&h| Vertex::Top(Local::V(h)))
        .collect()
}

fn piece_label(schema: &crate::schema::Schema, fam: u32, piece: u32) -> String {
    let name = &schema.families[fam as usize].name;
    if piece == 0 {
        name.clone()
    } else {
        format!("{name}#{piece}")
    }
}

impl Tangle {
    pub fn end(schema: &SchemaRef, end: EndRep) -> Self {
        Tangle::End {
            schema: schema.clone(),
            end,
        }
    }

    /// A fresh ultrafilter tangle on the copies of a piece.
    pub fn ultrafilter(schema: &SchemaRef, fam: u32, piece: u32, policy: Policy) -> Result<Self> {
        let f = schema
            .families
            .get(fam as usize)
            .ok_or_else(|| Error::Precondition(format!("no family {fam}")))?;
        if piece as usize >= f.pieces.len() {
            return Err(Error::Precondition(format!(
                "family {} has no piece {piece}",
                f.name
            )));
        }
        Ok(Tangle::Uf {
            schema: schema.clone(),
            fam,
            piece,
            log: Arc::new(CommitLog::new(fam, piece, policy)),
        })
    }

    pub fn schema(&self) -> &SchemaRef {
        match self {
            Tangle::End { schema, .. } | Tangle::Uf { schema, .. } => schema,
        }
    }

    pub fn kind(&self) -> TangleKind {
        match self {
            Tangle::End { .. } => TangleKind::End,
            Tangle::Uf { .. } => TangleKind::Ultrafilter,
        }
    }

    /// `end:R`, `end:legs[3].t`, `uf:L`, `uf:L#1:seed=5`.
    pub fn id(&self) -> String {
        match self {
            Tangle::End { schema, end } => format!("end:{}", end.text(schema)),
            Tangle::Uf {
                schema,
                fam,
                piece,
                log,
            } => {
                let base = format!("uf:{}", piece_label(schema, *fam, *piece));
                match log.policy() {
                    Policy::Canonical => base,
                    Policy::Seeded(s) => format!("{base}:seed={s}"),
                }
            }
        }
    }

    pub fn parse_id(schema: &SchemaRef, text: &str) -> Result<Self> {
        let bad = || Error::Syntax(format!("bad tangle id `{text}`"));
        if let Some(rest) = text.strip_prefix("end:") {
            return Ok(Tangle::end(schema, EndRep::parse(schema, rest)?));
        }
        let rest = text.strip_prefix("uf:").ok_or_else(bad)?;
        let (label, policy) = match rest.split_once(":seed=") {
            Some((l, s)) => (l, Policy::Seeded(s.parse().map_err(|_| bad())?)),
            None => (rest, Policy::Canonical),
        };
        for (f, fam) in schema.families.iter().enumerate() {
            for p in 0..fam.pieces.len() as u32 {
                if piece_label(schema, f as u32, p) == label {
                    return Tangle::ultrafilter(schema, f as u32, p, policy);
                }
            }
        }
        Err(Error::UnknownVertex(format!("no family piece `{label}`")))
    }

    /// The compatible family of ultrafilters this tangle induces.
    pub fn limit(&self) -> Result<LimitFamily> {
        match self {
            Tangle::End { schema, end } => Ok(LimitFamily::FromEnd {
                schema: schema.clone(),
                end: *end,
            }),
            Tangle::Uf {
                schema,
                fam,
                piece,
                log,
            } => {
                let at = components(schema, &hub_set(schema, *fam, *piece))?;
                Ok(LimitFamily::FromLazy(UltrafilterHandle::lazy(
                    at,
                    log.clone(),
                )?))
            }
        }
    }

    /// The tangle whose orientations are read off a compatible family.
    pub fn from_limit(limit: &LimitFamily) -> Self {
        match limit {
            LimitFamily::FromEnd { schema, end } => Tangle::end(schema, *end),
            LimitFamily::FromLazy(h) => {
                let log = h.log().expect("lazy seed").clone();
                Tangle::Uf {
                    schema: h.comps().schema().clone(),
                    fam: log.fam(),
                    piece: log.piece(),
                    log,
                }
            }
        }
    }

    /// The ultrafilter on the components of `G - X` induced by the tangle.
    pub fn induced_uf(&self, x: &BTreeSet<Vertex>) -> Result<UltrafilterHandle> {
        self.limit()?.eval(x)
    }

    /// Whether `s` belongs to the tangle, decided at the separator of `s`.
    pub fn contains(&self, s: &Separation) -> bool {
        let comps = s.comps();
        match self {
            Tangle::End { end, .. } => s.to_b().contains(end.locate(comps)),
            Tangle::Uf {
                schema,
                fam,
                piece,
                log,
            } => match comps.class_desc(*fam, *piece) {
                Some(desc) => log.decide(&s.to_b().class_indices(desc)),
                None => {
                    let copy = SemilinearSet::min(&comps.touched_copies(*fam).complement())
                        .expect("cofinite");
                    let at = schema.families[*fam as usize].piece_rep(*piece);
                    let r = comps
                        .locate(&Vertex::Fam {
                            fam: *fam,
                            copy,
                            at,
                        })
                        .expect("untouched copy");
                    s.to_b().contains(r)
                }
            },
        }
    }

    /// `s` or its inverse, whichever the tangle contains.
    pub fn orient(&self, s: &Separation) -> Separation {
        if self.contains(s) {
            s.clone()
        } else {
            s.inverse()
        }
    }

    /// Membership decided from the vertex sets alone: an end tangle contains
    /// `(A, B)` when `B` holds a tail of the end's ray or infinitely many
    /// vertices of its clique; an ultrafilter tangle when the copies lying
    /// in `B ∖ A` form a member of its ultrafilter.
    pub fn contains_by_sides(&self, s: &Separation) -> bool {
        let b = s.b();
        match self {
            Tangle::End { end, .. } => match *end {
                EndRep::Ray(r) => b
                    .top
                    .rays
                    .get(&(r, 0))
                    .is_some_and(SemilinearSet::is_cofinite),
                EndRep::PatternRay { fam, ray, copy } => b
                    .fams
                    .get(&fam)
                    .and_then(|part| part.locals_at(copy))
                    .and_then(|l| l.rays.get(&(ray, 0)))
                    .is_some_and(SemilinearSet::is_cofinite),
                EndRep::Clique(q) => b.cliques.get(&q).is_some_and(|i| !i.is_finite()),
            },
            Tangle::Uf {
                schema,
                fam,
                piece,
                log,
            } => log.decide(&copies_inside(&b.minus(s.a()), schema, *fam, *piece)),
        }
    }

    /// The least finite set at which the induced ultrafilter is
    /// non-principal: the hubs of the piece.
    pub fn minimal_witness(&self) -> Result<BTreeSet<Vertex>> {
        match self {
            Tangle::Uf {
                schema, fam, piece, ..
            } => Ok(hub_set(schema, *fam, *piece)),
            Tangle::End { .. } => Err(Error::Precondition("end tangles have no witness".into())),
        }
    }

    /// Separators at which some family's copies fall apart, plus the empty
    /// set: the only places a non-principal induced ultrafilter can occur,
    /// up to adding vertices.
    pub fn witness_candidates(schema: &SchemaRef) -> Vec<BTreeSet<Vertex>> {
        let mut out = vec![BTreeSet::new()];
        for (f, fam) in schema.families.iter().enumerate() {
            for p in 0..fam.pieces.len() as u32 {
                out.push(hub_set(schema, f as u32, p));
            }
        }
        for c in &schema.cliques {
            out.push(c.attach.iter().map(|&h| Vertex::Top(Local::V(h))).collect());
        }
        out.sort();
        out.dedup();
        out
    }

    /// End or ultrafilter tangle, by whether any induced ultrafilter at a
    /// witness candidate (or one of `extra`) is non-principal.
    pub fn classify(&self, extra: &[BTreeSet<Vertex>]) -> Result<TangleKind> {
        let limit = self.limit()?;
        for x in Self::witness_candidates(self.schema()).iter().chain(extra) {
            if !limit.eval(x)?.is_principal() {
                return Ok(TangleKind::Ultrafilter);
            }
        }
        Ok(TangleKind::End)
    }

    /// For an end tangle, the component of `G - X` it points to.
    pub fn direction(&self, x: &BTreeSet<Vertex>) -> Result<(Arc<ComponentSet>, ComponentRef)> {
        match self {
            Tangle::End { schema, end } => {
                let comps = components(schema, x)?;
                let r = end.locate(&comps);
                Ok((comps, r))
            }
            Tangle::Uf { .. } => Err(Error::Precondition(
                "ultrafilter tangles have no direction".into(),
            )),
        }
    }

    /// `⋂ B` over all `(A, B)` in the tangle.
    pub fn kernel(&self) -> SymVertexSet {
        match self {
            Tangle::End {
                end: EndRep::Clique(q),
                schema,
            } => {
                let clique = &schema.cliques[*q as usize];
                let mut k = SymVertexSet::clique_part(*q, SemilinearSet::naturals());
                for &h in &clique.attach {
                    k.insert(Vertex::Top(Local::V(h)));
                }
                k
            }
            Tangle::End { .. } => SymVertexSet::empty(),
            Tangle::Uf {
                schema, fam, piece, ..
            } => SymVertexSet::from_vertices(&hub_set(schema, *fam, *piece)),
        }
    }

    pub fn is_closed(&self) -> bool {
        !self.kernel().is_finite()
    }

    /// A separation in the tangle with `v` strictly on its small side, or
    /// `None` when `v` lies in the kernel.
    pub fn kernel_witness(&self, v: &Vertex) -> Result<Option<Separation>> {
        if self.kernel().contains(v) {
            return Ok(None);
        }
        let schema = self.schema();
        let x: BTreeSet<Vertex> = match self {
            Tangle::Uf { fam, piece, .. } => hub_set(schema, *fam, *piece),
            Tangle::End {
                end: EndRep::Clique(q),
                ..
            } => schema.cliques[*q as usize]
                .attach
                .iter()
                .map(|&h| Vertex::Top(Local::V(h)))
                .collect(),
            Tangle::End {
                end: EndRep::Ray(r),
                ..
            } => {
                let pos = match *v {
                    Vertex::Top(Local::R { ray, pos, .. }) if ray == *r => pos + 1,
                    _ => 0,
                };
                BTreeSet::from([Vertex::Top(Local::R {
                    ray: *r,
                    pos,
                    depth: 0,
                })])
            }
            Tangle::End {
                end: EndRep::PatternRay { fam, ray, copy },
                ..
            } => {
                let pos = match *v {
                    Vertex::Fam {
                        fam: f,
                        copy: c,
                        at: Local::R { ray: r, pos, .. },
                    } if f == *fam && c == *copy && r == *ray => pos + 1,
                    _ => 0,
                };
                BTreeSet::from([Vertex::Fam {
                    fam: *fam,
                    copy: *copy,
                    at: Local::R {
                        ray: *ray,
                        pos,
                        depth: 0,
                    },
                }])
            }
        };
        let comps = components(schema, &x)?;
        let sep = match self {
            Tangle::Uf { .. } => {
                let cv = comps
                    .locate(v)
                    .expect("vertex outside the kernel avoids the hubs");
                Separation::new(comps.clone(), comps.complement(&comps.single(cv)))
            }
            Tangle::End { end, .. } => {
                let r = end.locate(&comps);
                Separation::new(comps.clone(), comps.single(r))
            }
        };
        debug_assert!(self.contains(&sep));
        Ok(Some(sep))
    }

    pub fn text(&self) -> String {
        self.id()
    }
}

/// One class of ultrafilter tangles: those living on the copies of a family
/// piece, all with the piece's hubs as least witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UfClass {
    pub fam: u32,
    pub piece: u32,
    pub witness: BTreeSet<Vertex>,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub ends: Vec<EndClass>,
    pub uf_classes: Vec<UfClass>,
}

impl Census {
    pub fn is_empty(&self) -> bool {
        self.ends.is_empty() && self.uf_classes.is_empty()
    }
}

pub fn census(schema: &SchemaRef) -> Census {
    let mut uf_classes = Vec::new();
    for (f, fam) in schema.families.iter().enumerate() {
        for p in 0..fam.pieces.len() as u32 {
            uf_classes.push(UfClass {
                fam: f as u32,
                piece: p,
                witness: hub_set(schema, f as u32, p),
            });
        }
    }
    Census {
        ends: end_classes(schema),
        uf_classes,
    }
}

/// One representative tangle per census entry; per-copy end classes are
/// represented by copies 0 and 1.
pub fn representative_tangles(schema: &SchemaRef, policy: Policy) -> Vec<Tangle> {
    let c = census(schema);
    let mut out = Vec::new();
    for class in c.ends {
        match class {
            EndClass::Single(e) => out.push(Tangle::end(schema, e)),
            EndClass::PerCopy { fam, ray } => {
                for copy in 0..2 {
                    out.push(Tangle::end(schema, EndRep::PatternRay { fam, ray, copy }));
                }
            }
        }
    }
    for u in c.uf_classes {
        out.push(Tangle::ultrafilter(schema, u.fam, u.piece, policy).expect("census piece exists"));
    }
    out
}

/// The selection `{C}` at `X` viewed as a separation `(V ∖ C, X ∪ C)`.
pub fn towards(comps: &Arc<ComponentSet>, r: ComponentRef) -> Separation {
    Separation::new(comps.clone(), comps.single(r))
}

/// The separation `(X ∪ ⋃(C_X ∖ 𝒞), X ∪ ⋃𝒞)`.
pub fn towards_all(comps: &Arc<ComponentSet>, sel: &Selection) -> Separation {
    Separation::new(comps.clone(), sel.clone())
}

/// Whether a lazily decided handle is the one an ultrafilter tangle induces.
pub fn shares_log(h: &UltrafilterHandle, t: &Tangle) -> bool {
    match (h.kind(), t) {
        (UfKind::Lazy { log, .. }, Tangle::Uf { log: l2, .. }) => Arc::ptr_eq(log, l2),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::find_schema;

    fn sep(schema: &SchemaRef, text: &str) -> Separation {
        Separation::parse(schema, text).unwrap()
    }

    #[test]
    fn ray_end_points_to_the_tail() {
        let s = find_schema("RAY").unwrap();
        let t = Tangle::end(&s, EndRep::Ray(0));
        let toward_tail = sep(&s, "sep X={R[5]} B={@R[6]}");
        assert!(t.contains(&toward_tail));
        assert!(!t.contains(&toward_tail.inverse()));
        let small = sep(&s, "sep X={} B={@R[0]}");
        assert_eq!(t.orient(&small), small);
        assert!(t.kernel().is_empty());
        assert!(!t.is_closed());
    }

    #[test]
    fn spider_ultrafilter_orients_by_its_log() {
        let s = find_schema("SPIDER").unwrap();
        let t = Tangle::parse_id(&s, "uf:legs").unwrap();
        let evens = sep(&s, "sep X={c} B={legs{0+2n}}");
        assert!(t.contains(&evens));
        assert!(!t.contains(&evens.inverse()));
        assert_eq!(
            t.minimal_witness().unwrap(),
            s.parse_vertex_list("c").unwrap()
        );
        assert_eq!(t.classify(&[]).unwrap(), TangleKind::Ultrafilter);
        assert!(!t.is_closed());
    }

    #[test]
    fn principal_seed_at_a_leg_gives_its_end() {
        let s = find_schema("SPIDER").unwrap();
        let at_c = components(&s, &s.parse_vertex_list("c").unwrap()).unwrap();
        let leg3 = at_c.locate(&s.parse_vertex("legs[3].h").unwrap()).unwrap();
        let lim = crate::ultrafilter::limit_from(
            &UltrafilterHandle::principal(at_c, leg3),
            Policy::Canonical,
        )
        .unwrap();
        let t = Tangle::from_limit(&lim);
        assert_eq!(t.id(), "end:legs[3].t");
        assert_eq!(t.classify(&[]).unwrap(), TangleKind::End);
    }

    #[test]
    fn clique_end_is_closed() {
        let s = find_schema("CLIQRAY").unwrap();
        let t = Tangle::parse_id(&s, "end:K").unwrap();
        assert!(t.is_closed());
        assert!(t.kernel().contains(&s.parse_vertex("z").unwrap()));
        let ray_end = Tangle::parse_id(&s, "end:R").unwrap();
        assert!(!ray_end.is_closed());
    }

    #[test]
    fn ids_round_trip() {
        for entry in crate::schema::suite_schemas() {
            let s = entry.schema();
            for t in representative_tangles(&s, Policy::Seeded(3)) {
                assert_eq!(Tangle::parse_id(&s, &t.id()).unwrap().id(), t.id());
            }
        }
    }

    #[test]
    fn kernel_witnesses_cut_off_their_vertex() {
        let s = find_schema("COMB").unwrap();
        let t = Tangle::end(&s, EndRep::Ray(0));
        for v in s.truncate(5).vertices {
            let w = t.kernel_witness(&v).unwrap().unwrap();
            assert!(t.contains(&w));
            assert!(w.a().contains(&v) && !w.b().contains(&v));
        }
    }

    #[test]
    fn census_counts() {
        let count = |name: &str| {
            let c = census(&find_schema(name).unwrap());
            (c.ends.len(), c.uf_classes.len())
        };
        assert_eq!(count("RAY"), (1, 0));
        assert_eq!(count("DRAY"), (2, 0));
        assert_eq!(count("STAR"), (0, 1));
        assert_eq!(count("SPIDER"), (1, 1));
        assert_eq!(count("CLIQ"), (1, 0));
    }
}
