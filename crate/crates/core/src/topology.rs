//! Basic open sets of the tangle compactification, finite subcover
//! extraction, and limit-point probes in the space of oriented separations.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::components::{components, ComponentRef, ComponentSet, Descriptor, Selection};
use crate::error::{Error, Result};
use crate::schema::{SchemaRef, Vertex};
use crate::separation::Separation;
use crate::tangle::Tangle;
use crate::ultrafilter::{
    limit_from, preimage_basic, CommitLog, LimitFamily, Policy, UltrafilterHandle,
};

#[derive(Clone, Debug)]
pub enum SpacePoint {
    Vertex(Vertex),
    /// An inner point of the edge `uv`, at parameter `t` strictly between 0
    /// and 1.
    EdgePoint(Vertex, Vertex, f64),
    Tangle(Tangle),
}

impl SpacePoint {
    pub fn text(&self, schema: &SchemaRef) -> String {
        match self {
            SpacePoint::Vertex(v) => schema.vertex_text(v),
            SpacePoint::EdgePoint(u, v, t) => {
                format!("{}-{}@{t}", schema.vertex_text(u), schema.vertex_text(v))
            }
            SpacePoint::Tangle(t) => t.id(),
        }
    }
}

/// The open set made of the components in `sel`, the inner points of edges
/// from `X` to them, and the tangles whose ultrafilter at `X` contains
/// `sel`.
#[derive(Clone, Debug)]
pub struct BasicOpen {
    pub comps: Arc<ComponentSet>,
    pub sel: Selection,
}

impl BasicOpen {
    pub fn new(comps: Arc<ComponentSet>, sel: Selection) -> Self {
        let sel = comps.clamp(&sel);
        BasicOpen { comps, sel }
    }

    pub fn parse(schema: &SchemaRef, text: &str) -> Result<Self> {
        let bad = || {
            Error::Syntax(format!(
                "expected `open X={{...}} C={{...}}`, got `{}`",
                text.trim()
            ))
        };
        let rest = text
            .trim()
            .strip_prefix("open")
            .ok_or_else(bad)?
            .trim_start();
        let rest = rest.strip_prefix("X=").ok_or_else(bad)?;
        let close = rest.find('}').ok_or_else(bad)?;
        let x = schema.parse_vertex_list(&rest[..=close])?;
        let rest = rest[close + 1..]
            .trim_start()
            .strip_prefix("C=")
            .ok_or_else(bad)?;
        let comps = components(schema, &x)?;
        let sel = comps.parse_selection(rest)?;
        Ok(Self::new(comps, sel))
    }

    pub fn separator(&self) -> &BTreeSet<Vertex> {
        self.comps.separator()
    }

    fn in_union(&self, v: &Vertex) -> bool {
        self.comps.locate(v).is_some_and(|r| self.sel.contains(r))
    }

    pub fn contains(&self, p: &SpacePoint) -> Result<bool> {
        match p {
            SpacePoint::Vertex(v) => Ok(self.in_union(v)),
            SpacePoint::EdgePoint(u, v, t) => {
                if !(*t > 0.0 && *t < 1.0) {
                    return Err(Error::Precondition(format!(
                        "edge parameter {t} is not inner"
                    )));
                }
                let x = self.separator();
                Ok((self.in_union(u) && (x.contains(v) || self.in_union(v)))
                    || (x.contains(u) && self.in_union(v)))
            }
            SpacePoint::Tangle(t) => Ok(t.induced_uf(self.separator())?.membership(&self.sel)),
        }
    }

    pub fn text(&self) -> String {
        format!(
            "open X={} C={}",
            self.comps.schema().vertex_list_text(self.separator()),
            self.comps.selection_text(&self.sel)
        )
    }
}

#[derive(Clone, Debug)]
pub enum CoverItem {
    Open(BasicOpen),
    /// The finite subgraph induced by a vertex set: its vertices and its
    /// edges with all their inner points.
    Piece(BTreeSet<Vertex>),
}

impl CoverItem {
    pub fn contains(&self, p: &SpacePoint) -> Result<bool> {
        match self {
            CoverItem::Open(o) => o.contains(p),
            CoverItem::Piece(f) => Ok(match p {
                SpacePoint::Vertex(v) => f.contains(v),
                SpacePoint::EdgePoint(u, v, _) => f.contains(u) && f.contains(v),
                SpacePoint::Tangle(_) => false,
            }),
        }
    }
}

/// Parses a cover file: `open X={...} C={...}` and `piece {...}` lines,
/// `#` comments.
pub fn parse_cover(schema: &SchemaRef, text: &str) -> Result<Vec<CoverItem>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let wrap = |e: Error| Error::parse(i + 1, e.to_string());
        if let Some(rest) = line.strip_prefix("piece") {
            out.push(CoverItem::Piece(
                schema.parse_vertex_list(rest).map_err(wrap)?,
            ));
        } else {
            out.push(CoverItem::Open(
                BasicOpen::parse(schema, line).map_err(wrap)?,
            ));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum Verdict {
    /// The cover has been rewritten at `X′`: the members of `rewritten`
    /// cover everything except the finite graph on `X′` and the leftover
    /// components, and that finite graph is covered too.
    Confirmed {
        comps: Arc<ComponentSet>,
        rewritten: Vec<Selection>,
        leftover: Selection,
    },
    /// A point of `|G|` in no cover member.
    Refuted { witness: SpacePoint },
}

impl Verdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verdict::Confirmed { .. })
    }
}

fn edges_of(schema: &SchemaRef, vs: &BTreeSet<Vertex>) -> Vec<(Vertex, Vertex)> {
    // Adjacency inside a finite vertex set, read off a truncation deep
    // enough to contain it.
    let depth = vs
        .iter()
        .map(crate::schema::Schema::depth_index)
        .max()
        .unwrap_or(0)
        + 2;
    let t = schema.truncate(depth);
    let mut out = Vec::new();
    for u in vs {
        for v in vs {
            if u < v {
                if let (Some(&i), Some(&j)) = (t.index.get(u), t.index.get(v)) {
                    if t.graph.adjacent(i, j) {
                        out.push((*u, *v));
                    }
                }
            }
        }
    }
    out
}

/// Decides whether a finite cover covers `|G|`, by pulling every open set
/// back to the union `X′` of all separators. Components of `G - X′` missed
/// by every pulled-back set are the leftover: if they form a finite graph,
/// the remaining points lie in the finite graph on `X′` and the leftover,
/// which is checked point by point; otherwise a tangle outside the cover is
/// built from an ultrafilter on the leftover.
pub fn extract_subcover(schema: &SchemaRef, cover: &[CoverItem]) -> Result<Verdict> {
    let opens: Vec<&BasicOpen> = cover
        .iter()
        .filter_map(|c| match c {
            CoverItem::Open(o) => Some(o),
            CoverItem::Piece(_) => None,
        })
        .collect();
    let x_prime: BTreeSet<Vertex> = opens
        .iter()
        .flat_map(|o| o.separator().iter().copied())
        .collect();
    let comps = components(schema, &x_prime)?;
    let mut rewritten = Vec::new();
    let mut covered = Selection::default();
    for o in &opens {
        let pre = preimage_basic(&o.comps, &o.sel, &comps)?;
        covered = covered.union(&pre);
        rewritten.push(pre);
    }
    let leftover = comps.complement(&covered);
    let rest = comps.vertices(&leftover);

    if let Some(rest_vs) = rest.vertices() {
        let mut finite: BTreeSet<Vertex> = x_prime.clone();
        finite.extend(rest_vs);
        let mut points: Vec<SpacePoint> = finite.iter().map(|v| SpacePoint::Vertex(*v)).collect();
        points.extend(
            edges_of(schema, &finite)
                .into_iter()
                .map(|(u, v)| SpacePoint::EdgePoint(u, v, 0.5)),
        );
        for p in points {
            if !any_contains(cover, &p)? {
                return Ok(Verdict::Refuted { witness: p });
            }
        }
        return Ok(Verdict::Confirmed {
            comps,
            rewritten,
            leftover,
        });
    }

    let tangle = missing_tangle(&comps, &leftover)?;
    let witness = SpacePoint::Tangle(tangle);
    debug_assert!(!any_contains(cover, &witness)?);
    Ok(Verdict::Refuted { witness })
}

fn any_contains(cover: &[CoverItem], p: &SpacePoint) -> Result<bool> {
    for c in cover {
        if c.contains(p)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A tangle whose ultrafilter at `comps` contains `leftover`, which must
/// cover infinitely many vertices: principal at an infinite leftover
/// component if there is one, else non-principal on infinitely many finite
/// leftover components of one class.
fn missing_tangle(comps: &Arc<ComponentSet>, leftover: &Selection) -> Result<Tangle> {
    for (d, desc) in comps.descriptors().iter().enumerate() {
        let r = match desc {
            Descriptor::Concrete(_) if leftover.concrete.contains(&d) => ComponentRef {
                desc: d,
                index: None,
            },
            Descriptor::Class { .. } => match leftover.classes.get(&d).and_then(|i| i.min()) {
                Some(i) => ComponentRef {
                    desc: d,
                    index: Some(i),
                },
                None => continue,
            },
            _ => continue,
        };
        if !comps.component_is_finite(r) {
            let lim = limit_from(
                &UltrafilterHandle::principal(comps.clone(), r),
                Policy::Canonical,
            )?;
            return Ok(Tangle::from_limit(&lim));
        }
    }
    for (d, idx) in &leftover.classes {
        if idx.is_finite() {
            continue;
        }
        let Descriptor::Class { fam, piece, .. } = &comps.descriptors()[*d] else {
            unreachable!()
        };
        let log = CommitLog::with_concentration(*fam, *piece, Policy::Canonical, idx.clone())?;
        let seed = UltrafilterHandle::lazy(comps.clone(), Arc::new(log))?;
        return Ok(Tangle::from_limit(&LimitFamily::FromLazy(seed)));
    }
    Err(Error::Precondition(
        "leftover components cover only finitely many vertices".into(),
    ))
}

/// Result of one level of a limit-point probe.
#[derive(Clone, Debug)]
pub enum ProbeOutcome {
    /// A member of the tangle agreeing with the target on `Z`.
    Agreeing(Separation),
    /// No member of the tangle agrees with the target on `Z`: this vertex
    /// of `Z` lies in the kernel but not in the target's `B`.
    Certified(Vertex),
    Unresolved,
}

#[derive(Clone, Debug)]
pub struct ProbeLevel {
    pub depth: u64,
    pub z_size: usize,
    pub outcome: ProbeOutcome,
}

/// For each depth `n` in `schedule`, with `Z` the vertex set of the
/// truncation at `n`, looks for a member of `t` agreeing with `s` on `Z`.
/// Two constructions are tried: moving to `B` every `A`-side component
/// avoiding `Z`, and, when the kernel `K` is finite, joining `(K, V)` with
/// separations that cut each vertex of `Z ∖ K` off from the kernel.
pub fn closure_probe(t: &Tangle, s: &Separation, schedule: &[u64]) -> Result<Vec<ProbeLevel>> {
    let schema = t.schema();
    let kernel = t.kernel();
    let mut out = Vec::new();
    for &n in schedule {
        let z: BTreeSet<Vertex> = schema.truncate(n).vertices.into_iter().collect();
        let mut outcome = ProbeOutcome::Unresolved;

        let comps = s.comps();
        let to_a = s.to_a();
        let meeting_z = z
            .iter()
            .filter_map(|v| comps.locate(v))
            .fold(Selection::default(), |acc, r| acc.union(&comps.single(r)));
        let moved = Separation::new(comps.clone(), s.to_b().union(&to_a.minus(&meeting_z)));
        if t.contains(&moved) && moved.agrees_on(s, &z) {
            outcome = ProbeOutcome::Agreeing(moved);
        }

        if matches!(outcome, ProbeOutcome::Unresolved) {
            if let Some(k) = kernel.vertices() {
                let k: BTreeSet<Vertex> = k.into_iter().collect();
                let kc = components(schema, &k)?;
                let mut joined = Separation::new(kc.clone(), kc.all());
                let mut seen: BTreeSet<String> = BTreeSet::new();
                for v in z.iter().filter(|v| !k.contains(v)) {
                    if joined.a().contains(v) && !joined.b().contains(v) {
                        continue;
                    }
                    let w = t.kernel_witness(v)?.expect("vertex outside the kernel");
                    if seen.insert(w.text()) {
                        joined = joined.corner_join(&w)?;
                    }
                }
                if t.contains(&joined) && joined.agrees_on(s, &z) {
                    outcome = ProbeOutcome::Agreeing(joined);
                }
            }
        }

        if matches!(outcome, ProbeOutcome::Unresolved) {
            if let Some(v) = z.iter().find(|v| kernel.contains(v) && !s.b().contains(v)) {
                outcome = ProbeOutcome::Certified(*v);
            }
        }
        out.push(ProbeLevel {
            depth: n,
            z_size: z.len(),
            outcome,
        });
    }
    Ok(out)
}

/// The separation whose limit-point evidence shows that `t` is not closed:
/// `(V, K)` for an end tangle with finite kernel, and for an ultrafilter
/// tangle the inverse of `(V ∖ ⋃𝒞, X ∪ ⋃𝒞)` where `𝒞` is the whole class
/// of components at its witness `X`.
pub fn non_closure_target(t: &Tangle) -> Result<Option<Separation>> {
    let schema = t.schema();
    match t {
        Tangle::Uf { fam, piece, .. } => {
            let x = t.minimal_witness()?;
            let comps = components(schema, &x)?;
            let d = comps
                .class_desc(*fam, *piece)
                .expect("copies split at the hubs");
            let mut class = Selection::default();
            class.classes.insert(d, comps.all().class_indices(d));
            Ok(Some(Separation::new(
                comps.clone(),
                comps.complement(&class),
            )))
        }
        Tangle::End { .. } => match t.kernel().vertices() {
            Some(k) => {
                let comps = components(schema, &k.into_iter().collect())?;
                Ok(Some(Separation::new(comps, Selection::default())))
            }
            None => Ok(None),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ends::EndRep;
    use crate::schema::find_schema;

    #[test]
    fn star_basic_open_membership() {
        let s = find_schema("STAR").unwrap();
        let odd = BasicOpen::parse(&s, "open X={c} C={L{1+2n}}").unwrap();
        let leaf7 = s.parse_vertex("L[7].x").unwrap();
        let c = s.parse_vertex("c").unwrap();
        assert!(odd.contains(&SpacePoint::Vertex(leaf7)).unwrap());
        assert!(odd.contains(&SpacePoint::EdgePoint(c, leaf7, 0.5)).unwrap());
        assert!(!odd.contains(&SpacePoint::Vertex(c)).unwrap());
        let log = CommitLog::with_concentration(0, 0, Policy::Canonical, "{1+2n}".parse().unwrap())
            .unwrap();
        let t = Tangle::Uf {
            schema: s.clone(),
            fam: 0,
            piece: 0,
            log: Arc::new(log),
        };
        assert!(odd.contains(&SpacePoint::Tangle(t)).unwrap());
        let canonical = Tangle::parse_id(&s, "uf:L").unwrap();
        assert!(!odd.contains(&SpacePoint::Tangle(canonical)).unwrap());
    }

    #[test]
    fn star_covers() {
        let s = find_schema("STAR").unwrap();
        let both = parse_cover(
            &s,
            "open X={c} C={L{0+2n}}\nopen X={c} C={L{1+2n}}\npiece {c}\n",
        )
        .unwrap();
        assert!(extract_subcover(&s, &both).unwrap().is_confirmed());
        let one = parse_cover(&s, "open X={c} C={L{0+2n}}\npiece {c}\n").unwrap();
        match extract_subcover(&s, &one).unwrap() {
            Verdict::Refuted {
                witness: SpacePoint::Tangle(t),
            } => {
                assert_eq!(t.id(), "uf:L");
                for item in &one {
                    assert!(!item.contains(&SpacePoint::Tangle(t.clone())).unwrap());
                }
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn ray_cover_with_its_root() {
        let s = find_schema("RAY").unwrap();
        let cover = parse_cover(&s, "open X={R[0]} C={@R[1]}\npiece {R[0]}\n").unwrap();
        assert!(extract_subcover(&s, &cover).unwrap().is_confirmed());
        let bare = parse_cover(&s, "open X={R[0]} C={@R[1]}\n").unwrap();
        assert!(!extract_subcover(&s, &bare).unwrap().is_confirmed());
    }

    #[test]
    fn ray_end_has_limit_points() {
        let s = find_schema("RAY").unwrap();
        let t = Tangle::end(&s, EndRep::Ray(0));
        let target = non_closure_target(&t).unwrap().unwrap();
        assert!(!t.contains(&target));
        for level in closure_probe(&t, &target, &[2, 4, 8]).unwrap() {
            assert!(
                matches!(level.outcome, ProbeOutcome::Agreeing(_)),
                "{level:?}"
            );
        }
    }

    #[test]
    fn clique_probe_is_certified() {
        let s = find_schema("CLIQ").unwrap();
        let t = Tangle::parse_id(&s, "end:K").unwrap();
        let comps = components(&s, &BTreeSet::new()).unwrap();
        let target = Separation::new(comps, Selection::default());
        let levels = closure_probe(&t, &target, &[1]).unwrap();
        assert!(matches!(levels[0].outcome, ProbeOutcome::Certified(_)));
    }
}
