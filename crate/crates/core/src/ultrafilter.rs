//! Ultrafilters on the components of `G - X`.
//!
//! A principal ultrafilter is given by its generating component. A
//! non-principal one lives on a class of pairwise isomorphic components and
//! is decided lazily by a commitment log: the log keeps a concentration set
//! `M` of copy indices, answers every query `J` with "`M ⊆ J` up to finitely
//! many indices", and shrinks `M` whenever a query splits it into two
//! infinite parts.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::components::{components, ComponentRef, ComponentSet, Descriptor, Selection};
use crate::ends::{EndClass, EndRep};
use crate::error::{Error, Result};
use crate::schema::{SchemaRef, Vertex};
use crate::semilinear::SemilinearSet;
use crate::separation::copies_inside;

/// How a log breaks ties between two infinite parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Policy {
    /// Take the part whose periodic key sorts first.
    #[default]
    Canonical,
    /// Take the part chosen by a hash of the seed and the key.
    Seeded(u64),
}

impl Policy {
    fn prefers_first(self, key: &str) -> bool {
        match self {
            Policy::Canonical => true,
            Policy::Seeded(seed) => {
                let mut h = Sha256::new();
                h.update(seed.to_le_bytes());
                h.update(key.as_bytes());
                h.finalize()[0] & 1 == 0
            }
        }
    }

    pub fn text(self) -> String {
        match self {
            Policy::Canonical => "canonical".into(),
            Policy::Seeded(s) => format!("seed={s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commitment {
    pub query: SemilinearSet,
    pub answer: bool,
}

#[derive(Debug)]
struct LogState {
    concentration: SemilinearSet,
    entries: Vec<Commitment>,
}

/// The decisions of one non-principal ultrafilter on the copies of piece
/// `piece` of family `fam`. Copy indices do not depend on `X`, so one log
/// serves every separator at which these copies are separate components.
#[derive(Debug)]
pub struct CommitLog {
    fam: u32,
    piece: u32,
    policy: Policy,
    initial: SemilinearSet,
    state: Mutex<LogState>,
}

/// Serializable form of a log, for dumping and replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogDump {
    pub fam: u32,
    pub piece: u32,
    pub seed: Option<u64>,
    pub concentration: String,
    pub entries: Vec<(String, bool)>,
}

impl CommitLog {
    pub fn new(fam: u32, piece: u32, policy: Policy) -> Self {
        Self::build(fam, piece, policy, SemilinearSet::naturals())
    }

    /// A log whose ultrafilter contains `m`, which must be infinite.
    pub fn with_concentration(
        fam: u32,
        piece: u32,
        policy: Policy,
        m: SemilinearSet,
    ) -> Result<Self> {
        if m.is_finite() {
            return Err(Error::Precondition(format!("concentration {m} is finite")));
        }
        Ok(Self::build(fam, piece, policy, m))
    }

    fn build(fam: u32, piece: u32, policy: Policy, m: SemilinearSet) -> Self {
        CommitLog {
            fam,
            piece,
            policy,
            initial: m.clone(),
            state: Mutex::new(LogState {
                concentration: m,
                entries: Vec::new(),
            }),
        }
    }

    pub fn fam(&self) -> u32 {
        self.fam
    }

    pub fn piece(&self) -> u32 {
        self.piece
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    /// Whether the index set `j` belongs to the ultrafilter. Decisions are
    /// serialized on the log's lock.
    pub fn decide(&self, j: &SemilinearSet) -> bool {
        let mut st = self.state.lock().expect("log lock poisoned");
        if st.concentration.intersect(j).is_finite() {
            return false;
        }
        if st.concentration.minus(j).is_finite() {
            return true;
        }
        let rest = j.complement();
        let (kj, kr) = (j.tail_key(), rest.tail_key());
        let j_first = kj <= kr;
        let take_first = self.policy.prefers_first(if j_first { &kj } else { &kr });
        let answer = j_first == take_first;
        let chosen = if answer { j } else { &rest };
        st.concentration = st.concentration.intersect(chosen);
        st.entries.push(Commitment {
            query: j.clone(),
            answer,
        });
        answer
    }

    pub fn concentration(&self) -> SemilinearSet {
        self.state
            .lock()
            .expect("log lock poisoned")
            .concentration
            .clone()
    }

    pub fn entries(&self) -> Vec<Commitment> {
        self.state
            .lock()
            .expect("log lock poisoned")
            .entries
            .clone()
    }

    /// A fresh log with the same starting point and policy and none of the
    /// commitments.
    pub fn fresh(&self) -> Self {
        Self::build(self.fam, self.piece, self.policy, self.initial.clone())
    }

    pub fn dump(&self) -> LogDump {
        LogDump {
            fam: self.fam,
            piece: self.piece,
            seed: match self.policy {
                Policy::Canonical => None,
                Policy::Seeded(s) => Some(s),
            },
            concentration: self.initial.to_string(),
            entries: self
                .entries()
                .iter()
                .map(|c| (c.query.to_string(), c.answer))
                .collect(),
        }
    }

    /// Rebuilds a log by re-applying the commitments of a dump.
    pub fn replay(dump: &LogDump) -> Result<Self> {
        let policy = dump.seed.map_or(Policy::Canonical, Policy::Seeded);
        let log =
            Self::with_concentration(dump.fam, dump.piece, policy, dump.concentration.parse()?)?;
        {
            let mut st = log.state.lock().expect("log lock poisoned");
            for (q, answer) in &dump.entries {
                let query: SemilinearSet = q.parse()?;
                let chosen = if *answer {
                    query.clone()
                } else {
                    query.complement()
                };
                let next = st.concentration.intersect(&chosen);
                if next.is_finite() {
                    return Err(Error::Precondition(format!(
                        "commitment {q} contradicts the log"
                    )));
                }
                st.concentration = next;
                st.entries.push(Commitment {
                    query,
                    answer: *answer,
                });
            }
        }
        Ok(log)
    }
}

#[derive(Clone, Debug)]
pub enum UfKind {
    Principal(ComponentRef),
    Lazy { desc: usize, log: Arc<CommitLog> },
}

/// An ultrafilter on the set of components of `G - X`.
#[derive(Clone, Debug)]
pub struct UltrafilterHandle {
    comps: Arc<ComponentSet>,
    kind: UfKind,
}

impl PartialEq for UltrafilterHandle {
    fn eq(&self, other: &Self) -> bool {
        self.comps.separator() == other.comps.separator()
            && match (&self.kind, &other.kind) {
                (UfKind::Principal(a), UfKind::Principal(b)) => a == b,
                (UfKind::Lazy { desc: a, log: la }, UfKind::Lazy { desc: b, log: lb }) => {
                    a == b && Arc::ptr_eq(la, lb)
                }
                _ => false,
            }
    }
}

fn check_subset(small: &BTreeSet<Vertex>, big: &BTreeSet<Vertex>) -> Result<()> {
    if small.is_subset(big) {
        Ok(())
    } else {
        Err(Error::Precondition("separators are not nested".into()))
    }
}

impl UltrafilterHandle {
    pub fn principal(comps: Arc<ComponentSet>, r: ComponentRef) -> Self {
        UltrafilterHandle {
            comps,
            kind: UfKind::Principal(r),
        }
    }

    /// The log's ultrafilter viewed at `comps`; its copies must be separate
    /// components there.
    pub fn lazy(comps: Arc<ComponentSet>, log: Arc<CommitLog>) -> Result<Self> {
        let desc = comps.class_desc(log.fam(), log.piece()).ok_or_else(|| {
            Error::Precondition(
                "the log's copies are not separate components at this separator".into(),
            )
        })?;
        Ok(UltrafilterHandle {
            comps,
            kind: UfKind::Lazy { desc, log },
        })
    }

    pub fn comps(&self) -> &Arc<ComponentSet> {
        &self.comps
    }

    pub fn kind(&self) -> &UfKind {
        &self.kind
    }

    pub fn separator(&self) -> &BTreeSet<Vertex> {
        self.comps.separator()
    }

    pub fn is_principal(&self) -> bool {
        matches!(self.kind, UfKind::Principal(_))
    }

    pub fn generator(&self) -> Option<ComponentRef> {
        match self.kind {
            UfKind::Principal(r) => Some(r),
            UfKind::Lazy { .. } => None,
        }
    }

    pub fn log(&self) -> Option<&Arc<CommitLog>> {
        match &self.kind {
            UfKind::Principal(_) => None,
            UfKind::Lazy { log, .. } => Some(log),
        }
    }

    pub fn membership(&self, sel: &Selection) -> bool {
        match &self.kind {
            UfKind::Principal(r) => sel.contains(*r),
            UfKind::Lazy { desc, log } => log.decide(&sel.class_indices(*desc)),
        }
    }

    /// The image under the bonding map to a smaller separator `x`.
    pub fn restrict(&self, x: &BTreeSet<Vertex>) -> Result<Self> {
        check_subset(x, self.separator())?;
        let schema = self.comps.schema();
        let small = components(schema, x)?;
        let located = match &self.kind {
            UfKind::Principal(r) => small.locate(&self.comps.representative(*r)),
            UfKind::Lazy { desc, log } => {
                let Descriptor::Class { indices, .. } = &self.comps.descriptors()[*desc] else {
                    unreachable!("lazy handles sit on class descriptors")
                };
                let copy = indices.min().expect("classes are infinite");
                let at = schema.families[log.fam() as usize].piece_rep(log.piece());
                let r = small.locate(&Vertex::Fam {
                    fam: log.fam(),
                    copy,
                    at,
                });
                if let (Some(r), Some(_)) = (r, r.and_then(|r| r.index)) {
                    return Ok(UltrafilterHandle {
                        comps: small,
                        kind: UfKind::Lazy {
                            desc: r.desc,
                            log: log.clone(),
                        },
                    });
                }
                r
            }
        };
        let r = located.expect("components of a larger separator avoid a smaller one");
        Ok(UltrafilterHandle::principal(small, r))
    }

    /// The unique extension of a non-principal ultrafilter to a larger
    /// separator `x2`.
    pub fn lift(&self, x2: &BTreeSet<Vertex>) -> Result<Self> {
        check_subset(self.separator(), x2)?;
        match &self.kind {
            UfKind::Principal(_) => Err(Error::Precondition(
                "cannot lift a principal ultrafilter".into(),
            )),
            UfKind::Lazy { log, .. } => {
                Self::lazy(components(self.comps.schema(), x2)?, log.clone())
            }
        }
    }

    pub fn text(&self) -> String {
        let schema = self.comps.schema();
        let x = schema.vertex_list_text(self.separator());
        match &self.kind {
            UfKind::Principal(r) => {
                format!(
                    "principal at X={x} on {}",
                    self.comps.selection_text(&self.comps.single(*r))
                )
            }
            UfKind::Lazy { desc, log } => {
                format!(
                    "non-principal at X={x} on {} ({})",
                    self.comps.descriptor_text(*desc),
                    log.policy().text()
                )
            }
        }
    }
}

/// The collection of components of `G - X2` that lie inside a member of
/// `sel`, for `X ⊆ X2`.
pub fn preimage_basic(
    at_x: &ComponentSet,
    sel: &Selection,
    at_x2: &ComponentSet,
) -> Result<Selection> {
    check_subset(at_x.separator(), at_x2.separator())?;
    let schema = at_x2.schema();
    let mut out = Selection::default();
    for (d, desc) in at_x2.descriptors().iter().enumerate() {
        match desc {
            Descriptor::Concrete(_) => {
                let rep = at_x2.representative(ComponentRef {
                    desc: d,
                    index: None,
                });
                if at_x.locate(&rep).is_some_and(|r| sel.contains(r)) {
                    out.concrete.insert(d);
                }
            }
            Descriptor::Class {
                fam,
                piece,
                indices,
            } => {
                let copy = indices.min().expect("classes are infinite");
                let at = schema.families[*fam as usize].piece_rep(*piece);
                let r = at_x
                    .locate(&Vertex::Fam {
                        fam: *fam,
                        copy,
                        at,
                    })
                    .expect("copy avoids the smaller separator");
                let picked = match r.index {
                    Some(_) => sel.class_indices(r.desc).intersect(indices),
                    None if sel.contains(r) => indices.clone(),
                    None => SemilinearSet::empty(),
                };
                if !picked.is_empty() {
                    out.classes.insert(d, picked);
                }
            }
        }
    }
    Ok(out)
}

/// A compatible family of ultrafilters, one for every finite separator,
/// given by a finite seed.
#[derive(Clone, Debug)]
pub enum LimitFamily {
    /// Every member is obtained from a non-principal seed by lifting to the
    /// union of the separators and restricting back.
    FromLazy(UltrafilterHandle),
    /// Every member is principal at the component where the end lives.
    FromEnd { schema: SchemaRef, end: EndRep },
}

impl LimitFamily {
    pub fn schema(&self) -> &SchemaRef {
        match self {
            LimitFamily::FromLazy(h) => h.comps().schema(),
            LimitFamily::FromEnd { schema, .. } => schema,
        }
    }

    pub fn eval(&self, y: &BTreeSet<Vertex>) -> Result<UltrafilterHandle> {
        match self {
            LimitFamily::FromLazy(h) => {
                let both: BTreeSet<Vertex> = h.separator().union(y).copied().collect();
                h.lift(&both)?.restrict(y)
            }
            LimitFamily::FromEnd { schema, end } => {
                let comps = components(schema, y)?;
                let r = end.locate(&comps);
                Ok(UltrafilterHandle::principal(comps, r))
            }
        }
    }
}

/// Ends living in the component `r` of `comps`, least first.
pub fn ends_in(comps: &ComponentSet, r: ComponentRef) -> Vec<EndRep> {
    let schema = comps.schema();
    let mut out = Vec::new();
    for class in crate::ends::end_classes(schema) {
        match class {
            EndClass::Single(e) => {
                if e.locate(comps) == r {
                    out.push(e);
                }
            }
            EndClass::PerCopy { fam, ray } => {
                let mut copies: BTreeSet<u64> = comps.touched_copies(fam).iter().collect();
                copies.extend(SemilinearSet::min(&comps.touched_copies(fam).complement()));
                if let Some(i) = r.index {
                    copies.insert(i);
                }
                for copy in copies {
                    let e = EndRep::PatternRay { fam, ray, copy };
                    if e.locate(comps) == r {
                        out.push(e);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// A compatible family whose member at the handle's separator is the
/// handle, following the two cases for an infinite generating component:
/// one containing an end, and one containing infinitely many copies of a
/// finite piece.
pub fn limit_from(handle: &UltrafilterHandle, policy: Policy) -> Result<LimitFamily> {
    let comps = handle.comps();
    let r = match handle.kind() {
        UfKind::Lazy { .. } => return Ok(LimitFamily::FromLazy(handle.clone())),
        UfKind::Principal(r) => *r,
    };
    if comps.component_is_finite(r) {
        return Err(Error::Precondition(
            "ultrafilter generated by a finite component".into(),
        ));
    }
    let schema = comps.schema();
    if let Some(&end) = ends_in(comps, r).first() {
        return Ok(LimitFamily::FromEnd {
            schema: schema.clone(),
            end,
        });
    }
    let c = comps.component_vertices(r);
    for (f, fam) in schema.families.iter().enumerate() {
        for (p, piece) in fam.pieces.iter().enumerate() {
            let inside = copies_inside(&c, schema, f as u32, p as u32);
            if inside.is_finite() {
                continue;
            }
            let mut z = comps.separator().clone();
            z.extend(
                piece
                    .hubs
                    .iter()
                    .map(|&h| Vertex::Top(crate::schema::Local::V(h))),
            );
            let log = CommitLog::with_concentration(f as u32, p as u32, policy, inside)?;
            let seed = UltrafilterHandle::lazy(components(schema, &z)?, Arc::new(log))?;
            return Ok(LimitFamily::FromLazy(seed));
        }
    }
    Err(Error::Precondition(
        "infinite component with neither an end nor infinitely many pieces".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::find_schema;

    fn set(s: &str) -> SemilinearSet {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_commitments() {
        let log = CommitLog::new(0, 0, Policy::Canonical);
        assert!(log.decide(&set("{0+2n}")));
        assert!(log.decide(&set("{0+4n}")));
        assert!(!log.decide(&set("{2+4n}")));
        assert!(!log.decide(&set("{0,1,2,3,4,5,6,7,8,9}")));
        assert_eq!(log.entries().len(), 2);
        assert!(log.decide(&set("{0+2n}")));
    }

    #[test]
    fn concentration_must_be_infinite() {
        assert!(CommitLog::with_concentration(0, 0, Policy::Canonical, set("{1,2}")).is_err());
    }

    #[test]
    fn replay_reproduces_answers() {
        let log = CommitLog::new(0, 0, Policy::Seeded(7));
        for q in ["{0+3n}", "{1+2n}", "{5+6n}"] {
            log.decide(&set(q));
        }
        let again = CommitLog::replay(&log.dump()).unwrap();
        assert_eq!(again.concentration(), log.concentration());
        for q in ["{0+3n}", "{1+2n}", "{0+5n}"] {
            assert_eq!(again.decide(&set(q)), log.decide(&set(q)));
        }
    }

    #[test]
    fn principal_leaf_and_restriction() {
        let s = find_schema("STAR").unwrap();
        let at_c = components(&s, &s.parse_vertex_list("c").unwrap()).unwrap();
        let leaf5 = at_c.locate(&s.parse_vertex("L[5].x").unwrap()).unwrap();
        let u = UltrafilterHandle::principal(at_c.clone(), leaf5);
        assert!(!u.membership(&at_c.parse_selection("{L{0+2n}}").unwrap()));
        let down = u.restrict(&BTreeSet::new()).unwrap();
        assert!(down.comps().is_single_component());
        assert_eq!(down.generator().unwrap().desc, 0);
    }

    #[test]
    fn lifting_discards_the_new_finite_part() {
        let s = find_schema("STAR").unwrap();
        let at_c = components(&s, &s.parse_vertex_list("c").unwrap()).unwrap();
        let u = UltrafilterHandle::lazy(at_c, Arc::new(CommitLog::new(0, 0, Policy::Canonical)))
            .unwrap();
        let up = u.lift(&s.parse_vertex_list("c, L[0].x").unwrap()).unwrap();
        assert!(up.membership(&up.comps().all()));
        assert!(!up.membership(&up.comps().parse_selection("{L{1,2,3}}").unwrap()));
    }

    #[test]
    fn preimage_of_even_leaves() {
        let s = find_schema("STAR").unwrap();
        let at_c = components(&s, &s.parse_vertex_list("c").unwrap()).unwrap();
        let at_c0 = components(&s, &s.parse_vertex_list("c, L[0].x").unwrap()).unwrap();
        let evens = at_c.parse_selection("{L{0+2n}}").unwrap();
        let pre = preimage_basic(&at_c, &evens, &at_c0).unwrap();
        assert_eq!(at_c0.selection_text(&pre), "{L{2+2n}}");
        assert!(preimage_basic(&at_c, &Selection::default(), &at_c0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn limit_routing() {
        let s = find_schema("STAR").unwrap();
        let empty = components(&s, &BTreeSet::new()).unwrap();
        let whole = UltrafilterHandle::principal(
            empty.clone(),
            ComponentRef {
                desc: 0,
                index: None,
            },
        );
        let lim = limit_from(&whole, Policy::Canonical).unwrap();
        assert!(matches!(lim, LimitFamily::FromLazy(_)));
        assert_eq!(
            lim.eval(&BTreeSet::new()).unwrap().generator(),
            whole.generator()
        );

        let at_c = components(&s, &s.parse_vertex_list("c").unwrap()).unwrap();
        let leaf = at_c.locate(&s.parse_vertex("L[0].x").unwrap()).unwrap();
        assert!(limit_from(&UltrafilterHandle::principal(at_c, leaf), Policy::Canonical).is_err());

        let r = find_schema("RAY").unwrap();
        let at0 = components(&r, &r.parse_vertex_list("R[0]").unwrap()).unwrap();
        let tail = at0.locate(&r.parse_vertex("R[1]").unwrap()).unwrap();
        let lim = limit_from(&UltrafilterHandle::principal(at0, tail), Policy::Canonical).unwrap();
        assert!(matches!(
            lim,
            LimitFamily::FromEnd {
                end: EndRep::Ray(0),
                ..
            }
        ));
    }
}
