//! Components of `G - X` for finite `X`.
//!
//! The computation runs on a finite quotient graph: explicit vertices for the
//! region touched by `X`, one node for each ray tail beyond the last deleted
//! position, one node per piece for all untouched copies of a family, and one
//! node for what is left of each clique. A piece node that ends up isolated
//! stands for infinitely many pairwise isomorphic components.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::schema::{Body, Local, SchemaRef, Vertex};
use crate::semilinear::SemilinearSet;
use crate::symset::{LocalSet, SymVertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    /// A single component.
    Concrete(SymVertexSet),
    /// One component per index: the copies of piece `piece` of family `fam`.
    Class {
        fam: u32,
        piece: u32,
        indices: SemilinearSet,
    },
}

/// One component of `G - X`: a concrete descriptor, or a class descriptor
/// together with a copy index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentRef {
    pub desc: usize,
    pub index: Option<u64>,
}

/// A collection of components: whole concrete descriptors plus, for class
/// descriptors, a semilinear set of copy indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection {
    pub concrete: BTreeSet<usize>,
    pub classes: BTreeMap<usize, SemilinearSet>,
}

impl Selection {
    pub fn is_empty(&self) -> bool {
        self.concrete.is_empty() && self.classes.is_empty()
    }

    pub fn contains(&self, r: ComponentRef) -> bool {
        match r.index {
            None => self.concrete.contains(&r.desc),
            Some(i) => self.classes.get(&r.desc).is_some_and(|s| s.contains(i)),
        }
    }

    pub fn class_indices(&self, desc: usize) -> SemilinearSet {
        self.classes.get(&desc).cloned().unwrap_or_default()
    }

    fn normalized(mut self) -> Self {
        self.classes.retain(|_, s| !s.is_empty());
        self
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.concrete.extend(other.concrete.iter().copied());
        for (&d, s) in &other.classes {
            let e = out.classes.entry(d).or_default();
            *e = e.union(s);
        }
        out.normalized()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let concrete = self
            .concrete
            .intersection(&other.concrete)
            .copied()
            .collect();
        let classes = self
            .classes
            .iter()
            .filter_map(|(d, s)| other.classes.get(d).map(|t| (*d, s.intersect(t))))
            .collect();
        Selection { concrete, classes }.normalized()
    }

    pub fn minus(&self, other: &Self) -> Self {
        let concrete = self.concrete.difference(&other.concrete).copied().collect();
        let classes = self
            .classes
            .iter()
            .map(|(d, s)| {
                (
                    *d,
                    other
                        .classes
                        .get(d)
                        .map_or_else(|| s.clone(), |t| s.minus(t)),
                )
            })
            .collect();
        Selection { concrete, classes }.normalized()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.minus(other).is_empty()
    }

    /// Finitely many components selected.
    pub fn is_finite_collection(&self) -> bool {
        self.classes.values().all(SemilinearSet::is_finite)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    V(Vertex),
    TopTail {
        ray: u32,
        from: u64,
    },
    FamTail {
        fam: u32,
        copy: u64,
        ray: u32,
        from: u64,
    },
    Class {
        fam: u32,
        piece: u32,
    },
    CliqueRest(u32),
}

struct Quotient<'a> {
    x: &'a BTreeSet<Vertex>,
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    edges: Vec<(usize, usize)>,
}

impl Quotient<'_> {
    fn node(&mut self, n: Node) -> Option<usize> {
        if let Node::V(v) = &n {
            if self.x.contains(v) {
                return None;
            }
        }
        if let Some(&i) = self.index.get(&n) {
            return Some(i);
        }
        self.nodes.push(n.clone());
        self.index.insert(n, self.nodes.len() - 1);
        Some(self.nodes.len() - 1)
    }

    fn edge(&mut self, a: Node, b: Node) {
        if let (Some(i), Some(j)) = (self.node(a), self.node(b)) {
            self.edges.push((i, j));
        }
    }

    /// Adds one copy of `body`. `max_pos[r]` is the largest position on ray
    /// `r` that meets `X`; `tail(r, from)` names the node for the rest.
    fn expand_body(
        &mut self,
        body: &Body,
        lift: impl Fn(Local) -> Vertex,
        max_pos: impl Fn(u32) -> Option<u64>,
        tail: impl Fn(u32, u64) -> Node,
    ) {
        for i in 0..body.vertices.len() as u32 {
            self.node(Node::V(lift(Local::V(i))));
        }
        for &(a, b) in &body.edges {
            self.edge(Node::V(lift(Local::V(a))), Node::V(lift(Local::V(b))));
        }
        for (r, decl) in body.rays.iter().enumerate() {
            let ray = r as u32;
            let spine = |pos| Node::V(lift(Local::R { ray, pos, depth: 0 }));
            match max_pos(ray) {
                None => {
                    self.node(tail(ray, 0));
                    if let Some(at) = decl.at {
                        self.edge(Node::V(lift(Local::V(at))), tail(ray, 0));
                    }
                }
                Some(m) => {
                    for pos in 0..=m {
                        for depth in 0..=decl.teeth {
                            self.node(Node::V(lift(Local::R { ray, pos, depth })));
                        }
                        for depth in 0..decl.teeth {
                            self.edge(
                                Node::V(lift(Local::R { ray, pos, depth })),
                                Node::V(lift(Local::R {
                                    ray,
                                    pos,
                                    depth: depth + 1,
                                })),
                            );
                        }
                        if pos < m {
                            self.edge(spine(pos), spine(pos + 1));
                        }
                    }
                    if let Some(at) = decl.at {
                        self.edge(Node::V(lift(Local::V(at))), spine(0));
                    }
                    self.node(tail(ray, m + 1));
                    self.edge(spine(m), tail(ray, m + 1));
                }
            }
        }
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn max_ray_pos(
    x: &BTreeSet<Vertex>,
    pick: impl Fn(&Vertex) -> Option<(u32, u64)>,
) -> BTreeMap<u32, u64> {
    let mut out: BTreeMap<u32, u64> = BTreeMap::new();
    for (ray, pos) in x.iter().filter_map(pick) {
        let e = out.entry(ray).or_insert(pos);
        *e = (*e).max(pos);
    }
    out
}

/// The components of `G - X` for a schema graph and finite `X`.
#[derive(Clone, Debug)]
pub struct ComponentSet {
    schema: SchemaRef,
    x: BTreeSet<Vertex>,
    descs: Vec<Descriptor>,
    class_of: BTreeMap<(u32, u32), usize>,
    touched: BTreeMap<u32, SemilinearSet>,
}

impl ComponentSet {
    pub fn compute(schema: &SchemaRef, x: BTreeSet<Vertex>) -> Result<Self> {
        if let Some(v) = x.iter().find(|v| !schema.contains(v)) {
            return Err(Error::UnknownVertex(format!("{v:?}")));
        }
        let mut q = Quotient {
            x: &x,
            nodes: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        };

        let top_max = max_ray_pos(&x, |v| match v {
            Vertex::Top(Local::R { ray, pos, .. }) => Some((*ray, *pos)),
            _ => None,
        });
        q.expand_body(
            &schema.top,
            Vertex::Top,
            |r| top_max.get(&r).copied(),
            |ray, from| Node::TopTail { ray, from },
        );

        let mut touched: BTreeMap<u32, SemilinearSet> = BTreeMap::new();
        for (f, fam) in schema.families.iter().enumerate() {
            let fam_id = f as u32;
            let copies: BTreeSet<u64> = x
                .iter()
                .filter_map(|v| match v {
                    Vertex::Fam { fam, copy, .. } if *fam == fam_id => Some(*copy),
                    _ => None,
                })
                .collect();
            for &copy in &copies {
                let maxes = max_ray_pos(&x, |v| match v {
                    Vertex::Fam {
                        fam,
                        copy: c,
                        at: Local::R { ray, pos, .. },
                    } if *fam == fam_id && *c == copy => Some((*ray, *pos)),
                    _ => None,
                });
                let lift = |at| Vertex::Fam {
                    fam: fam_id,
                    copy,
                    at,
                };
                q.expand_body(
                    &fam.body,
                    lift,
                    |r| maxes.get(&r).copied(),
                    |ray, from| Node::FamTail {
                        fam: fam_id,
                        copy,
                        ray,
                        from,
                    },
                );
                for &(c, pv) in &fam.attach {
                    q.edge(
                        Node::V(Vertex::Top(Local::V(c))),
                        Node::V(lift(Local::V(pv))),
                    );
                }
            }
            for (p, piece) in fam.pieces.iter().enumerate() {
                let class = Node::Class {
                    fam: fam_id,
                    piece: p as u32,
                };
                q.node(class.clone());
                for &h in &piece.hubs {
                    q.edge(class.clone(), Node::V(Vertex::Top(Local::V(h))));
                }
            }
            touched.insert(fam_id, SemilinearSet::from_elements(copies));
        }
        for (c, clique) in schema.cliques.iter().enumerate() {
            let rest = Node::CliqueRest(c as u32);
            q.node(rest.clone());
            for &h in &clique.attach {
                q.edge(rest.clone(), Node::V(Vertex::Top(Local::V(h))));
            }
        }

        let n = q.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut degree = vec![0usize; n];
        for &(a, b) in &q.edges {
            degree[a] += 1;
            degree[b] += 1;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }

        let clique_taken = |c: u32| {
            SemilinearSet::from_elements(x.iter().filter_map(|v| match v {
                Vertex::Clique { clique, idx } if *clique == c => Some(*idx),
                _ => None,
            }))
        };
        let mut concrete: Vec<SymVertexSet> = Vec::new();
        let mut classes: Vec<(u32, u32, SemilinearSet)> = Vec::new();
        for members in groups.values() {
            if let [only] = members.as_slice() {
                if let Node::Class { fam, piece } = q.nodes[*only] {
                    if degree[*only] == 0 {
                        classes.push((fam, piece, touched[&fam].complement()));
                        continue;
                    }
                }
            }
            let mut set = SymVertexSet::empty();
            for &m in members {
                let part = match &q.nodes[m] {
                    Node::V(v) => SymVertexSet::singleton(*v),
                    Node::TopTail { ray, from } => {
                        let teeth = schema.top.rays[*ray as usize].teeth;
                        SymVertexSet::top_part(LocalSet::ray_tail(*ray, teeth, *from))
                    }
                    Node::FamTail {
                        fam,
                        copy,
                        ray,
                        from,
                    } => {
                        let teeth = schema.families[*fam as usize].body.rays[*ray as usize].teeth;
                        SymVertexSet::family_part(
                            *fam,
                            LocalSet::ray_tail(*ray, teeth, *from),
                            SemilinearSet::singleton(*copy),
                        )
                    }
                    Node::Class { fam, piece } => SymVertexSet::family_part(
                        *fam,
                        LocalSet::piece(&schema.families[*fam as usize], *piece),
                        touched[fam].complement(),
                    ),
                    Node::CliqueRest(c) => {
                        SymVertexSet::clique_part(*c, clique_taken(*c).complement())
                    }
                };
                set = set.union(&part);
            }
            concrete.push(set);
        }
        concrete.sort_by_cached_key(|s| s.min_vertex());
        classes.sort_by_key(|&(f, p, _)| (f, p));
        let mut descs: Vec<Descriptor> = concrete.into_iter().map(Descriptor::Concrete).collect();
        let mut class_of = BTreeMap::new();
        for (fam, piece, indices) in classes {
            class_of.insert((fam, piece), descs.len());
            descs.push(Descriptor::Class {
                fam,
                piece,
                indices,
            });
        }
        Ok(ComponentSet {
            schema: schema.clone(),
            x,
            descs,
            class_of,
            touched,
        })
    }

    pub fn schema(&self) -> &SchemaRef {
        &self.schema
    }

    pub fn separator(&self) -> &BTreeSet<Vertex> {
        &self.x
    }

    pub fn descriptors(&self) -> &[Descriptor] {
        &self.descs
    }

    pub fn is_single_component(&self) -> bool {
        matches!(self.descs.as_slice(), [Descriptor::Concrete(_)])
    }

    /// The class descriptor for piece `piece` of family `fam`, if its copies
    /// are separate components.
    pub fn class_desc(&self, fam: u32, piece: u32) -> Option<usize> {
        self.class_of.get(&(fam, piece)).copied()
    }

    /// Copy indices of family `fam` that meet `X`.
    pub fn touched_copies(&self, fam: u32) -> SemilinearSet {
        self.touched.get(&fam).cloned().unwrap_or_default()
    }

    pub fn locate(&self, v: &Vertex) -> Option<ComponentRef> {
        if self.x.contains(v) || !self.schema.contains(v) {
            return None;
        }
        if let Vertex::Fam { fam, copy, at } = *v {
            let piece = self.schema.families[fam as usize].piece_of(at);
            if let Some(desc) = self.class_desc(fam, piece) {
                if !self.touched_copies(fam).contains(copy) {
                    return Some(ComponentRef {
                        desc,
                        index: Some(copy),
                    });
                }
            }
        }
        self.descs
            .iter()
            .position(|d| matches!(d, Descriptor::Concrete(s) if s.contains(v)))
            .map(|desc| ComponentRef { desc, index: None })
    }

    /// Every component of `G - X`.
    pub fn all(&self) -> Selection {
        let mut sel = Selection::default();
        for (i, d) in self.descs.iter().enumerate() {
            match d {
                Descriptor::Concrete(_) => {
                    sel.concrete.insert(i);
                }
                Descriptor::Class { indices, .. } => {
                    sel.classes.insert(i, indices.clone());
                }
            }
        }
        sel
    }

    pub fn complement(&self, sel: &Selection) -> Selection {
        self.all().minus(sel)
    }

    pub fn single(&self, r: ComponentRef) -> Selection {
        let mut sel = Selection::default();
        match r.index {
            None => {
                sel.concrete.insert(r.desc);
            }
            Some(i) => {
                sel.classes.insert(r.desc, SemilinearSet::singleton(i));
            }
        }
        sel
    }

    /// Restricts class index sets to the indices actually present.
    pub fn clamp(&self, sel: &Selection) -> Selection {
        sel.intersect(&self.all())
    }

    pub fn component_vertices(&self, r: ComponentRef) -> SymVertexSet {
        match (&self.descs[r.desc], r.index) {
            (Descriptor::Concrete(s), _) => s.clone(),
            (Descriptor::Class { fam, piece, .. }, Some(i)) => SymVertexSet::family_part(
                *fam,
                LocalSet::piece(&self.schema.families[*fam as usize], *piece),
                SemilinearSet::singleton(i),
            ),
            (Descriptor::Class { .. }, None) => panic!("class component without index"),
        }
    }

    /// The union of the selected components.
    pub fn vertices(&self, sel: &Selection) -> SymVertexSet {
        let mut out = SymVertexSet::empty();
        for &d in &sel.concrete {
            if let Descriptor::Concrete(s) = &self.descs[d] {
                out = out.union(s);
            }
        }
        for (&d, idx) in &sel.classes {
            if let Descriptor::Class {
                fam,
                piece,
                indices,
            } = &self.descs[d]
            {
                let locals = LocalSet::piece(&self.schema.families[*fam as usize], *piece);
                out = out.union(&SymVertexSet::family_part(
                    *fam,
                    locals,
                    idx.intersect(indices),
                ));
            }
        }
        out
    }

    pub fn component_is_finite(&self, r: ComponentRef) -> bool {
        match &self.descs[r.desc] {
            Descriptor::Concrete(s) => s.is_finite(),
            Descriptor::Class { fam, piece, .. } => self.schema.finite_piece(*fam, *piece),
        }
    }

    /// The selected components, listed one by one, when there are finitely
    /// many of them.
    pub fn refs(&self, sel: &Selection) -> Option<Vec<ComponentRef>> {
        if !sel.is_finite_collection() {
            return None;
        }
        let mut out: Vec<ComponentRef> = sel
            .concrete
            .iter()
            .map(|&desc| ComponentRef { desc, index: None })
            .collect();
        for (&desc, idx) in &sel.classes {
            out.extend(idx.iter().map(|i| ComponentRef {
                desc,
                index: Some(i),
            }));
        }
        Some(out)
    }

    /// A vertex of the component, used to trace it through other separators.
    pub fn representative(&self, r: ComponentRef) -> Vertex {
        match (&self.descs[r.desc], r.index) {
            (Descriptor::Concrete(s), _) => s.min_vertex().expect("components are non-empty"),
            (Descriptor::Class { fam, piece, .. }, Some(copy)) => Vertex::Fam {
                fam: *fam,
                copy,
                at: self.schema.families[*fam as usize].piece_rep(*piece),
            },
            (Descriptor::Class { .. }, None) => panic!("class component without index"),
        }
    }

    fn class_label(&self, fam: u32, piece: u32) -> String {
        let name = &self.schema.families[fam as usize].name;
        if piece == 0 {
            name.clone()
        } else {
            format!("{name}#{piece}")
        }
    }

    /// `{@c, L{0+2n}, L#1{3}}`: concrete components by their least vertex,
    /// class members by family, piece and index set.
    pub fn selection_text(&self, sel: &Selection) -> String {
        let mut items: Vec<String> = sel
            .concrete
            .iter()
            .map(|&d| {
                format!(
                    "@{}",
                    self.schema.vertex_text(&self.representative(ComponentRef {
                        desc: d,
                        index: None
                    }))
                )
            })
            .collect();
        for (&d, idx) in &sel.classes {
            if let Descriptor::Class { fam, piece, .. } = &self.descs[d] {
                items.push(format!("{}{}", self.class_label(*fam, *piece), idx));
            }
        }
        format!("{{{}}}", items.join(", "))
    }

    pub fn parse_selection(&self, text: &str) -> Result<Selection> {
        let inner = text.trim();
        let inner = inner
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| {
                Error::Syntax(format!("expected braced component list, got `{text}`"))
            })?;
        let mut sel = Selection::default();
        for item in split_top_level(inner) {
            if let Some(v) = item.strip_prefix('@') {
                let v = self.schema.parse_vertex(v)?;
                match self.locate(&v) {
                    Some(r) if r.index.is_none() => {
                        sel.concrete.insert(r.desc);
                    }
                    Some(r) => {
                        sel = sel.union(&self.single(r));
                    }
                    None => return Err(Error::Syntax(format!("`{item}` lies in the separator"))),
                }
                continue;
            }
            let open = item
                .find('{')
                .ok_or_else(|| Error::Syntax(format!("malformed component item `{item}`")))?;
            let label = &item[..open];
            let indices: SemilinearSet = item[open..].parse()?;
            let desc = self
                .class_of
                .iter()
                .find(|(&(f, p), _)| self.class_label(f, p) == label)
                .map(|(_, &d)| d)
                .ok_or_else(|| {
                    Error::NonRepresentable(format!("`{label}` is not a class of components here"))
                })?;
            let mut part = Selection::default();
            part.classes.insert(desc, indices);
            sel = sel.union(&self.clamp(&part));
        }
        Ok(sel)
    }

    /// Text of a single descriptor, used in reports.
    pub fn descriptor_text(&self, d: usize) -> String {
        match &self.descs[d] {
            Descriptor::Concrete(s) => s.describe(&self.schema),
            Descriptor::Class {
                fam,
                piece,
                indices,
            } => {
                format!("class {}{}", self.class_label(*fam, *piece), indices)
            }
        }
    }
}

/// Splits on commas that are not inside braces.
pub(crate) fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

/// Components of `G - X` for the schema in `comps`, convenience for callers
/// holding a schema and a vertex list.
pub fn components(schema: &SchemaRef, x: &BTreeSet<Vertex>) -> Result<Arc<ComponentSet>> {
    ComponentSet::compute(schema, x.clone()).map(Arc::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{find_schema, Schema};

    fn x(schema: &Schema, text: &str) -> BTreeSet<Vertex> {
        schema.parse_vertex_list(text).unwrap()
    }

    #[test]
    fn path_minus_middle() {
        let g = crate::finite::FiniteGraph::path(3);
        let s = Arc::new(Schema::from_finite("P3", &g));
        let comps = ComponentSet::compute(&s, x(&s, "1")).unwrap();
        assert_eq!(comps.descriptors().len(), 2);
        assert!(comps
            .descriptors()
            .iter()
            .all(|d| matches!(d, Descriptor::Concrete(s) if s.len() == Some(1))));
    }

    #[test]
    fn star_minus_centre_is_a_class() {
        let s = find_schema("STAR").unwrap();
        let comps = ComponentSet::compute(&s, x(&s, "c")).unwrap();
        assert_eq!(
            comps.descriptors(),
            &[Descriptor::Class {
                fam: 0,
                piece: 0,
                indices: SemilinearSet::naturals()
            }]
        );
        let leaf = s.parse_vertex("L[7].x").unwrap();
        assert_eq!(
            comps.locate(&leaf),
            Some(ComponentRef {
                desc: 0,
                index: Some(7)
            })
        );
    }

    #[test]
    fn star_minus_leaf() {
        let s = find_schema("STAR").unwrap();
        let comps = ComponentSet::compute(&s, x(&s, "L[0].x")).unwrap();
        assert!(comps.is_single_component());
    }

    #[test]
    fn spider_legs() {
        let s = find_schema("SPIDER").unwrap();
        let comps = ComponentSet::compute(&s, x(&s, "c, legs[3].t[2]")).unwrap();
        // leg 3 splits into its head part and its tail; the other legs form a class
        assert_eq!(comps.descriptors().len(), 3);
        let tail = comps
            .locate(&s.parse_vertex("legs[3].t[9]").unwrap())
            .unwrap();
        let head = comps.locate(&s.parse_vertex("legs[3].h").unwrap()).unwrap();
        assert_ne!(tail, head);
        assert!(!comps.component_is_finite(tail));
        assert!(comps.component_is_finite(head));
        let other = comps
            .locate(&s.parse_vertex("legs[5].t[0]").unwrap())
            .unwrap();
        assert_eq!(other.index, Some(5));
    }

    #[test]
    fn ray_cut() {
        let s = find_schema("RAY").unwrap();
        let comps = ComponentSet::compute(&s, x(&s, "R[5]")).unwrap();
        assert_eq!(comps.descriptors().len(), 2);
        let tail = comps.locate(&s.parse_vertex("R[6]").unwrap()).unwrap();
        assert!(!comps.component_is_finite(tail));
        assert_eq!(
            comps.component_vertices(tail).min_vertex(),
            Some(s.parse_vertex("R[6]").unwrap())
        );
    }

    #[test]
    fn clique_remainder_stays_connected() {
        let s = find_schema("CLIQRAY").unwrap();
        let comps = ComponentSet::compute(&s, x(&s, "z, K[0], K[4]")).unwrap();
        assert_eq!(comps.descriptors().len(), 2);
    }

    #[test]
    fn selection_text_round_trip() {
        let s = find_schema("SPIDER").unwrap();
        let comps = ComponentSet::compute(&s, x(&s, "c, legs[3].h")).unwrap();
        let sel = comps
            .parse_selection("{@legs[3].t[0], legs{0+2n}}")
            .unwrap();
        assert_eq!(
            comps.parse_selection(&comps.selection_text(&sel)).unwrap(),
            sel
        );
        assert!(comps.parse_selection("{M{1}}").is_err());
    }

    #[test]
    fn unknown_vertices_are_rejected() {
        let s = find_schema("RAY").unwrap();
        let bad = BTreeSet::from([Vertex::Clique { clique: 0, idx: 1 }]);
        assert!(ComponentSet::compute(&s, bad).is_err());
    }
}
