//! Finitely presented infinite graphs.
//!
//! A schema is a finite core graph together with three kinds of infinite
//! gadgets: rays (optionally with a finite tooth path hanging off every spine
//! vertex), families of disjoint copies of a pattern indexed by ℕ, and
//! cliques on ℕ. Every family copy and clique vertex is joined to a fixed set
//! of core vertices, so all copies look alike from the core.

mod parse;
mod suite;

pub use suite::{find_schema, suite_graphs, suite_schemas, SuiteGraph, SuiteSchema};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finite::FiniteGraph;

/// A vertex of a body: either a named vertex or a ray vertex. Depth 0 is the
/// spine, depths `1..=teeth` walk down the tooth at that position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Local {
    V(u32),
    R { ray: u32, pos: u64, depth: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Top(Local),
    Fam { fam: u32, copy: u64, at: Local },
    Clique { clique: u32, idx: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayDecl {
    pub name: String,
    pub at: Option<u32>,
    pub teeth: u32,
}

/// A family as parsed: name, pattern and (core vertex, pattern vertex)
/// attachments.
pub(crate) type FamilyDecl = (String, Body, Vec<(u32, u32)>);

/// Named vertices, edges between them, and rays. Used both for the core and
/// for family patterns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Body {
    pub vertices: Vec<String>,
    pub edges: Vec<(u32, u32)>,
    pub rays: Vec<RayDecl>,
}

/// A connected component of a family pattern together with the core
/// vertices its copies are attached to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub verts: Vec<u32>,
    pub rays: Vec<u32>,
    pub hubs: BTreeSet<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    pub body: Body,
    pub attach: Vec<(u32, u32)>,
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clique {
    pub name: String,
    pub attach: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub top: Body,
    pub families: Vec<Family>,
    pub cliques: Vec<Clique>,
}

/// A finite induced subgraph of a schema together with the vertex map.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub graph: FiniteGraph,
    pub vertices: Vec<Vertex>,
    pub index: HashMap<Vertex, usize>,
}

impl Body {
    pub fn vertex_named(&self, name: &str) -> Option<u32> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .map(|i| i as u32)
    }

    pub fn ray_named(&self, name: &str) -> Option<u32> {
        self.rays
            .iter()
            .position(|r| r.name == name)
            .map(|i| i as u32)
    }

    /// Vertices whose ray positions are below `n`.
    fn locals_below(&self, n: u64) -> Vec<Local> {
        let mut out: Vec<Local> = (0..self.vertices.len() as u32).map(Local::V).collect();
        for (r, decl) in self.rays.iter().enumerate() {
            for pos in 0..n {
                for depth in 0..=decl.teeth {
                    out.push(Local::R {
                        ray: r as u32,
                        pos,
                        depth,
                    });
                }
            }
        }
        out
    }

    /// Internal edges among vertices whose ray positions are below `n`.
    fn edges_below(&self, n: u64) -> Vec<(Local, Local)> {
        let mut out: Vec<(Local, Local)> = self
            .edges
            .iter()
            .map(|&(a, b)| (Local::V(a), Local::V(b)))
            .collect();
        for (r, decl) in self.rays.iter().enumerate() {
            let ray = r as u32;
            if n == 0 {
                continue;
            }
            if let Some(at) = decl.at {
                out.push((
                    Local::V(at),
                    Local::R {
                        ray,
                        pos: 0,
                        depth: 0,
                    },
                ));
            }
            for pos in 0..n {
                if pos + 1 < n {
                    out.push((
                        Local::R { ray, pos, depth: 0 },
                        Local::R {
                            ray,
                            pos: pos + 1,
                            depth: 0,
                        },
                    ));
                }
                for depth in 0..decl.teeth {
                    out.push((
                        Local::R { ray, pos, depth },
                        Local::R {
                            ray,
                            pos,
                            depth: depth + 1,
                        },
                    ));
                }
            }
        }
        out
    }

    fn local_text(&self, l: Local) -> String {
        match l {
            Local::V(i) => self.vertices[i as usize].clone(),
            Local::R { ray, pos, depth } => {
                let name = &self.rays[ray as usize].name;
                if depth == 0 {
                    format!("{name}[{pos}]")
                } else {
                    format!("{name}[{pos}].{depth}")
                }
            }
        }
    }

    fn parse_local(&self, text: &str) -> Option<Local> {
        if let Some(i) = self.vertex_named(text) {
            return Some(Local::V(i));
        }
        let (name, pos, rest) = split_indexed(text)?;
        let ray = self.ray_named(name)?;
        let depth = match rest {
            None => 0,
            Some(d) => d.parse().ok()?,
        };
        (depth <= self.rays[ray as usize].teeth).then_some(Local::R { ray, pos, depth })
    }

    fn contains_local(&self, l: Local) -> bool {
        match l {
            Local::V(i) => (i as usize) < self.vertices.len(),
            Local::R { ray, depth, .. } => self
                .rays
                .get(ray as usize)
                .is_some_and(|decl| depth <= decl.teeth),
        }
    }
}

/// Splits `name[idx]` or `name[idx].rest`.
pub(crate) fn split_indexed(text: &str) -> Option<(&str, u64, Option<&str>)> {
    let open = text.find('[')?;
    let close = open + text[open..].find(']')?;
    let idx = text[open + 1..close].parse().ok()?;
    let tail = &text[close + 1..];
    let rest = if tail.is_empty() {
        None
    } else {
        Some(tail.strip_prefix('.')?)
    };
    Some((&text[..open], idx, rest))
}

impl Family {
    pub fn piece_of(&self, l: Local) -> u32 {
        let hit = |p: &Piece| match l {
            Local::V(i) => p.verts.contains(&i),
            Local::R { ray, .. } => p.rays.contains(&ray),
        };
        self.pieces
            .iter()
            .position(hit)
            .expect("local vertex belongs to a piece") as u32
    }

    /// A fixed vertex of the piece, used to locate copies.
    pub fn piece_rep(&self, piece: u32) -> Local {
        let p = &self.pieces[piece as usize];
        match p.verts.first() {
            Some(&v) => Local::V(v),
            None => Local::R {
                ray: p.rays[0],
                pos: 0,
                depth: 0,
            },
        }
    }

    pub fn has_infinite_pieces(&self) -> bool {
        !self.body.rays.is_empty()
    }

    /// Splits the pattern into connected pieces, recording their hubs.
    fn compute_pieces(body: &Body, attach: &[(u32, u32)]) -> Vec<Piece> {
        let n = body.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(a, b) in &body.edges {
            let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
            parent[ra.max(rb)] = ra.min(rb);
        }
        let mut pieces: Vec<Piece> = Vec::new();
        let mut root_piece: HashMap<usize, usize> = HashMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            let idx = *root_piece.entry(r).or_insert_with(|| {
                pieces.push(Piece {
                    verts: Vec::new(),
                    rays: Vec::new(),
                    hubs: BTreeSet::new(),
                });
                pieces.len() - 1
            });
            pieces[idx].verts.push(v as u32);
        }
        for (r, decl) in body.rays.iter().enumerate() {
            let at = decl.at.expect("pattern rays are attached") as usize;
            let idx = root_piece[&find(&mut parent, at)];
            pieces[idx].rays.push(r as u32);
        }
        for &(core, pv) in attach {
            let idx = root_piece[&find(&mut parent, pv as usize)];
            pieces[idx].hubs.insert(core);
        }
        pieces
    }
}

impl Schema {
    pub fn parse(text: &str) -> Result<Self> {
        parse::parse_schema(text)
    }

    pub fn parse_named(name: &str, text: &str) -> Result<Self> {
        let mut s = parse::parse_schema(text)?;
        s.name = name.to_string();
        Ok(s)
    }

    /// The schema whose core is `g` and which has nothing else.
    pub fn from_finite(name: &str, g: &FiniteGraph) -> Self {
        let top = Body {
            vertices: g.names().to_vec(),
            edges: g
                .edges()
                .into_iter()
                .map(|(u, v)| (u as u32, v as u32))
                .collect(),
            rays: Vec::new(),
        };
        Schema {
            name: name.to_string(),
            top,
            families: Vec::new(),
            cliques: Vec::new(),
        }
    }

    pub(crate) fn assemble(
        top: Body,
        families: Vec<FamilyDecl>,
        cliques: Vec<Clique>,
    ) -> Self {
        let families = families
            .into_iter()
            .map(|(name, body, attach)| {
                let pieces = Family::compute_pieces(&body, &attach);
                Family {
                    name,
                    body,
                    attach,
                    pieces,
                }
            })
            .collect();
        Schema {
            name: String::new(),
            top,
            families,
            cliques,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.top.rays.is_empty() && self.families.is_empty() && self.cliques.is_empty()
    }

    /// No vertex of infinite degree.
    pub fn is_locally_finite(&self) -> bool {
        self.families.is_empty() && self.cliques.is_empty()
    }

    pub fn core_count(&self) -> usize {
        self.top.vertices.len()
    }

    pub fn core_vertex(&self, name: &str) -> Option<Vertex> {
        self.top
            .vertex_named(name)
            .map(|i| Vertex::Top(Local::V(i)))
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        match *v {
            Vertex::Top(l) => self.top.contains_local(l),
            Vertex::Fam { fam, at, .. } => self
                .families
                .get(fam as usize)
                .is_some_and(|f| f.body.contains_local(at)),
            Vertex::Clique { clique, .. } => (clique as usize) < self.cliques.len(),
        }
    }

    /// Index of `v` in its ray, family or clique; zero for core vertices.
    pub fn depth_index(v: &Vertex) -> u64 {
        match *v {
            Vertex::Top(Local::V(_)) => 0,
            Vertex::Top(Local::R { pos, .. }) => pos,
            Vertex::Fam { copy, at, .. } => match at {
                Local::V(_) => copy,
                Local::R { pos, .. } => copy.max(pos),
            },
            Vertex::Clique { idx, .. } => idx,
        }
    }

    pub fn vertex_text(&self, v: &Vertex) -> String {
        match *v {
            Vertex::Top(l) => self.top.local_text(l),
            Vertex::Fam { fam, copy, at } => {
                let f = &self.families[fam as usize];
                format!("{}[{}].{}", f.name, copy, f.body.local_text(at))
            }
            Vertex::Clique { clique, idx } => {
                format!("{}[{}]", self.cliques[clique as usize].name, idx)
            }
        }
    }

    pub fn parse_vertex(&self, text: &str) -> Result<Vertex> {
        let text = text.trim();
        if let Some(v) = self.core_vertex(text) {
            return Ok(v);
        }
        let unknown = || Error::UnknownVertex(text.to_string());
        if let Some(l) = self.top.parse_local(text) {
            if matches!(l, Local::R { .. }) {
                return Ok(Vertex::Top(l));
            }
        }
        let (name, idx, rest) = split_indexed(text).ok_or_else(unknown)?;
        if let Some(f) = self.families.iter().position(|f| f.name == name) {
            let at = self.families[f]
                .body
                .parse_local(rest.ok_or_else(unknown)?)
                .ok_or_else(unknown)?;
            return Ok(Vertex::Fam {
                fam: f as u32,
                copy: idx,
                at,
            });
        }
        if let Some(q) = self.cliques.iter().position(|q| q.name == name) {
            if rest.is_none() {
                return Ok(Vertex::Clique {
                    clique: q as u32,
                    idx,
                });
            }
        }
        Err(unknown())
    }

    /// Parses a comma or whitespace separated list, optionally braced.
    pub fn parse_vertex_list(&self, text: &str) -> Result<BTreeSet<Vertex>> {
        let inner = text.trim();
        let inner = inner
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(inner);
        inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| self.parse_vertex(t))
            .collect()
    }

    pub fn vertex_list_text(&self, set: &BTreeSet<Vertex>) -> String {
        let items: Vec<String> = set.iter().map(|v| self.vertex_text(v)).collect();
        format!("{{{}}}", items.join(","))
    }

    /// Induced subgraph on the core, ray positions below `n`, and family
    /// and clique indices below `n` (pattern ray positions also below `n`).
    pub fn truncate(&self, n: u64) -> Truncation {
        let mut vertices: Vec<Vertex> = self
            .top
            .locals_below(n)
            .into_iter()
            .map(Vertex::Top)
            .collect();
        let mut edges: Vec<(Vertex, Vertex)> = self
            .top
            .edges_below(n)
            .into_iter()
            .map(|(a, b)| (Vertex::Top(a), Vertex::Top(b)))
            .collect();
        for (f, fam) in self.families.iter().enumerate() {
            let fam_id = f as u32;
            let locals = fam.body.locals_below(n);
            let body_edges = fam.body.edges_below(n);
            for copy in 0..n {
                let lift = |l: Local| Vertex::Fam {
                    fam: fam_id,
                    copy,
                    at: l,
                };
                vertices.extend(locals.iter().map(|&l| lift(l)));
                edges.extend(body_edges.iter().map(|&(a, b)| (lift(a), lift(b))));
                edges.extend(
                    fam.attach
                        .iter()
                        .map(|&(c, x)| (Vertex::Top(Local::V(c)), lift(Local::V(x)))),
                );
            }
        }
        for (q, cl) in self.cliques.iter().enumerate() {
            let clique = q as u32;
            for idx in 0..n {
                let v = Vertex::Clique { clique, idx };
                vertices.push(v);
                for j in 0..idx {
                    edges.push((Vertex::Clique { clique, idx: j }, v));
                }
                edges.extend(cl.attach.iter().map(|&c| (Vertex::Top(Local::V(c)), v)));
            }
        }
        let mut graph = FiniteGraph::new();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            graph
                .add_vertex(&self.vertex_text(v))
                .expect("vertex texts are unique");
            index.insert(*v, i);
        }
        for (a, b) in edges {
            graph
                .add_edge(index[&a], index[&b])
                .expect("schema edges are simple");
        }
        Truncation {
            graph,
            vertices,
            index,
        }
    }

    /// The pieces of family `f` that contain no ray.
    pub fn finite_piece(&self, fam: u32, piece: u32) -> bool {
        self.families[fam as usize].pieces[piece as usize]
            .rays
            .is_empty()
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub type SchemaRef = Arc<Schema>;

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> Schema {
        Schema::parse("core: c\nfamily L pattern { v x } attach c x\n").unwrap()
    }

    #[test]
    fn truncating_a_ray_gives_a_path() {
        let s = Schema::parse("ray R").unwrap();
        let t = s.truncate(3);
        assert_eq!(t.graph.vertex_count(), 3);
        assert_eq!(t.graph.edge_count(), 2);
    }

    #[test]
    fn truncating_a_star() {
        let t = star().truncate(5);
        assert_eq!(t.graph.vertex_count(), 6);
        assert_eq!(t.graph.edge_count(), 5);
        assert_eq!(t.graph.degree(0), 5);
    }

    #[test]
    fn truncating_a_clique() {
        let s = Schema::parse("clique K").unwrap();
        let t = s.truncate(4);
        assert_eq!(t.graph.vertex_count(), 4);
        assert_eq!(t.graph.edge_count(), 6);
    }

    #[test]
    fn truncation_is_monotone() {
        let s =
            Schema::parse("core: c\nfamily legs pattern { v h; ray t at h } attach c h\n").unwrap();
        let small = s.truncate(4);
        let big = s.truncate(7);
        for (u, v) in small.graph.edges() {
            let (a, b) = (small.vertices[u], small.vertices[v]);
            assert!(big.graph.adjacent(big.index[&a], big.index[&b]));
        }
    }

    #[test]
    fn vertex_text_round_trip() {
        let s = Schema::parse(
            "core: c\nray R at c teeth 2\nfamily legs pattern { v h; ray t at h } attach c h\nclique K attach c\n",
        )
        .unwrap();
        let t = s.truncate(3);
        for v in &t.vertices {
            let text = s.vertex_text(v);
            assert_eq!(s.parse_vertex(&text).unwrap(), *v, "{text}");
        }
        assert!(s.parse_vertex("R[1].3").is_err());
        assert!(s.parse_vertex("zz").is_err());
    }

    #[test]
    fn pieces_and_hubs() {
        let s = Schema::parse(
            "core: a b\nfamily P pattern { v x y z; e x y } attach a x attach b x z\n",
        )
        .unwrap();
        let f = &s.families[0];
        assert_eq!(f.pieces.len(), 2);
        assert_eq!(f.pieces[0].verts, vec![0, 1]);
        assert_eq!(f.pieces[0].hubs, BTreeSet::from([0, 1]));
        assert_eq!(f.pieces[1].hubs, BTreeSet::from([1]));
    }
}
