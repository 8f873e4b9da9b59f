//! Vertex connectivity, k-blocks, subdivided complete graphs on a given
//! branch set, and the ℵ0-blocks of schema graphs.

use std::collections::{BTreeSet, VecDeque};

use crate::finite::FiniteGraph;
use crate::schema::{Local, Schema, Vertex};
use crate::semilinear::SemilinearSet;
use crate::symset::SymVertexSet;

/// The least number of vertices other than `s` and `t` meeting every
/// `s`–`t` path, or `None` if `s` and `t` are adjacent or equal. Counting
/// stops at `limit`.
pub fn min_vertex_cut(g: &FiniteGraph, s: usize, t: usize, limit: usize) -> Option<usize> {
    if s == t || g.adjacent(s, t) {
        return None;
    }
    // Vertex v becomes an arc 2v -> 2v+1 of capacity 1; edges become pairs of
    // arcs of unbounded capacity between the out- and in-copies.
    let n = g.vertex_count();
    let big = i32::MAX / 4;
    let mut cap = vec![vec![0i32; 2 * n]; 2 * n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let mut arc = |a: usize, b: usize, c: i32, cap: &mut Vec<Vec<i32>>| {
        if cap[a][b] == 0 && cap[b][a] == 0 {
            adj[a].push(b);
            adj[b].push(a);
        }
        cap[a][b] += c;
    };
    for v in 0..n {
        arc(
            2 * v,
            2 * v + 1,
            if v == s || v == t { big } else { 1 },
            &mut cap,
        );
    }
    for (u, v) in g.edges() {
        arc(2 * u + 1, 2 * v, big, &mut cap);
        arc(2 * v + 1, 2 * u, big, &mut cap);
    }
    let (src, dst) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    while flow < limit {
        let mut prev = vec![usize::MAX; 2 * n];
        prev[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(a) = queue.pop_front() {
            if a == dst {
                break;
            }
            for &b in &adj[a] {
                if prev[b] == usize::MAX && cap[a][b] > 0 {
                    prev[b] = a;
                    queue.push_back(b);
                }
            }
        }
        if prev[dst] == usize::MAX {
            break;
        }
        let mut b = dst;
        while b != src {
            let a = prev[b];
            cap[a][b] -= 1;
            cap[b][a] += 1;
            b = a;
        }
        flow += 1;
    }
    Some(flow)
}

/// No two vertices of `set` are separated by fewer than `k` other vertices.
pub fn is_inseparable(g: &FiniteGraph, set: &[usize], k: usize) -> bool {
    blocking_pair(g, set, k).is_none()
}

/// Two vertices of `set` separated by fewer than `k` vertices, with the
/// size of a smallest separator.
pub fn blocking_pair(g: &FiniteGraph, set: &[usize], k: usize) -> Option<(usize, usize, usize)> {
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            if let Some(c) = min_vertex_cut(g, a, b, k) {
                if c < k {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// The maximal sets of at least `k` vertices no two of which are separated
/// by fewer than `k` vertices, sorted.
pub fn k_blocks(g: &FiniteGraph, k: usize) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut insep = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let ok = min_vertex_cut(g, a, b, k).is_none_or(|c| c >= k);
            insep[a][b] = ok;
            insep[b][a] = ok;
        }
    }
    let mut out = Vec::new();
    bron_kerbosch(&insep, Vec::new(), (0..n).collect(), Vec::new(), &mut out);
    out.retain(|c| c.len() >= k.max(1));
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot = *p
        .iter()
        .chain(&x)
        .max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count())
        .unwrap();
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let x2 = x.iter().copied().filter(|&w| adj[v][w]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.retain(|&w| w != v);
        x.push(v);
    }
}

/// A subdivision of the complete graph with branch vertices `branch`: one
/// path per pair, listed in pair order, each including its ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TkCertificate {
    pub branch: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TkFailure {
    pub pair: (usize, usize),
    pub reason: String,
}

const TK_NODE_LIMIT: usize = 2_000_000;

/// Builds a subdivided complete graph on `branch`, after checking that no
/// two branch vertices are separated by fewer than `|branch|` vertices.
/// Paths are chosen pair by pair, avoiding the other branch vertices and
/// all inner vertices chosen so far, backtracking when a later pair gets
/// stuck.
pub fn build_tk(g: &FiniteGraph, branch: &[usize]) -> Result<TkCertificate, TkFailure> {
    let k = branch.len();
    if let Some((a, b, c)) = blocking_pair(g, branch, k) {
        return Err(TkFailure {
            pair: (a, b),
            reason: format!(
                "{} and {} are separated by {c} < {k} vertices",
                g.name(a),
                g.name(b)
            ),
        });
    }
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (branch[i], branch[j])))
        .collect();
    let mut used = vec![false; g.vertex_count()];
    for &v in branch {
        used[v] = true;
    }
    let mut search = TkSearch {
        g,
        pairs: &pairs,
        used,
        paths: Vec::new(),
        nodes: 0,
        stuck: 0,
    };
    if search.route(0) {
        let cert = TkCertificate {
            branch: branch.to_vec(),
            paths: search.paths,
        };
        debug_assert!(verify_tk(g, &cert).is_ok());
        Ok(cert)
    } else {
        let pair = pairs[search.stuck];
        let reason = if search.nodes >= TK_NODE_LIMIT {
            "search limit reached".to_string()
        } else {
            "no internally disjoint paths".to_string()
        };
        Err(TkFailure {
            pair,
            reason: format!("{reason} at {}-{}", g.name(pair.0), g.name(pair.1)),
        })
    }
}

struct TkSearch<'a> {
    g: &'a FiniteGraph,
    pairs: &'a [(usize, usize)],
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
    nodes: usize,
    stuck: usize,
}

impl TkSearch<'_> {
    fn route(&mut self, i: usize) -> bool {
        if i == self.pairs.len() {
            return true;
        }
        self.stuck = self.stuck.max(i);
        let (a, b) = self.pairs[i];
        let mut path = vec![a];
        self.extend(i, b, &mut path)
    }

    fn extend(&mut self, i: usize, b: usize, path: &mut Vec<usize>) -> bool {
        self.nodes += 1;
        if self.nodes >= TK_NODE_LIMIT {
            return false;
        }
        let last = *path.last().unwrap();
        let mut next: Vec<usize> = self.g.neighbors(last).collect();
        // Try the direct edge first, then short detours.
        next.sort_by_key(|&w| (w != b, self.g.adjacent(w, b) as u8 == 0));
        for w in next {
            if w == b {
                path.push(b);
                self.paths.push(path.clone());
                if self.route(i + 1) {
                    return true;
                }
                self.paths.pop();
                path.pop();
            } else if !self.used[w] {
                self.used[w] = true;
                path.push(w);
                if self.extend(i, b, path) {
                    return true;
                }
                path.pop();
                self.used[w] = false;
            }
            if self.nodes >= TK_NODE_LIMIT {
                return false;
            }
        }
        false
    }
}

/// Checks a certificate edge by edge: one path per pair of branch vertices
/// joining them, inner vertices off the branch set and used by one path
/// only.
pub fn verify_tk(g: &FiniteGraph, cert: &TkCertificate) -> Result<(), String> {
    let k = cert.branch.len();
    if cert.paths.len() != k * (k - 1) / 2 {
        return Err(format!(
            "expected {} paths, got {}",
            k * (k - 1) / 2,
            cert.paths.len()
        ));
    }
    let branch: BTreeSet<usize> = cert.branch.iter().copied().collect();
    let mut inner_seen = BTreeSet::new();
    let mut p = cert.paths.iter();
    for i in 0..k {
        for j in i + 1..k {
            let path = p.next().unwrap();
            let (a, b) = (cert.branch[i], cert.branch[j]);
            if path.first() != Some(&a) || path.last() != Some(&b) {
                return Err(format!("path {path:?} does not join {a} and {b}"));
            }
            for w in path.windows(2) {
                if !g.adjacent(w[0], w[1]) {
                    return Err(format!("{} and {} are not adjacent", w[0], w[1]));
                }
            }
            for &v in &path[1..path.len() - 1] {
                if branch.contains(&v) {
                    return Err(format!("path {path:?} passes through branch vertex {v}"));
                }
                if !inner_seen.insert(v) {
                    return Err(format!("inner vertex {v} used twice"));
                }
            }
        }
    }
    Ok(())
}

/// Infinite sets of vertices no two of which are separated by finitely many
/// vertices: each clique together with the core vertices it is attached to.
/// Everything else is finitely separable from all but finitely many
/// vertices, so these are all of them.
pub fn aleph0_blocks(schema: &Schema) -> Vec<SymVertexSet> {
    schema
        .cliques
        .iter()
        .enumerate()
        .map(|(q, c)| {
            let mut b = SymVertexSet::clique_part(q as u32, SemilinearSet::naturals());
            for &h in &c.attach {
                b.insert(Vertex::Top(Local::V(h)));
            }
            b
        })
        .collect()
}
