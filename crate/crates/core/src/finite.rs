//! Finite simple graphs and their edge-list file format.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
}

impl FiniteGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize> {
        if self.index.contains_key(name) {
            return Err(Error::Syntax(format!("duplicate vertex `{name}`")));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.adj.push(BTreeSet::new());
        Ok(id)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::Syntax(format!("loop at `{}`", self.names[u])));
        }
        if !self.adj[u].insert(v) {
            return Err(Error::Syntax(format!(
                "parallel edge `{}`-`{}`",
                self.names[u], self.names[v]
            )));
        }
        self.adj[v].insert(u);
        Ok(())
    }

    /// Graph on `0..n` named by the decimal index.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.add_vertex(&i.to_string()).unwrap();
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v).expect("valid edge list");
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Self::from_edges(n, &edges)
    }

    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::from_edges(rows * cols, &edges)
    }

    /// Parses the `v <id>` / `e <id> <id>` format; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = Self::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            match words.as_slice() {
                ["v", id] => {
                    g.add_vertex(id)
                        .map_err(|e| Error::parse(line, e.to_string()))?;
                }
                ["e", a, b] => {
                    let u = g
                        .lookup(a)
                        .ok_or_else(|| Error::parse(line, format!("undeclared endpoint `{a}`")))?;
                    let v = g
                        .lookup(b)
                        .ok_or_else(|| Error::parse(line, format!("undeclared endpoint `{b}`")))?;
                    g.add_edge(u, v)
                        .map_err(|e| Error::parse(line, e.to_string()))?;
                }
                _ => return Err(Error::parse(line, format!("malformed line `{content}`"))),
            }
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            writeln!(out, "v {name}").unwrap();
        }
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", self.names[u], self.names[v]).unwrap();
        }
        out
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.names.len())
            .flat_map(|u| self.adj[u].range(u + 1..).map(move |&v| (u, v)))
            .collect()
    }

    /// Components of `G - removed`, each sorted, ordered by least vertex.
    pub fn components_avoiding(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let n = self.names.len();
        let mut seen = removed.to_vec();
        seen.resize(n, false);
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_avoiding(&[]).len() <= 1
    }

    /// Same graph with vertex `v` renamed to position `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let n = self.names.len();
        let mut inv = vec![0; n];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        let mut g = Self::new();
        for &old in &inv {
            g.add_vertex(&self.names[old]).unwrap();
        }
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).unwrap();
        }
        g
    }

    /// Graph with one edge removed.
    pub fn without_edge(&self, u: usize, v: usize) -> Self {
        let mut g = self.clone();
        g.adj[u].remove(&v);
        g.adj[v].remove(&u);
        g
    }

    /// DOT rendering with vertices in index order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for name in &self.names {
            writeln!(out, "  \"{}\";", name).unwrap();
        }
        for (u, v) in self.edges() {
            writeln!(out, "  \"{}\" -- \"{}\";", self.names[u], self.names[v]).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_k2() {
        let g = FiniteGraph::parse("v a\nv b\ne a b\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = FiniteGraph::parse("v a\ne a a").unwrap_err();
        assert_eq!(err, Error::parse(2, "loop at `a`"));
        let err = FiniteGraph::parse("# k\nv a\nv a").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = FiniteGraph::parse("v a\ne a b").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = FiniteGraph::parse("v a\nv b\ne a b\ne b a").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = FiniteGraph::parse("x y z").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn text_round_trip() {
        let g = FiniteGraph::complete(4);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(FiniteGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn components_of_path_minus_middle() {
        let g = FiniteGraph::path(3);
        let comps = g.components_avoiding(&[false, true, false]);
        assert_eq!(comps, vec![vec![0], vec![2]]);
    }

    #[test]
    fn dot_output() {
        assert_eq!(FiniteGraph::new().to_dot(), "graph G {\n}\n");
        let dot = FiniteGraph::complete(4).to_dot();
        assert_eq!(dot.matches("--").count(), 6);
    }
}
