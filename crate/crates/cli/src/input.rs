//! Resolving command-line inputs: bundled suite names or files.

use std::fmt::Write;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};
use tangles::finite::FiniteGraph;
use tangles::schema::{suite_graphs, suite_schemas, Schema, SchemaRef};

use crate::CliError;

/// An input as given, its text and the digest of that text.
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn digest(&self) -> String {
        digest_hex(self.text.as_bytes())
    }
}

pub fn digest_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::new(), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        })
}

pub enum Input {
    Schema(SchemaRef),
    Graph(FiniteGraph),
}

fn read(arg: &str) -> Result<String, CliError> {
    fs::read_to_string(arg).map_err(|e| CliError::input(format!("cannot read `{arg}`: {e}")))
}

fn stem(arg: &str) -> String {
    Path::new(arg)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(arg)
        .to_string()
}

fn looks_like_graph(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .all(|l| l.starts_with("v ") || l.starts_with("e "))
}

pub fn schema(arg: &str) -> Result<(SchemaRef, Source), CliError> {
    match any(arg)? {
        (Input::Schema(s), src) => Ok((s, src)),
        (Input::Graph(_), _) => Err(CliError::input(format!(
            "`{arg}` is a finite graph, not a schema"
        ))),
    }
}

pub fn graph(arg: &str) -> Result<(FiniteGraph, Source), CliError> {
    match any(arg)? {
        (Input::Graph(g), src) => Ok((g, src)),
        (Input::Schema(_), _) => Err(CliError::input(format!(
            "`{arg}` is a schema, not a finite graph"
        ))),
    }
}

/// A bundled schema or graph by name, else a file holding either.
pub fn any(arg: &str) -> Result<(Input, Source), CliError> {
    if let Some(s) = suite_schemas()
        .iter()
        .find(|s| s.name.eq_ignore_ascii_case(arg))
    {
        let src = Source {
            name: s.name.to_string(),
            text: s.text.to_string(),
        };
        return Ok((Input::Schema(s.schema()), src));
    }
    if let Some(g) = suite_graphs()
        .into_iter()
        .find(|g| g.name.eq_ignore_ascii_case(arg))
    {
        let src = Source {
            name: g.name.to_string(),
            text: g.graph.to_text(),
        };
        return Ok((Input::Graph(g.graph), src));
    }
    let text = read(arg)?;
    let input = if looks_like_graph(&text) {
        Input::Graph(FiniteGraph::parse(&text)?)
    } else {
        Input::Schema(Arc::new(Schema::parse_named(&stem(arg), &text)?))
    };
    Ok((
        input,
        Source {
            name: arg.to_string(),
            text,
        },
    ))
}

pub fn file(arg: &str) -> Result<Source, CliError> {
    Ok(Source {
        name: arg.to_string(),
        text: read(arg)?,
    })
}

/// Digest source for commands that run on the bundled suite.
pub fn suite() -> Source {
    let mut text = String::new();
    for s in suite_schemas() {
        writeln!(text, "schema {}\n{}", s.name, s.text).unwrap();
    }
    for g in suite_graphs() {
        writeln!(text, "graph {}\n{}", g.name, g.graph.to_text()).unwrap();
    }
    Source {
        name: "suite".into(),
        text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_detection() {
        assert!(looks_like_graph("# c\nv a\nv b\ne a b\n"));
        assert!(!looks_like_graph("core c\nfamily L: ray attach c\n"));
    }

    #[test]
    fn suite_names_resolve() {
        assert!(matches!(any("star").unwrap().0, Input::Schema(_)));
        assert!(matches!(any("K4").unwrap().0, Input::Graph(_)));
        assert_eq!(digest_hex(b"").len(), 64);
    }
}
