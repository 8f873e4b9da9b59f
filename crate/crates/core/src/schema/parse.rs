//! The schema description language.
//!
//! ```text
//! core: c d
//! edge: c d
//! ray R at c teeth 1
//! family L pattern { v x y; e x y; ray t at y } attach c x attach d x
//! clique K attach c
//! ```

use std::collections::HashSet;

use super::{Body, Clique, FamilyDecl, RayDecl, Schema};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Colon,
    Semi,
    Open,
    Close,
    Newline,
}

fn tokenize(text: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut word = String::new();
        let flush = |word: &mut String, out: &mut Vec<(usize, Tok)>| {
            if !word.is_empty() {
                out.push((line, Tok::Word(std::mem::take(word))));
            }
        };
        for ch in content.chars() {
            let punct = match ch {
                ':' => Some(Tok::Colon),
                ';' => Some(Tok::Semi),
                '{' => Some(Tok::Open),
                '}' => Some(Tok::Close),
                _ => None,
            };
            if let Some(p) = punct {
                flush(&mut word, &mut out);
                out.push((line, p));
            } else if ch.is_whitespace() {
                flush(&mut word, &mut out);
            } else {
                word.push(ch);
            }
        }
        flush(&mut word, &mut out);
        out.push((line, Tok::Newline));
    }
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    names: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or(1, |(l, _)| *l)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line(), msg)
    }

    fn word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    /// Words up to the end of the statement.
    fn words_to_end(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        while let Some(Tok::Word(w)) = self.peek() {
            out.push(w.clone());
            self.pos += 1;
        }
        out
    }

    fn end_statement(&mut self) -> Result<()> {
        match self.peek() {
            None | Some(Tok::Newline) | Some(Tok::Semi) => Ok(()),
            Some(t) => Err(self.err(format!("unexpected {t:?}"))),
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(Tok::Newline) | Some(Tok::Semi)) {
            self.pos += 1;
        }
    }

    fn fresh_name(&mut self, name: &str) -> Result<()> {
        if !self.names.insert(name.to_string()) {
            return Err(self.err(format!("duplicate name `{name}`")));
        }
        Ok(())
    }

    fn ray_decl(&mut self, body: &Body) -> Result<RayDecl> {
        let name = self.word("ray name")?;
        if body.ray_named(&name).is_some() || body.vertex_named(&name).is_some() {
            return Err(self.err(format!("duplicate name `{name}`")));
        }
        let mut decl = RayDecl {
            name,
            at: None,
            teeth: 0,
        };
        while let Some(Tok::Word(w)) = self.peek() {
            match w.as_str() {
                "at" => {
                    self.pos += 1;
                    let v = self.word("attachment vertex")?;
                    decl.at = Some(
                        body.vertex_named(&v)
                            .ok_or_else(|| self.err(format!("unknown vertex `{v}`")))?,
                    );
                }
                "teeth" => {
                    self.pos += 1;
                    let n = self.word("tooth length")?;
                    decl.teeth = n
                        .parse()
                        .map_err(|_| self.err(format!("bad tooth length `{n}`")))?;
                }
                other => return Err(self.err(format!("unexpected `{other}` in ray declaration"))),
            }
        }
        Ok(decl)
    }

    fn edge_pairs(&self, body: &mut Body, words: &[String]) -> Result<()> {
        if !words.len().is_multiple_of(2) || words.is_empty() {
            return Err(self.err("edges need pairs of endpoints"));
        }
        for pair in words.chunks(2) {
            let a = body
                .vertex_named(&pair[0])
                .ok_or_else(|| self.err(format!("unknown vertex `{}`", pair[0])))?;
            let b = body
                .vertex_named(&pair[1])
                .ok_or_else(|| self.err(format!("unknown vertex `{}`", pair[1])))?;
            if a == b {
                return Err(self.err(format!("loop at `{}`", pair[0])));
            }
            let e = (a.min(b), a.max(b));
            if body.edges.contains(&e) {
                return Err(self.err(format!("parallel edge `{}`-`{}`", pair[0], pair[1])));
            }
            body.edges.push(e);
        }
        Ok(())
    }

    fn add_vertices(&self, body: &mut Body, words: Vec<String>) -> Result<()> {
        for w in words {
            if body.vertex_named(&w).is_some() {
                return Err(self.err(format!("duplicate vertex `{w}`")));
            }
            body.vertices.push(w);
        }
        Ok(())
    }

    fn pattern(&mut self) -> Result<Body> {
        self.expect(Tok::Open, "`{`")?;
        let mut body = Body::default();
        loop {
            self.skip_separators();
            match self.next() {
                Some(Tok::Close) => break,
                Some(Tok::Word(w)) => match w.as_str() {
                    "v" => {
                        let words = self.words_to_end();
                        self.add_vertices(&mut body, words)?;
                    }
                    "e" => {
                        let words = self.words_to_end();
                        self.edge_pairs(&mut body, &words)?;
                    }
                    "ray" => {
                        let decl = self.ray_decl(&body)?;
                        if decl.at.is_none() {
                            return Err(self.err("pattern rays need an attachment vertex"));
                        }
                        body.rays.push(decl);
                    }
                    other => return Err(self.err(format!("unknown pattern statement `{other}`"))),
                },
                _ => return Err(self.err("unterminated pattern")),
            }
        }
        if body.vertices.is_empty() {
            return Err(self.err("empty pattern"));
        }
        Ok(body)
    }

    fn core_ref(&self, top: &Body, name: &str) -> Result<u32> {
        top.vertex_named(name)
            .ok_or_else(|| self.err(format!("unknown core vertex `{name}`")))
    }
}

pub(super) fn parse_schema(text: &str) -> Result<Schema> {
    let mut p = Parser {
        toks: tokenize(text),
        pos: 0,
        names: HashSet::new(),
    };
    let mut top = Body::default();
    let mut families: Vec<FamilyDecl> = Vec::new();
    let mut cliques: Vec<Clique> = Vec::new();
    loop {
        p.skip_separators();
        let Some(tok) = p.next() else { break };
        let Tok::Word(kw) = tok else {
            p.pos -= 1;
            return Err(p.err("expected a statement"));
        };
        match kw.as_str() {
            "core" => {
                p.expect(Tok::Colon, "`:` after core")?;
                let words = p.words_to_end();
                for w in &words {
                    if p.names.contains(w) {
                        return Err(p.err(format!("duplicate name `{w}`")));
                    }
                }
                p.add_vertices(&mut top, words)?;
            }
            "edge" => {
                p.expect(Tok::Colon, "`:` after edge")?;
                let words = p.words_to_end();
                p.edge_pairs(&mut top, &words)?;
            }
            "ray" => {
                let decl = p.ray_decl(&top)?;
                p.fresh_name(&decl.name)?;
                top.rays.push(decl);
            }
            "family" => {
                let name = p.word("family name")?;
                if top.vertex_named(&name).is_some() {
                    return Err(p.err(format!("duplicate name `{name}`")));
                }
                p.fresh_name(&name)?;
                let kw = p.word("`pattern`")?;
                if kw != "pattern" {
                    return Err(p.err("expected `pattern`"));
                }
                let body = p.pattern()?;
                let mut attach = Vec::new();
                loop {
                    let save = p.pos;
                    while p.peek() == Some(&Tok::Newline) {
                        p.pos += 1;
                    }
                    if p.peek() != Some(&Tok::Word("attach".into())) {
                        p.pos = save;
                        break;
                    }
                    p.pos += 1;
                    let mut words = Vec::new();
                    while let Some(Tok::Word(w)) = p.peek() {
                        if w == "attach" {
                            break;
                        }
                        words.push(w.clone());
                        p.pos += 1;
                    }
                    let Some((core, pvs)) = words.split_first() else {
                        return Err(p.err("attach needs a core vertex"));
                    };
                    let c = p.core_ref(&top, core)?;
                    if pvs.is_empty() {
                        return Err(p.err("attach needs pattern vertices"));
                    }
                    for pv in pvs {
                        let x = body
                            .vertex_named(pv)
                            .ok_or_else(|| p.err(format!("unknown pattern vertex `{pv}`")))?;
                        if !attach.contains(&(c, x)) {
                            attach.push((c, x));
                        }
                    }
                }
                families.push((name, body, attach));
            }
            "clique" => {
                let name = p.word("clique name")?;
                if top.vertex_named(&name).is_some() {
                    return Err(p.err(format!("duplicate name `{name}`")));
                }
                p.fresh_name(&name)?;
                let mut attach = Vec::new();
                if p.peek() == Some(&Tok::Word("attach".into())) {
                    p.pos += 1;
                    for w in p.words_to_end() {
                        let c = p.core_ref(&top, &w)?;
                        if !attach.contains(&c) {
                            attach.push(c);
                        }
                    }
                }
                cliques.push(Clique { name, attach });
            }
            other => return Err(p.err(format!("unknown statement `{other}`"))),
        }
        p.end_statement()?;
    }
    for r in &top.rays {
        if top.vertex_named(&r.name).is_some() {
            return Err(Error::Syntax(format!("duplicate name `{}`", r.name)));
        }
    }
    let schema = Schema::assemble(top, families, cliques);
    if schema.top.vertices.is_empty() && schema.top.rays.is_empty() && schema.cliques.is_empty() {
        return Err(Error::Syntax("empty schema".into()));
    }
    if !crate::components::ComponentSet::compute(
        &std::sync::Arc::new(schema.clone()),
        Default::default(),
    )
    .expect("empty deletion set is explicit")
    .is_single_component()
    {
        return Err(Error::Syntax("schema graph is disconnected".into()));
    }
    Ok(schema)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ray() {
        let s = parse_schema("ray R\n").unwrap();
        assert_eq!(s.core_count(), 0);
        assert_eq!(s.top.rays.len(), 1);
    }

    #[test]
    fn star_is_valid() {
        let s = parse_schema("core: c\nfamily L pattern { v x } attach c x\n").unwrap();
        assert_eq!(s.families.len(), 1);
        assert_eq!(s.families[0].pieces[0].hubs.len(), 1);
    }

    #[test]
    fn multiline_family() {
        let s = parse_schema(
            "core: a b\nfamily P pattern {\n  v x y\n  e x y\n}\nattach a x\nattach b y\n",
        )
        .unwrap();
        assert_eq!(s.families[0].attach, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn errors() {
        let e = parse_schema("core: c\nfamily L pattern { v x } attach z x\n").unwrap_err();
        assert_eq!(e, Error::parse(2, "unknown core vertex `z`"));
        let e = parse_schema("core: c\nray R at c\nray R at c\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_schema("core: c\nfamily L pattern { } attach c x\n").unwrap_err();
        assert_eq!(e, Error::parse(2, "empty pattern"));
        let e = parse_schema("core: c d\n").unwrap_err();
        assert_eq!(e, Error::Syntax("schema graph is disconnected".into()));
        let e = parse_schema("core: c\nfamily L pattern { v x y } attach c x\n").unwrap_err();
        assert_eq!(e, Error::Syntax("schema graph is disconnected".into()));
        assert!(parse_schema("core: c\nfrob\n").is_err());
        assert!(parse_schema("").is_err());
    }
}
