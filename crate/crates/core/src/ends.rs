//! Ends of schema graphs.
//!
//! Every ray of the core, every ray in every family copy and every clique
//! determines an end. Rays hang off single vertices and cliques meet the rest
//! of the graph in finitely many vertices, so no two of these are equivalent.

use std::collections::BTreeSet;

use crate::components::{ComponentRef, ComponentSet};
use crate::error::{Error, Result};
use crate::schema::{split_indexed, Local, Schema, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndRep {
    Ray(u32),
    PatternRay { fam: u32, ray: u32, copy: u64 },
    Clique(u32),
}

/// Ends grouped for reporting: single ends, and one entry per pattern ray
/// standing for its copies in every index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EndClass {
    Single(EndRep),
    PerCopy { fam: u32, ray: u32 },
}

pub fn end_classes(schema: &Schema) -> Vec<EndClass> {
    let mut out: Vec<EndClass> = (0..schema.top.rays.len() as u32)
        .map(|r| EndClass::Single(EndRep::Ray(r)))
        .collect();
    for (f, fam) in schema.families.iter().enumerate() {
        for r in 0..fam.body.rays.len() as u32 {
            out.push(EndClass::PerCopy {
                fam: f as u32,
                ray: r,
            });
        }
    }
    out.extend((0..schema.cliques.len() as u32).map(|q| EndClass::Single(EndRep::Clique(q))));
    out
}

/// Ends whose copy index (if any) is below `n`.
pub fn ends_below(schema: &Schema, n: u64) -> Vec<EndRep> {
    let mut out = Vec::new();
    for class in end_classes(schema) {
        match class {
            EndClass::Single(e) => out.push(e),
            EndClass::PerCopy { fam, ray } => {
                out.extend((0..n).map(|copy| EndRep::PatternRay { fam, ray, copy }))
            }
        }
    }
    out.sort();
    out
}

impl EndRep {
    /// A vertex of the end's ray or clique that avoids `x`, beyond every
    /// vertex of `x` on it, so that it lies in the component of `G - x`
    /// where the end lives.
    pub fn tail_vertex(&self, x: &BTreeSet<Vertex>) -> Vertex {
        match *self {
            EndRep::Ray(r) => {
                let pos = x
                    .iter()
                    .filter_map(|v| match v {
                        Vertex::Top(Local::R { ray, pos, .. }) if *ray == r => Some(pos + 1),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(0);
                Vertex::Top(Local::R {
                    ray: r,
                    pos,
                    depth: 0,
                })
            }
            EndRep::PatternRay { fam, ray, copy } => {
                let pos = x
                    .iter()
                    .filter_map(|v| match v {
                        Vertex::Fam {
                            fam: f,
                            copy: c,
                            at: Local::R { ray: r, pos, .. },
                        } if *f == fam && *c == copy && *r == ray => Some(pos + 1),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(0);
                Vertex::Fam {
                    fam,
                    copy,
                    at: Local::R { ray, pos, depth: 0 },
                }
            }
            EndRep::Clique(q) => {
                let idx = x
                    .iter()
                    .filter_map(|v| match v {
                        Vertex::Clique { clique, idx } if *clique == q => Some(idx + 1),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(0);
                Vertex::Clique { clique: q, idx }
            }
        }
    }

    /// The component of `G - X` in which the end lives.
    pub fn locate(&self, comps: &ComponentSet) -> ComponentRef {
        comps
            .locate(&self.tail_vertex(comps.separator()))
            .expect("tail vertex avoids the separator")
    }

    pub fn text(&self, schema: &Schema) -> String {
        match *self {
            EndRep::Ray(r) => schema.top.rays[r as usize].name.clone(),
            EndRep::PatternRay { fam, ray, copy } => {
                let f = &schema.families[fam as usize];
                format!("{}[{}].{}", f.name, copy, f.body.rays[ray as usize].name)
            }
            EndRep::Clique(q) => schema.cliques[q as usize].name.clone(),
        }
    }

    pub fn parse(schema: &Schema, text: &str) -> Result<Self> {
        let unknown = || Error::UnknownVertex(format!("no end named `{text}`"));
        if let Some(r) = schema.top.ray_named(text) {
            return Ok(EndRep::Ray(r));
        }
        if let Some(q) = schema.cliques.iter().position(|c| c.name == text) {
            return Ok(EndRep::Clique(q as u32));
        }
        let (name, copy, rest) = split_indexed(text).ok_or_else(unknown)?;
        let fam = schema
            .families
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(unknown)?;
        let ray = schema.families[fam]
            .body
            .ray_named(rest.ok_or_else(unknown)?)
            .ok_or_else(unknown)?;
        Ok(EndRep::PatternRay {
            fam: fam as u32,
            ray,
            copy,
        })
    }
}

impl EndClass {
    pub fn text(&self, schema: &Schema) -> String {
        match self {
            EndClass::Single(e) => e.text(schema),
            EndClass::PerCopy { fam, ray } => {
                let f = &schema.families[*fam as usize];
                format!("{}[*].{}", f.name, f.body.rays[*ray as usize].name)
            }
        }
    }
}

/// Counts ends on the truncation at `n` without using the schema's
/// structure: deletes the core, every finite pattern vertex and everything in
/// the first half of each ray and clique, then counts the components that
/// still reach the last position. Every end leaves one such component and
/// everything else is cut off.
pub fn end_count_on_truncation(schema: &Schema, n: u64) -> usize {
    let t = schema.truncate(n);
    let half = n / 2;
    let deleted = |v: &Vertex| match *v {
        Vertex::Top(Local::V(_))
        | Vertex::Fam {
            at: Local::V(_), ..
        } => true,
        Vertex::Top(Local::R { pos, .. })
        | Vertex::Fam {
            at: Local::R { pos, .. },
            ..
        } => pos < half,
        Vertex::Clique { idx, .. } => idx < half,
    };
    let frontier = |v: &Vertex| match *v {
        Vertex::Top(Local::R { pos, depth: 0, .. })
        | Vertex::Fam {
            at: Local::R { pos, depth: 0, .. },
            ..
        } => pos + 1 == n,
        Vertex::Clique { idx, .. } => idx + 1 == n,
        _ => false,
    };
    let removed: Vec<bool> = t.vertices.iter().map(deleted).collect();
    t.graph
        .components_avoiding(&removed)
        .iter()
        .filter(|comp| comp.iter().any(|&i| frontier(&t.vertices[i])))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::find_schema;
    use std::sync::Arc;

    #[test]
    fn end_lists() {
        assert_eq!(end_classes(&find_schema("RAY").unwrap()).len(), 1);
        assert_eq!(end_classes(&find_schema("DRAY").unwrap()).len(), 2);
        assert_eq!(end_classes(&find_schema("STAR").unwrap()).len(), 0);
        assert_eq!(ends_below(&find_schema("SPIDER").unwrap(), 7).len(), 7);
    }

    #[test]
    fn truncation_count_matches() {
        for s in crate::schema::suite_schemas() {
            let schema = s.schema();
            for n in [20, 40] {
                assert_eq!(
                    end_count_on_truncation(&schema, n),
                    ends_below(&schema, n).len(),
                    "{}",
                    s.name
                );
            }
        }
    }

    #[test]
    fn names_round_trip() {
        let s = find_schema("SPIDER").unwrap();
        let e = EndRep::PatternRay {
            fam: 0,
            ray: 0,
            copy: 3,
        };
        assert_eq!(e.text(&s), "legs[3].t");
        assert_eq!(EndRep::parse(&s, "legs[3].t").unwrap(), e);
        assert!(EndRep::parse(&s, "legs[3].q").is_err());
    }

    #[test]
    fn tail_lies_beyond_the_separator() {
        let s = find_schema("RAY").unwrap();
        let x = s.parse_vertex_list("R[2], R[5]").unwrap();
        let comps = ComponentSet::compute(&Arc::clone(&s), x).unwrap();
        let r = EndRep::Ray(0).locate(&comps);
        assert!(!comps.component_is_finite(r));
    }
}
