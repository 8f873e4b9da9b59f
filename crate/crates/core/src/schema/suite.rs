//! The bundled test schemas and finite graphs.

use std::sync::Arc;

use super::Schema;
use crate::finite::FiniteGraph;

pub struct SuiteSchema {
    pub name: &'static str,
    pub text: &'static str,
}

pub struct SuiteGraph {
    pub name: &'static str,
    pub graph: FiniteGraph,
}

const SCHEMAS: &[SuiteSchema] = &[
    SuiteSchema { name: "RAY", text: "ray R\n" },
    SuiteSchema { name: "DRAY", text: "core: o\nray L at o\nray R at o\n" },
    SuiteSchema { name: "STAR", text: "core: c\nfamily L pattern { v x } attach c x\n" },
    SuiteSchema {
        name: "SPIDER",
        text: "core: c\nfamily legs pattern { v h; ray t at h } attach c h\n",
    },
    SuiteSchema { name: "COMB", text: "ray S teeth 1\n" },
    SuiteSchema { name: "CLIQ", text: "clique K\n" },
    SuiteSchema { name: "CLIQRAY", text: "core: z\nclique K attach z\nray R at z\n" },
    SuiteSchema {
        name: "STAR2",
        text: "core: c1 c2\nedge: c1 c2\nfamily L pattern { v x } attach c1 x\nfamily M pattern { v y } attach c2 y\n",
    },
    SuiteSchema {
        name: "FAN2",
        text: "core: a b\nfamily P pattern { v x } attach a x attach b x\n",
    },
];

impl SuiteSchema {
    pub fn schema(&self) -> Arc<Schema> {
        Arc::new(Schema::parse_named(self.name, self.text).expect("bundled schema parses"))
    }
}

pub fn suite_schemas() -> &'static [SuiteSchema] {
    SCHEMAS
}

pub fn suite_graphs() -> Vec<SuiteGraph> {
    let k5 = FiniteGraph::complete(5);
    vec![
        SuiteGraph {
            name: "K2",
            graph: FiniteGraph::complete(2),
        },
        SuiteGraph {
            name: "K3",
            graph: FiniteGraph::complete(3),
        },
        SuiteGraph {
            name: "K4",
            graph: FiniteGraph::complete(4),
        },
        SuiteGraph {
            name: "K5-e",
            graph: k5.without_edge(0, 1),
        },
        SuiteGraph {
            name: "K5",
            graph: k5,
        },
        SuiteGraph {
            name: "P3",
            graph: FiniteGraph::path(3),
        },
        SuiteGraph {
            name: "C4",
            graph: FiniteGraph::cycle(4),
        },
        SuiteGraph {
            name: "GRID3",
            graph: FiniteGraph::grid(3, 3),
        },
    ]
}

/// Looks up a bundled schema by name, case-insensitively.
pub fn find_schema(name: &str) -> Option<Arc<Schema>> {
    SCHEMAS
        .iter()
        .find(|s| s.name.eq_ignore_ascii_case(name))
        .map(SuiteSchema::schema)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_schemas_parse() {
        for s in suite_schemas() {
            let schema = s.schema();
            assert_eq!(schema.name, s.name);
        }
        assert!(find_schema("spider").is_some());
    }
}
