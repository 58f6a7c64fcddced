use std::sync::Arc;

use fraisse_core::doc::{GraphDoc, MorphismDoc};
use fraisse_core::{CycleDivision, Graph, Morphism, OrientedCycle, VertexSet};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Holds,
    Violated,
    Budget,
}

impl From<bool> for Status {
    fn from(holds: bool) -> Self {
        if holds {
            Status::Holds
        } else {
            Status::Violated
        }
    }
}

pub struct Outcome {
    pub report: Value,
    pub status: Status,
    /// Graphs drawn by `--dot`, with their names.
    pub graphs: Vec<(String, Arc<Graph>)>,
}

impl Outcome {
    pub fn new(report: Value, status: impl Into<Status>) -> Self {
        Outcome {
            report,
            status: status.into(),
            graphs: Vec::new(),
        }
    }

    pub fn draw(mut self, name: &str, g: &Arc<Graph>) -> Self {
        self.graphs.push((name.to_owned(), g.clone()));
        self
    }

    pub fn draw_map(self, f: &Morphism) -> Self {
        self.draw("domain", f.domain()).draw("codomain", f.codomain())
    }

    /// An empty `report` graph when nothing is drawn.
    pub fn dot(&self) -> String {
        if self.graphs.is_empty() {
            return "graph \"report\" {\n}\n".to_owned();
        }
        self.graphs.iter().map(|(name, g)| g.to_dot(name)).collect()
    }
}

pub fn graph(g: &Graph) -> Value {
    serde_json::to_value(GraphDoc::from_graph(g)).expect("graph document")
}

pub fn morphism(f: &Morphism) -> Value {
    serde_json::to_value(MorphismDoc::from_morphism(f)).expect("morphism document")
}

pub fn set(g: &Graph, s: &VertexSet) -> Value {
    json!(g.set_names(s))
}

pub fn cycle(c: &OrientedCycle) -> Value {
    json!(c.tokens())
}

pub fn division(g: &Graph, d: &CycleDivision) -> Value {
    json!({ "h": set(g, &d.h), "k": set(g, &d.k), "c": set(g, &d.c), "d": set(g, &d.d) })
}

/// Graph, map onto the input and construction details.
pub fn bundle(g: &Graph, f: &Morphism, metadata: Value) -> Value {
    json!({ "graph": graph(g), "morphism": morphism(f), "metadata": metadata })
}
