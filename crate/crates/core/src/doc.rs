//! JSON documents for graphs, morphisms, cycles and sequences.
//!
//! Vertex tokens may be written as strings or integers; integers are read
//! as their decimal spelling.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cycles::OrientedCycle;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::morphism::Morphism;
use crate::sequence::{InverseSequence, LedgerEntry};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Token {
    Int(i64),
    Str(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(i) => write!(f, "{i}"),
            Token::Str(s) => f.write_str(s),
        }
    }
}

impl From<&str> for Token {
    fn from(s: &str) -> Self {
        Token::Str(s.to_owned())
    }
}

fn tok(s: &str) -> Token {
    Token::from(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<Token>,
    #[serde(default)]
    pub edges: Vec<(Token, Token)>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDoc {
            vertices: g.names().iter().map(|s| tok(s)).collect(),
            edges: g.edges().map(|(u, v)| (tok(g.name(u)), tok(g.name(v)))).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::new(
            self.vertices.iter().map(Token::to_string),
            self.edges.iter().map(|(a, b)| (a.to_string(), b.to_string())),
        )
    }
}

/// A graph written inline or as a path to a graph document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Inline(GraphDoc),
    Path(String),
}

impl GraphRef {
    /// Paths are resolved against `base`.
    pub fn load(&self, base: &Path) -> Result<Graph> {
        match self {
            GraphRef::Inline(d) => d.to_graph(),
            GraphRef::Path(p) => {
                let path = base.join(p);
                let text =
                    std::fs::read_to_string(&path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
                graph_from_json(&text)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub domain: GraphRef,
    pub codomain: GraphRef,
    pub map: Vec<(Token, Token)>,
}

impl MorphismDoc {
    pub fn from_morphism(f: &Morphism) -> Self {
        MorphismDoc {
            domain: GraphRef::Inline(GraphDoc::from_graph(f.domain())),
            codomain: GraphRef::Inline(GraphDoc::from_graph(f.codomain())),
            map: map_pairs(f),
        }
    }

    pub fn to_morphism(&self, base: &Path) -> Result<Morphism> {
        let d = Arc::new(self.domain.load(base)?);
        let c = Arc::new(self.codomain.load(base)?);
        morphism_from_pairs(d, c, &self.map)
    }
}

fn map_pairs(f: &Morphism) -> Vec<(Token, Token)> {
    f.pairs().iter().map(|(a, b)| (tok(a), tok(b))).collect()
}

fn morphism_from_pairs(d: Arc<Graph>, c: Arc<Graph>, map: &[(Token, Token)]) -> Result<Morphism> {
    let pairs: Vec<(String, String)> = map.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    Morphism::from_pairs(d, c, &pairs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleDoc {
    pub vertices: Vec<Token>,
    #[serde(default)]
    pub edges: Vec<(Token, Token)>,
    pub orientation: Vec<Token>,
}

impl CycleDoc {
    pub fn from_cycle(c: &OrientedCycle) -> Self {
        let g = GraphDoc::from_graph(c.graph());
        CycleDoc {
            vertices: g.vertices,
            edges: g.edges,
            orientation: c.tokens().iter().map(|s| tok(s)).collect(),
        }
    }

    pub fn to_cycle(&self) -> Result<OrientedCycle> {
        let g = GraphDoc {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        }
        .to_graph()?;
        let order: Vec<String> = self.orientation.iter().map(Token::to_string).collect();
        OrientedCycle::from_tokens(Arc::new(g), &order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerDoc {
    pub level: usize,
    pub graph: GraphDoc,
    pub f: Vec<(Token, Token)>,
    pub satisfied_at: usize,
    pub g: Vec<(Token, Token)>,
}

/// Levels, bonds given as vertex maps between consecutive levels, ledger
/// and optional thread.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub levels: Vec<GraphDoc>,
    pub bonds: Vec<Vec<(Token, Token)>>,
    #[serde(default)]
    pub ledger: Vec<LedgerDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thread: Option<Vec<Token>>,
}

impl SequenceDoc {
    pub fn from_sequence(seq: &InverseSequence) -> Self {
        let ledger = seq
            .ledger()
            .iter()
            .map(|e| {
                let f = Morphism::new(e.graph.clone(), seq.level(e.level).clone(), e.f.clone()).expect("valid ledger");
                let g = Morphism::new(seq.level(e.satisfied_at).clone(), e.graph.clone(), e.g.clone())
                    .expect("valid ledger");
                LedgerDoc {
                    level: e.level,
                    graph: GraphDoc::from_graph(&e.graph),
                    f: map_pairs(&f),
                    satisfied_at: e.satisfied_at,
                    g: map_pairs(&g),
                }
            })
            .collect();
        SequenceDoc {
            levels: seq.levels().iter().map(|g| GraphDoc::from_graph(g)).collect(),
            bonds: seq.bonds().iter().map(map_pairs).collect(),
            ledger,
            thread: seq
                .thread()
                .map(|t| t.iter().enumerate().map(|(n, &x)| tok(seq.level(n).name(x))).collect()),
        }
    }

    pub fn to_sequence(&self) -> Result<InverseSequence> {
        self.load(true)
    }

    /// Bonds need only be surjective homomorphisms.
    pub fn to_homomorphism_sequence(&self) -> Result<InverseSequence> {
        self.load(false)
    }

    fn load(&self, confluent: bool) -> Result<InverseSequence> {
        let levels: Vec<Arc<Graph>> = self
            .levels
            .iter()
            .map(|d| d.to_graph().map(Arc::new))
            .collect::<Result<_>>()?;
        if self.bonds.len() + 1 != levels.len() {
            return Err(Error::Document(format!(
                "{} levels need {} bonds",
                levels.len(),
                levels.len().saturating_sub(1)
            )));
        }
        let bonds = self
            .bonds
            .iter()
            .enumerate()
            .map(|(n, m)| morphism_from_pairs(levels[n + 1].clone(), levels[n].clone(), m))
            .collect::<Result<Vec<_>>>()?;
        let mut seq = if confluent {
            InverseSequence::new(levels, bonds)?
        } else {
            InverseSequence::of_homomorphisms(levels, bonds)?
        };
        let ledger = self
            .ledger
            .iter()
            .map(|e| {
                if e.level >= seq.len() || e.satisfied_at >= seq.len() {
                    return Err(Error::Document("ledger entry refers to a missing level".into()));
                }
                let a = Arc::new(e.graph.to_graph()?);
                let f = morphism_from_pairs(a.clone(), seq.level(e.level).clone(), &e.f)?;
                let g = morphism_from_pairs(seq.level(e.satisfied_at).clone(), a.clone(), &e.g)?;
                Ok(LedgerEntry {
                    level: e.level,
                    graph: a,
                    f: f.map().to_vec(),
                    satisfied_at: e.satisfied_at,
                    g: g.map().to_vec(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        seq.set_ledger(ledger)?;
        if let Some(t) = &self.thread {
            if t.len() != seq.len() {
                return Err(Error::Document("thread needs one vertex per level".into()));
            }
            let thread = t
                .iter()
                .enumerate()
                .map(|(n, x)| seq.level(n).vertex(&x.to_string()))
                .collect::<Result<Vec<_>>>()?;
            seq.set_thread(thread)?;
        }
        Ok(seq)
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    parse::<GraphDoc>(text)?.to_graph()
}

/// Parses a morphism document; relative graph paths resolve against `base`.
pub fn morphism_from_json(text: &str, base: &Path) -> Result<Morphism> {
    parse::<MorphismDoc>(text)?.to_morphism(base)
}

pub fn cycle_from_json(text: &str) -> Result<OrientedCycle> {
    parse::<CycleDoc>(text)?.to_cycle()
}

pub fn sequence_from_json(text: &str) -> Result<InverseSequence> {
    parse::<SequenceDoc>(text)?.to_sequence()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialise");
    s.push('\n');
    s
}

/// Directory containing `path`, for resolving relative references.
pub fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_tokens() {
        let g = graph_from_json(r#"{"vertices": [1, 2, "x"], "edges": [[1, 2], [2, "x"]]}"#).unwrap();
        assert_eq!(g.names(), &["1", "2", "x"]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn malformed_edges_are_rejected() {
        assert!(matches!(
            graph_from_json(r#"{"vertices": ["a"], "edges": [["a"]]}"#),
            Err(Error::Document(_))
        ));
        assert!(matches!(
            graph_from_json(r#"{"vertices": ["a"], "edges": [["a", "b"]]}"#),
            Err(Error::DanglingEdge(..))
        ));
    }

    #[test]
    fn graph_round_trip() {
        let g = Graph::cycle(5);
        let d = GraphDoc::from_graph(&g);
        assert_eq!(graph_from_json(&to_json(&d)).unwrap(), g);
    }

    #[test]
    fn morphism_round_trip() {
        let f = Morphism::new(
            Arc::new(Graph::cycle(6)),
            Arc::new(Graph::cycle(3)),
            vec![0, 1, 2, 0, 1, 2],
        )
        .unwrap();
        let text = to_json(&MorphismDoc::from_morphism(&f));
        assert_eq!(morphism_from_json(&text, Path::new(".")).unwrap(), f);
    }

    #[test]
    fn cycle_orientation_is_kept() {
        let c = OrientedCycle::canonical(Arc::new(Graph::cycle(4))).unwrap().reversed();
        let back = cycle_from_json(&to_json(&CycleDoc::from_cycle(&c))).unwrap();
        assert_eq!(back.order(), c.order());
    }
}
