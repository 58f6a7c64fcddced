//! Finite reflexive graphs with confluent epimorphisms: classification,
//! amalgamation, graph constructions, cycle maps and inverse-sequence
//! prefixes.

pub mod amalgam;
pub mod canon;
pub mod constructions;
pub mod cycles;
pub mod doc;
pub mod error;
pub mod graph;
pub mod morphism;
pub mod sequence;

pub use amalgam::{AmalgamResult, ConnectedAmalgam};
pub use cycles::{OrientedCycle, WitnessPair};
pub use error::{Error, Result};
pub use graph::{CycleDivision, Graph, Vertex, VertexSet};
pub use morphism::{Classification, Morphism};
pub use sequence::InverseSequence;
