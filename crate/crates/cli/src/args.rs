use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fraisse_core::graph::DEFAULT_SEARCH_BOUND;
use fraisse_core::morphism::DEFAULT_ENUM_BUDGET;

#[derive(Debug, Parser)]
#[command(
    name = "fraisse",
    version,
    about = "Confluent epimorphisms between finite connected graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result to this file instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Emit Graphviz DOT for the graphs involved instead of JSON.
    #[arg(long, global = true)]
    pub dot: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Properties of morphisms and graphs.
    #[command(subcommand)]
    Check(Check),
    /// Amalgams of confluent epimorphisms with a common codomain.
    #[command(subcommand)]
    Amalgamate(Amalgamate),
    /// Graph constructions returning a graph and a confluent map onto the input.
    #[command(subcommand)]
    Construct(Construct),
    /// Lift arcs and cycles through confluent epimorphisms.
    #[command(subcommand)]
    Lift(Lift),
    /// Maps between chordless cycles.
    #[command(subcommand)]
    Cycles(Cycles),
    /// Inverse sequences of graphs.
    #[command(subcommand)]
    Sequence(Sequence),
    /// Conversions.
    #[command(subcommand)]
    Export(Export),
}

/// A single input document (`-` reads stdin).
#[derive(Debug, Args)]
pub struct One {
    #[arg(short, long)]
    pub input: PathBuf,
}

/// Two input documents, given as `-i first -i second`.
#[derive(Debug, Args)]
pub struct Two {
    #[arg(short, long = "input", required = true, num_args = 1)]
    pub inputs: Vec<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Edges map to edges or loops.
    Hom(One),
    /// Surjective on vertices and edges.
    Epi(One),
    /// Epimorphism with connected preimages of connected sets.
    Monotone(One),
    /// Confluent epimorphism, by the edge criterion.
    Confluent {
        #[command(flatten)]
        input: One,
        /// Also check every connected subset of the codomain directly.
        #[arg(long)]
        by_definition: bool,
        /// Largest codomain for the direct check.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND, value_parser = positive)]
        bound: usize,
    },
    /// Search for a cycle division; holds when one exists.
    CycleDivision {
        #[command(flatten)]
        input: One,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND, value_parser = positive)]
        bound: usize,
    },
    /// Hereditary unicoherence: no cycle division exists.
    Heruni {
        #[command(flatten)]
        input: One,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND, value_parser = positive)]
        bound: usize,
    },
    /// Whether a connected set separates its outside neighbours.
    AdjDisc {
        #[command(flatten)]
        input: One,
        /// Comma-separated vertex tokens.
        #[arg(long)]
        set: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum Amalgamate {
    /// Fiber product of two morphisms.
    Standard(Two),
    /// Connected amalgam with confluent projections.
    Connected {
        #[command(flatten)]
        inputs: Two,
        /// Largest graph for the fallback search.
        #[arg(long, value_parser = positive)]
        budget: Option<usize>,
    },
    /// Amalgam of the constant maps from two graphs onto a point.
    Refine(Two),
    /// Connected amalgams over all small instances.
    Verify {
        #[arg(long, value_parser = positive)]
        max_vertices: usize,
        /// Check this many instances drawn at random.
        #[arg(long, value_parser = positive, requires = "seed")]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Split the edge `a-b` by a new vertex `s`.
    SplitEdge {
        #[command(flatten)]
        input: One,
        /// Two comma-separated tokens `a,b`.
        #[arg(long)]
        edge: String,
        /// Map the new vertex to `a` instead of `b`.
        #[arg(long)]
        paper_literal: bool,
    },
    /// Indecomposability witness over a graph.
    Indec(One),
    /// Doubling at a vertex.
    Delta {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        vertex: String,
    },
    /// Extend a confluent map `W -> U` along an embedding `U -> G`.
    Extend {
        #[command(flatten)]
        input: One,
        /// Morphism document of the embedding.
        #[arg(long)]
        embed: PathBuf,
    },
    /// Unfold a graph along a chain of connected sets.
    Unfold {
        #[command(flatten)]
        input: One,
        /// One link of the chain, as comma-separated tokens; repeat in order.
        #[arg(long, required = true)]
        chain: Vec<String>,
        /// Stop once the unfolding has more vertices than this.
        #[arg(long, value_parser = positive)]
        cap: Option<usize>,
    },
    /// Unicoherence witness over a graph with a cycle division.
    Heruni {
        #[command(flatten)]
        input: One,
        /// Division document {"h", "k", "c", "d"}; found by search if absent.
        #[arg(long)]
        division: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND, value_parser = positive)]
        bound: usize,
    },
    /// Copies of a graph wrapped around one of its cycles.
    Wrap {
        #[command(flatten)]
        input: One,
        /// Cycle as comma-separated tokens in cyclic order.
        #[arg(long)]
        cycle: String,
        #[arg(long, value_parser = positive)]
        copies: usize,
    },
    /// New vertex adjacent to both ends of an edge.
    Attach {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        edge: String,
    },
    /// Double every vertex of a cycle.
    Double {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        cycle: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum Lift {
    /// Lift an arc of the codomain from a vertex over one of its ends.
    Arc {
        #[command(flatten)]
        input: One,
        /// Arc vertices as comma-separated codomain tokens.
        #[arg(long)]
        arc: String,
        /// End of the arc to start from.
        #[arg(long)]
        end: String,
        /// Domain vertex over `end`.
        #[arg(long)]
        start: String,
    },
    /// Lift a chordless cycle of the codomain.
    Cycle {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        cycle: String,
    },
}

/// Orientations of the domain and codomain cycles; canonical if omitted.
#[derive(Debug, Args)]
pub struct Orientations {
    #[arg(long)]
    pub domain_orientation: Option<String>,
    #[arg(long)]
    pub codomain_orientation: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Cycles {
    /// Winding number of a wrapping map.
    Winding(One),
    /// Almost wrapping test by reversed triples.
    Almost {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        orient: Orientations,
    },
    /// Confluent witness of an almost wrapping map.
    Witness {
        #[command(flatten)]
        input: One,
        #[command(flatten)]
        orient: Orientations,
        /// Require every fiber component to have two vertices.
        #[arg(long)]
        proper: bool,
    },
    /// Compose `D -> C` (first) with `E -> D` (second) via proper witnesses.
    Compose(Two),
    /// Cycle amalgam of two wrapping maps onto one cycle.
    Amalgam(Two),
}

#[derive(Debug, Subcommand)]
pub enum Sequence {
    /// Build a prefix meeting every small factorisation demand.
    Build {
        #[arg(long, value_parser = positive)]
        task_bound: usize,
        #[arg(long, value_parser = positive)]
        depth: usize,
    },
    /// Check the factorisation demands of a prefix.
    Verify {
        #[command(flatten)]
        input: One,
        #[arg(long, value_parser = positive)]
        task_bound: usize,
        #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET, value_parser = positive)]
        budget: usize,
    },
    /// Fat-fiber audit of cycle bonds.
    Sharp(One),
    /// Fibers of the composite bond from level `to` down to level `from`.
    Fibers {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Almost graph-solenoid audit; bonds need only be surjective homomorphisms.
    Solenoid(One),
}

#[derive(Debug, Subcommand)]
pub enum Export {
    /// DOT for a graph, morphism or sequence document.
    Dot(One),
}
