//! Fiber products and amalgamation of confluent epimorphisms.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::canon::connected_graphs;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::morphism::{enumerate_confluent_epis, Morphism, DEFAULT_ENUM_BUDGET};

/// A commuting square `f ∘ f0 = g ∘ g0` with `f0`, `g0` confluent
/// epimorphisms out of a connected graph `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamResult {
    pub d: Arc<Graph>,
    pub f0: Morphism,
    pub g0: Morphism,
}

impl AmalgamResult {
    /// Validates the square against `f: B → A` and `g: C → A`.
    pub fn new(d: Arc<Graph>, f0: Morphism, g0: Morphism, f: &Morphism, g: &Morphism) -> Result<Self> {
        let r = AmalgamResult { d, f0, g0 };
        r.check(f, g)?;
        Ok(r)
    }

    pub fn check(&self, f: &Morphism, g: &Morphism) -> Result<()> {
        if **self.f0.domain() != *self.d || **self.g0.domain() != *self.d {
            return Err(Error::Invariant("amalgam projections do not start at D".into()));
        }
        if **self.f0.codomain() != **f.domain() || **self.g0.codomain() != **g.domain() {
            return Err(Error::Invariant("amalgam projections miss B or C".into()));
        }
        let commutes = self
            .d
            .vertices()
            .all(|x| f.apply(self.f0.apply(x)) == g.apply(self.g0.apply(x)));
        if !commutes {
            return Err(Error::Invariant("amalgam square does not commute".into()));
        }
        if !self.d.is_connected() {
            return Err(Error::Invariant("amalgam graph is disconnected".into()));
        }
        if !self.f0.is_confluent_epi() || !self.g0.is_confluent_epi() {
            return Err(Error::Invariant(
                "amalgam projection is not a confluent epimorphism".into(),
            ));
        }
        Ok(())
    }
}

/// The full fiber product with its projections and the pair behind each
/// vertex.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub d: Arc<Graph>,
    pub f0: Morphism,
    pub g0: Morphism,
    pub pairs: Vec<(Vertex, Vertex)>,
}

/// Vertices `(b, c)` with `f(b) = g(c)`, ordered by `b` then `c`; `(b, c)`
/// and `(b', c')` adjacent when `b ~ b'` and `c ~ c'` reflexively.
pub fn standard_amalgam(f: &Morphism, g: &Morphism) -> Result<FiberProduct> {
    if **f.codomain() != **g.codomain() {
        return Err(Error::pre("standard amalgam: maps have different codomains"));
    }
    if !f.is_epimorphism() || !g.is_epimorphism() {
        return Err(Error::pre("standard amalgam: both maps must be epimorphisms"));
    }
    let b = f.domain();
    let c = g.domain();
    let pairs: Vec<(Vertex, Vertex)> = b
        .vertices()
        .flat_map(|x| {
            c.vertices()
                .filter(move |&y| f.apply(x) == g.apply(y))
                .map(move |y| (x, y))
        })
        .collect();
    let mut seen = HashSet::new();
    let names: Vec<String> = pairs
        .iter()
        .map(|&(x, y)| {
            let mut t = format!("({},{})", b.name(x), c.name(y));
            while !seen.insert(t.clone()) {
                t.push('\'');
            }
            t
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let ((x, y), (x2, y2)) = (pairs[i], pairs[j]);
            if b.related(x, x2) && c.related(y, y2) {
                edges.push((i, j));
            }
        }
    }
    let d = Arc::new(Graph::from_parts(names, edges)?);
    let f0 = Morphism::new(d.clone(), b.clone(), pairs.iter().map(|p| p.0).collect())?;
    let g0 = Morphism::new(d.clone(), c.clone(), pairs.iter().map(|p| p.1).collect())?;
    Ok(FiberProduct { d, f0, g0, pairs })
}

/// How [`connected_amalgam`] found its square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmalgamPath {
    /// A component of the fiber product, by index in selection order.
    Component(usize),
    /// Exhaustive search over canonical connected graphs of this size.
    Search(usize),
}

#[derive(Debug, Clone)]
pub struct ConnectedAmalgam {
    pub result: AmalgamResult,
    pub path: AmalgamPath,
}

/// Restriction of `p` to the induced subgraph on `set`, keeping `p`'s
/// codomain whole.
fn restrict_domain(p: &Morphism, sub: &Arc<Graph>, verts: &[Vertex]) -> Morphism {
    Morphism::new(
        sub.clone(),
        p.codomain().clone(),
        verts.iter().map(|&v| p.apply(v)).collect(),
    )
    .expect("restriction stays total")
}

/// Least component of the fiber product (by size, then least pair) on which
/// both projections are confluent epimorphisms; otherwise an exhaustive
/// search over connected graphs with at most `budget` vertices
/// (default `|B| + |C|`).
pub fn connected_amalgam(f: &Morphism, g: &Morphism, budget: Option<usize>) -> Result<ConnectedAmalgam> {
    f.require_confluent_epi("connected amalgam")?;
    g.require_confluent_epi("connected amalgam")?;
    for (what, gr) in [("A", f.codomain()), ("B", f.domain()), ("C", g.domain())] {
        if !gr.is_connected() {
            return Err(Error::pre(format!("connected amalgam: {what} is disconnected")));
        }
    }
    let fp = standard_amalgam(f, g)?;
    let mut comps = fp.d.components(&fp.d.all());
    comps.sort_by_key(|c| (c.len(), *c.iter().next().expect("nonempty")));
    for (idx, comp) in comps.iter().enumerate() {
        if let Some(r) = component_square(&fp, comp, f, g) {
            return Ok(ConnectedAmalgam {
                result: r,
                path: AmalgamPath::Component(idx),
            });
        }
    }
    let budget = budget.unwrap_or(f.domain().len() + g.domain().len());
    search_amalgam(f, g, budget)
}

fn component_square(fp: &FiberProduct, comp: &VertexSet, f: &Morphism, g: &Morphism) -> Option<AmalgamResult> {
    let (sub, verts) = fp.d.induced(comp);
    let sub = Arc::new(sub);
    let f0 = restrict_domain(&fp.f0, &sub, &verts);
    let g0 = restrict_domain(&fp.g0, &sub, &verts);
    if f0.is_confluent_epi() && g0.is_confluent_epi() {
        AmalgamResult::new(sub, f0, g0, f, g).ok()
    } else {
        None
    }
}

/// Largest candidate size the fallback search will enumerate.
const SEARCH_SIZE_CAP: usize = 6;

fn search_amalgam(f: &Morphism, g: &Morphism, budget: usize) -> Result<ConnectedAmalgam> {
    let b = f.domain();
    let c = g.domain();
    let lo = b.len().max(c.len());
    let hi = budget.min(SEARCH_SIZE_CAP);
    for n in lo..=hi {
        for d in connected_graphs(n) {
            let d = Arc::new(d);
            for f0 in enumerate_confluent_epis(&d, b, DEFAULT_ENUM_BUDGET)? {
                if let Some(g0) = find_g0(&f0, f, g)? {
                    let result = AmalgamResult::new(d.clone(), f0, g0, f, g)?;
                    return Ok(ConnectedAmalgam {
                        result,
                        path: AmalgamPath::Search(n),
                    });
                }
            }
        }
    }
    Err(Error::NoAmalgam(format!(
        "no component of the fiber product works and no connected graph with at most {hi} vertices does"
    )))
}

/// Confluent epimorphism `g0: D → C` with `g ∘ g0 = f ∘ f0`, by
/// backtracking over `g0(d) ∈ g⁻¹(f(f0(d)))`.
fn find_g0(f0: &Morphism, f: &Morphism, g: &Morphism) -> Result<Option<Morphism>> {
    let d = f0.domain();
    let c = g.domain();
    let allowed: Vec<Vec<Vertex>> = d
        .vertices()
        .map(|x| g.fiber(f.apply(f0.apply(x))).into_iter().collect())
        .collect();
    let mut map = vec![0; d.len()];
    let mut nodes = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn go(
        x: usize,
        d: &Graph,
        c: &Arc<Graph>,
        allowed: &[Vec<Vertex>],
        map: &mut Vec<Vertex>,
        nodes: &mut usize,
        out: &mut Option<Morphism>,
        dom: &Arc<Graph>,
    ) -> Result<()> {
        if out.is_some() {
            return Ok(());
        }
        if x == d.len() {
            let cand = Morphism::new(dom.clone(), c.clone(), map.clone())?;
            if cand.is_confluent_epi() {
                *out = Some(cand);
            }
            return Ok(());
        }
        for &t in &allowed[x] {
            *nodes += 1;
            if *nodes > DEFAULT_ENUM_BUDGET {
                return Err(Error::budget("amalgam search", DEFAULT_ENUM_BUDGET, *nodes, 0));
            }
            if d.neighbors(x).iter().all(|&u| u > x || c.related(map[u], t)) {
                map[x] = t;
                go(x + 1, d, c, allowed, map, nodes, out, dom)?;
            }
        }
        Ok(())
    }
    let mut out = None;
    go(0, d, c, &allowed, &mut map, &mut nodes, &mut out, d)?;
    Ok(out)
}

/// Amalgam over the one-vertex graph: a connected graph with confluent
/// epimorphisms onto both `b` and `c`.
pub fn common_refinement(b: &Arc<Graph>, c: &Arc<Graph>) -> Result<ConnectedAmalgam> {
    let point = Arc::new(Graph::point("*"));
    let f = Morphism::constant(b.clone(), point.clone(), 0);
    let g = Morphism::constant(c.clone(), point, 0);
    connected_amalgam(&f, &g, None)
}

/// One failed amalgamation instance.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub index: usize,
    pub f: Morphism,
    pub g: Morphism,
    pub error: String,
}

#[derive(Debug, Clone, Default)]
pub struct AmalgamationReport {
    pub max_vertices: usize,
    /// All instances `(f, g)` with a common codomain.
    pub total: usize,
    pub checked: usize,
    pub passed: usize,
    pub via_component: usize,
    pub via_search: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl AmalgamationReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.checked && self.counterexamples.is_empty()
    }
}

/// Confluent epimorphisms `B → A` onto `a` from every canonical connected
/// `B` with at most `max` vertices.
pub fn confluent_epis_onto(a: &Arc<Graph>, max: usize) -> Result<Vec<Morphism>> {
    let mut out = Vec::new();
    for n in a.len()..=max {
        for b in connected_graphs(n) {
            out.extend(enumerate_confluent_epis(&Arc::new(b), a, DEFAULT_ENUM_BUDGET)?);
        }
    }
    Ok(out)
}

/// Runs [`connected_amalgam`] over every pair of confluent epimorphisms
/// between canonical connected graphs with at most `max_vertices` vertices
/// sharing a codomain, or over `sample = (count, seed)` of them drawn
/// without replacement.
pub fn verify_amalgamation(max_vertices: usize, sample_spec: Option<(usize, u64)>) -> Result<AmalgamationReport> {
    let mut groups: Vec<Vec<Morphism>> = Vec::new();
    for n in 1..=max_vertices {
        for a in connected_graphs(n) {
            groups.push(confluent_epis_onto(&Arc::new(a), max_vertices)?);
        }
    }
    let total: usize = groups.iter().map(|g| g.len() * g.len()).sum();
    let chosen: Vec<usize> = match sample_spec {
        Some((count, seed)) if count < total => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = sample(&mut rng, total, count).into_vec();
            v.sort_unstable();
            v
        }
        _ => (0..total).collect(),
    };
    let mut report = AmalgamationReport {
        max_vertices,
        total,
        ..Default::default()
    };
    let mut chosen = chosen.into_iter().peekable();
    let mut base = 0;
    for group in &groups {
        let size = group.len() * group.len();
        while let Some(&idx) = chosen.peek() {
            if idx >= base + size {
                break;
            }
            chosen.next();
            let local = idx - base;
            let (f, g) = (&group[local / group.len()], &group[local % group.len()]);
            report.checked += 1;
            match connected_amalgam(f, g, None).and_then(|r| r.result.check(f, g).map(|_| r)) {
                Ok(r) => {
                    report.passed += 1;
                    match r.path {
                        AmalgamPath::Component(_) => report.via_component += 1,
                        AmalgamPath::Search(_) => report.via_search += 1,
                    }
                }
                Err(e) => report.counterexamples.push(Counterexample {
                    index: idx,
                    f: f.clone(),
                    g: g.clone(),
                    error: e.to_string(),
                }),
            }
        }
        base += size;
    }
    Ok(report)
}
