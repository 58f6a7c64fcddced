//! Vertex maps between graphs and their classification.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cycles::OrientedCycle;
use crate::error::{Error, Result};
use crate::graph::{mask_to_set, Graph, Vertex, VertexSet, DEFAULT_SEARCH_BOUND};

/// A total vertex map `domain → codomain`. Whether it is a homomorphism is a
/// property checked by [`Morphism::classify`], not a construction invariant.
#[derive(Debug, Clone)]
pub struct Morphism {
    domain: Arc<Graph>,
    codomain: Arc<Graph>,
    map: Vec<Vertex>,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && same_graph(&self.domain, &other.domain) && same_graph(&self.codomain, &other.codomain)
    }
}

impl Eq for Morphism {}

fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Failure of the edge criterion for confluence: a component of the preimage
/// of `edge` containing no domain edge mapped onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceWitness {
    pub edge: (Vertex, Vertex),
    pub component: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub homomorphism: bool,
    pub epimorphism: bool,
    pub monotone: bool,
    pub confluent: bool,
    pub witness: Option<ConfluenceWitness>,
}

impl Classification {
    pub fn is_confluent_epi(&self) -> bool {
        self.epimorphism && self.confluent
    }
}

impl Morphism {
    pub fn new(domain: Arc<Graph>, codomain: Arc<Graph>, map: Vec<Vertex>) -> Result<Self> {
        if map.len() != domain.len() {
            let missing = domain.names().get(map.len()).cloned().unwrap_or_default();
            return Err(Error::NonTotalMap(missing));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= codomain.len()) {
            return Err(Error::UnknownVertex(bad.to_string()));
        }
        Ok(Morphism { domain, codomain, map })
    }

    /// Builds a map from `(from, to)` token pairs.
    pub fn from_pairs<S: AsRef<str>>(domain: Arc<Graph>, codomain: Arc<Graph>, pairs: &[(S, S)]) -> Result<Self> {
        let mut map = vec![None; domain.len()];
        for (a, b) in pairs {
            let u = domain.vertex(a.as_ref())?;
            let v = codomain.vertex(b.as_ref())?;
            if map[u].replace(v).is_some() {
                return Err(Error::DuplicateAssignment(a.as_ref().to_owned()));
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(u, t)| t.ok_or_else(|| Error::NonTotalMap(domain.name(u).to_owned())))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(domain, codomain, map)
    }

    pub fn identity(g: Arc<Graph>) -> Self {
        let map = g.vertices().collect();
        Morphism {
            domain: g.clone(),
            codomain: g,
            map,
        }
    }

    pub fn constant(domain: Arc<Graph>, codomain: Arc<Graph>, target: Vertex) -> Self {
        let map = vec![target; domain.len()];
        Morphism { domain, codomain, map }
    }

    pub fn domain(&self) -> &Arc<Graph> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Graph> {
        &self.codomain
    }

    pub fn map(&self) -> &[Vertex] {
        &self.map
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    /// `(from, to)` token pairs in domain order.
    pub fn pairs(&self) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(u, &v)| (self.domain.name(u).to_owned(), self.codomain.name(v).to_owned()))
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        if !same_graph(&inner.codomain, &self.domain) {
            return Err(Error::pre("composition: inner codomain differs from outer domain"));
        }
        let map = inner.map.iter().map(|&v| self.map[v]).collect();
        Ok(Morphism {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            map,
        })
    }

    pub fn image(&self, set: &VertexSet) -> VertexSet {
        set.iter().map(|&v| self.map[v]).collect()
    }

    pub fn full_image(&self) -> VertexSet {
        self.map.iter().copied().collect()
    }

    pub fn preimage(&self, set: &VertexSet) -> VertexSet {
        self.domain.vertices().filter(|&v| set.contains(&self.map[v])).collect()
    }

    pub fn fiber(&self, t: Vertex) -> VertexSet {
        self.domain.vertices().filter(|&v| self.map[v] == t).collect()
    }

    /// Restriction to induced subgraphs `dom_set → cod_set`; the image of
    /// `dom_set` must lie inside `cod_set`.
    pub fn restrict(&self, dom_set: &VertexSet, cod_set: &VertexSet) -> Result<Morphism> {
        let (dom, dom_verts) = self.domain.induced(dom_set);
        let (cod, cod_verts) = self.codomain.induced(cod_set);
        let back: HashMap<Vertex, Vertex> = cod_verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let map = dom_verts
            .iter()
            .map(|&u| {
                back.get(&self.map[u]).copied().ok_or_else(|| {
                    Error::pre(format!(
                        "restriction: image of `{}` leaves the target set",
                        self.domain.name(u)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            domain: Arc::new(dom),
            codomain: Arc::new(cod),
            map,
        })
    }

    pub fn is_homomorphism(&self) -> bool {
        self.domain
            .edges()
            .all(|(u, v)| self.codomain.related(self.map[u], self.map[v]))
    }

    /// Homomorphism, onto the vertices, and onto every nondegenerate edge.
    pub fn is_epimorphism(&self) -> bool {
        if !self.is_homomorphism() {
            return false;
        }
        let mut hit = vec![false; self.codomain.len()];
        for &t in &self.map {
            hit[t] = true;
        }
        if hit.iter().any(|h| !h) {
            return false;
        }
        let covered: std::collections::HashSet<(Vertex, Vertex)> = self
            .domain
            .edges()
            .map(|(u, v)| (self.map[u], self.map[v]))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        self.codomain.edges().all(|e| covered.contains(&e))
    }

    /// Vertex fibers and edge fibers connected. For an epimorphism this is
    /// equivalent to every preimage of a connected set being connected.
    fn fibers_connected(&self) -> bool {
        self.codomain
            .vertices()
            .all(|t| self.domain.is_connected_set(&self.fiber(t)))
            && self
                .codomain
                .edges()
                .all(|(a, b)| self.domain.is_connected_set(&self.preimage(&VertexSet::from([a, b]))))
    }

    /// First edge `P` (in edge order) with a component of `f⁻¹(P)` that
    /// contains no edge mapped onto `P`.
    pub fn confluence_failure(&self) -> Option<ConfluenceWitness> {
        for (a, b) in self.codomain.edges() {
            let pre = self.preimage(&VertexSet::from([a, b]));
            for comp in self.domain.components(&pre) {
                let onto = comp.iter().any(|&x| {
                    self.map[x] == a
                        && self
                            .domain
                            .neighbors(x)
                            .iter()
                            .any(|&y| self.map[y] == b && comp.contains(&y))
                });
                if !onto {
                    return Some(ConfluenceWitness {
                        edge: (a, b),
                        component: comp,
                    });
                }
            }
        }
        None
    }

    pub fn classify(&self) -> Classification {
        let homomorphism = self.is_homomorphism();
        let epimorphism = homomorphism && self.is_epimorphism();
        let witness = if epimorphism { self.confluence_failure() } else { None };
        Classification {
            homomorphism,
            epimorphism,
            monotone: epimorphism && self.fibers_connected(),
            confluent: epimorphism && witness.is_none(),
            witness,
        }
    }

    pub fn is_confluent_epi(&self) -> bool {
        self.is_epimorphism() && self.confluence_failure().is_none()
    }

    pub(crate) fn require_confluent_epi(&self, what: &str) -> Result<()> {
        if self.is_confluent_epi() {
            Ok(())
        } else {
            Err(Error::pre(format!("{what}: map is not a confluent epimorphism")))
        }
    }

    /// Connected codomain set `Q` and component `C` of `f⁻¹(Q)` with
    /// `f(C) ≠ Q`, scanning every connected `Q`.
    pub fn definition_violation(&self, bound: usize) -> Result<Option<(VertexSet, VertexSet)>> {
        self.codomain.check_search_bound(bound, "confluence by definition")?;
        for q in self.codomain.connected_masks() {
            let q = mask_to_set(q);
            let pre = self.preimage(&q);
            for comp in self.domain.components(&pre) {
                if self.image(&comp) != q {
                    return Ok(Some((q, comp)));
                }
            }
        }
        Ok(None)
    }

    /// Confluence checked literally over all connected codomain sets.
    pub fn confluent_by_definition(&self, bound: usize) -> Result<bool> {
        Ok(self.is_epimorphism() && self.definition_violation(bound)?.is_none())
    }
}

/// Depth-first search over homomorphisms `g → h` in canonical order
/// (domain vertices assigned in token order, targets tried in token order).
/// `visit` sees each complete homomorphism; `budget` caps search nodes.
pub fn for_each_homomorphism(
    g: &Graph,
    h: &Graph,
    budget: usize,
    surjective: bool,
    mut visit: impl FnMut(&[Vertex]),
) -> Result<usize> {
    struct Search<'a, F> {
        g: &'a Graph,
        h: &'a Graph,
        budget: usize,
        nodes: usize,
        found: usize,
        surjective: bool,
        hits: Vec<usize>,
        unhit: usize,
        map: Vec<Vertex>,
        visit: F,
    }
    impl<F: FnMut(&[Vertex])> Search<'_, F> {
        fn go(&mut self, v: usize) -> Result<()> {
            if v == self.g.len() {
                if self.unhit == 0 || !self.surjective {
                    self.found += 1;
                    (self.visit)(&self.map);
                }
                return Ok(());
            }
            if self.surjective && self.unhit > self.g.len() - v {
                return Ok(());
            }
            for t in self.h.vertices() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::budget(
                        "homomorphism enumeration",
                        self.budget,
                        self.nodes,
                        self.found,
                    ));
                }
                let ok = self
                    .g
                    .neighbors(v)
                    .iter()
                    .all(|&u| u > v || self.h.related(self.map[u], t));
                if !ok {
                    continue;
                }
                self.map[v] = t;
                self.hits[t] += 1;
                if self.hits[t] == 1 {
                    self.unhit -= 1;
                }
                let r = self.go(v + 1);
                self.hits[t] -= 1;
                if self.hits[t] == 0 {
                    self.unhit += 1;
                }
                r?;
            }
            Ok(())
        }
    }
    if h.is_empty() {
        if g.is_empty() {
            visit(&[]);
            return Ok(1);
        }
        return Ok(0);
    }
    let mut s = Search {
        g,
        h,
        budget,
        nodes: 0,
        found: 0,
        surjective,
        hits: vec![0; h.len()],
        unhit: h.len(),
        map: vec![0; g.len()],
        visit: &mut visit,
    };
    s.go(0)?;
    Ok(s.found)
}

/// Every epimorphism `g → h` in canonical order.
pub fn enumerate_epis(g: &Arc<Graph>, h: &Arc<Graph>, budget: usize) -> Result<Vec<Morphism>> {
    let mut out = Vec::new();
    for_each_homomorphism(g, h, budget, true, |m| {
        let f = Morphism {
            domain: g.clone(),
            codomain: h.clone(),
            map: m.to_vec(),
        };
        if f.is_epimorphism() {
            out.push(f);
        }
    })?;
    Ok(out)
}

/// Every confluent epimorphism `g → h` in canonical order.
pub fn enumerate_confluent_epis(g: &Arc<Graph>, h: &Arc<Graph>, budget: usize) -> Result<Vec<Morphism>> {
    let mut out = Vec::new();
    let mut candidates = 0usize;
    let res = for_each_homomorphism(g, h, budget, true, |m| {
        candidates += 1;
        let f = Morphism {
            domain: g.clone(),
            codomain: h.clone(),
            map: m.to_vec(),
        };
        if f.is_confluent_epi() {
            out.push(f);
        }
    });
    match res {
        Ok(_) => Ok(out),
        Err(Error::BudgetExceeded {
            what, limit, explored, ..
        }) => Err(Error::BudgetExceeded {
            what,
            limit,
            explored,
            found: out.len(),
        }),
        Err(e) => Err(e),
    }
}

/// Lifts the arc `arc` (with end-vertex `end`) through a confluent
/// epimorphism to an arc starting at `start` that maps monotonically onto it.
///
/// Segments follow a shortest path inside the component of `f⁻¹({aᵢ, aᵢ₊₁})`
/// from the current vertex to the fiber of `aᵢ₊₁`; chords of the
/// concatenation are then shortcut, which keeps the image sequence
/// non-decreasing along the arc.
pub fn lift_arc(f: &Morphism, arc: &VertexSet, end: Vertex, start: Vertex) -> Result<VertexSet> {
    f.require_confluent_epi("lift_arc")?;
    let h = f.codomain();
    let g = f.domain();
    let order = h
        .arc_order(arc, end)
        .ok_or_else(|| Error::pre("lift_arc: target is not an arc with the given end-vertex"))?;
    if f.apply(start) != end {
        return Err(Error::pre("lift_arc: start vertex does not map to the arc end"));
    }
    let mut walk = vec![start];
    for pair in order.windows(2) {
        let cur = *walk.last().expect("nonempty");
        let pre = f.preimage(&VertexSet::from([pair[0], pair[1]]));
        let comp = g.component_of(&pre, cur);
        let targets: VertexSet = comp.iter().copied().filter(|&x| f.apply(x) == pair[1]).collect();
        let seg = g.shortest_path(&comp, cur, &targets).ok_or_else(|| {
            Error::Invariant("lift_arc: confluence step found no edge onto the next arc vertex".into())
        })?;
        walk.extend_from_slice(&seg[1..]);
    }
    shortcut_path(g, &mut walk);
    let lifted: VertexSet = walk.iter().copied().collect();
    let restricted = f.restrict(&lifted, arc)?;
    let ends = g.arc_ends(&lifted).unwrap_or_default();
    let c = restricted.classify();
    if !ends.contains(&start) || !c.monotone {
        return Err(Error::Invariant("lift_arc: lifted set is not a monotone arc".into()));
    }
    Ok(lifted)
}

fn shortcut_path(g: &Graph, walk: &mut Vec<Vertex>) {
    'outer: loop {
        for i in 0..walk.len() {
            for j in (i + 2..walk.len()).rev() {
                if g.adjacent(walk[i], walk[j]) {
                    walk.drain(i + 1..j);
                    continue 'outer;
                }
            }
        }
        return;
    }
}

/// Lifts a chordless cycle of the codomain to a chordless cycle of the
/// domain whose image is exactly the cycle's vertex set.
pub fn lift_cycle(f: &Morphism, cycle: &OrientedCycle) -> Result<OrientedCycle> {
    f.require_confluent_epi("lift_cycle")?;
    let g = f.domain();
    let h = f.codomain();
    let cs = cycle.ambient_order(h)?;
    let target: VertexSet = cs.iter().copied().collect();
    let n = cs.len();

    let y0 = f.fiber(cs[0]).into_iter().next().expect("epimorphism");
    let mut walk = vec![y0];
    let mut first_seen: HashMap<Vertex, usize> = HashMap::from([(y0, 0)]);
    let mut i = 0;
    let closed = loop {
        let cur = *walk.last().expect("nonempty");
        let pair = VertexSet::from([cs[i], cs[(i + 1) % n]]);
        let comp = g.component_of(&f.preimage(&pair), cur);
        let targets: VertexSet = comp
            .iter()
            .copied()
            .filter(|&x| f.apply(x) == cs[(i + 1) % n])
            .collect();
        let seg = g
            .shortest_path(&comp, cur, &targets)
            .ok_or_else(|| Error::Invariant("lift_cycle: confluence step failed".into()))?;
        let mut hit = None;
        for &x in &seg[1..] {
            if let Some(&p) = first_seen.get(&x) {
                hit = Some(p);
                break;
            }
            first_seen.insert(x, walk.len());
            walk.push(x);
        }
        if let Some(p) = hit {
            break walk[p..].to_vec();
        }
        i = (i + 1) % n;
    };

    let mut ring = closed;
    while let Some((a, b)) = least_chord(g, &ring) {
        let inner: Vec<Vertex> = ring[a..=b].to_vec();
        let outer: Vec<Vertex> = ring[b..].iter().chain(ring[..=a].iter()).copied().collect();
        let covers = |r: &[Vertex]| r.iter().map(|&x| f.apply(x)).collect::<VertexSet>() == target;
        ring = match (covers(&inner), covers(&outer)) {
            (true, true) if inner.len() <= outer.len() => inner,
            (true, true) | (false, true) => outer,
            (true, false) => inner,
            (false, false) => return exhaustive_cycle_lift(f, &target),
        };
    }
    OrientedCycle::from_ambient(g, &ring)
}

fn least_chord(g: &Graph, ring: &[Vertex]) -> Option<(usize, usize)> {
    let n = ring.len();
    for a in 0..n {
        for b in a + 2..n {
            if a == 0 && b == n - 1 {
                continue;
            }
            if g.adjacent(ring[a], ring[b]) {
                return Some((a, b));
            }
        }
    }
    None
}

fn exhaustive_cycle_lift(f: &Morphism, target: &VertexSet) -> Result<OrientedCycle> {
    let g = f.domain();
    let pre = f.preimage(target);
    let (sub, verts) = g.induced(&pre);
    sub.induced_cycles(3)
        .into_iter()
        .filter_map(|c| c.ambient_order(&sub).ok())
        .map(|seq| seq.iter().map(|&v| verts[v]).collect::<Vec<_>>())
        .find(|seq| seq.iter().map(|&x| f.apply(x)).collect::<VertexSet>() == *target)
        .map(|seq| OrientedCycle::from_ambient(g, &seq))
        .unwrap_or_else(|| Err(Error::Invariant("lift_cycle: no cycle maps onto the target".into())))
}

/// Default search-node budget for homomorphism enumeration.
pub const DEFAULT_ENUM_BUDGET: usize = 5_000_000;

/// Convenience: brute-force confluence with the default bound.
pub fn confluent_by_definition(f: &Morphism) -> Result<bool> {
    f.confluent_by_definition(DEFAULT_SEARCH_BOUND)
}
