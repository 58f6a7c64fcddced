//! Finite reflexive symmetric graphs.
//!
//! A [`Graph`] stores its vertex tokens in declaration order and only the
//! nondegenerate edges; every vertex carries an implicit loop. Vertices are
//! addressed by their index ([`Vertex`]), which is also the token order used by
//! every enumeration in the crate.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::cycles::OrientedCycle;
use crate::error::{Error, Result};

/// Index of a vertex inside its graph.
pub type Vertex = usize;

/// A subset of a graph's vertices.
pub type VertexSet = BTreeSet<Vertex>;

/// Vertex count above which exhaustive subset searches refuse to run.
pub const DEFAULT_SEARCH_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Builds a graph from tokens. Loops in `edges` are dropped, duplicates and
    /// reversed pairs are merged.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let names: Vec<String> = vertices.into_iter().map(|s| s.as_ref().to_owned()).collect();
        let mut g = Graph::with_names(names)?;
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let (Some(u), Some(v)) = (g.index_of(a), g.index_of(b)) else {
                return Err(Error::DanglingEdge(a.to_owned(), b.to_owned()));
            };
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from tokens and index pairs.
    pub fn from_parts(names: Vec<String>, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Graph::with_names(names)?;
        let n = g.len();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::DanglingEdge(u.to_string(), v.to_string()));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    fn with_names(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let adj = vec![Vec::new(); names.len()];
        Ok(Graph { names, index, adj })
    }

    fn insert_edge(&mut self, u: Vertex, v: Vertex) {
        if u == v {
            return;
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
    }

    /// The one-vertex graph.
    pub fn point(name: &str) -> Self {
        Graph::new([name], std::iter::empty::<(&str, &str)>()).expect("single vertex")
    }

    /// Path `v0 – v1 – … – v{n-1}`.
    pub fn path(n: usize) -> Self {
        let names = (0..n).map(|i| format!("v{i}")).collect();
        Graph::from_parts(names, (1..n).map(|i| (i - 1, i))).expect("path")
    }

    /// Cycle `v0 – v1 – … – v{n-1} – v0`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let names = (0..n).map(|i| format!("v{i}")).collect();
        Graph::from_parts(names, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.names.len()
    }

    pub fn all(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, token: &str) -> Option<Vertex> {
        self.index.get(token).copied()
    }

    pub fn vertex(&self, token: &str) -> Result<Vertex> {
        self.index_of(token)
            .ok_or_else(|| Error::UnknownVertex(token.to_owned()))
    }

    /// Resolves tokens into a vertex set.
    pub fn resolve<S: AsRef<str>>(&self, tokens: impl IntoIterator<Item = S>) -> Result<VertexSet> {
        tokens.into_iter().map(|t| self.vertex(t.as_ref())).collect()
    }

    pub fn set_names(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|&v| self.names[v].clone()).collect()
    }

    /// Nondegenerate neighbours, ascending.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Nondegenerate adjacency.
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    /// Reflexive edge relation: `u == v` or adjacent.
    pub fn related(&self, u: Vertex, v: Vertex) -> bool {
        u == v || self.adj[u].binary_search(&v).is_ok()
    }

    /// Nondegenerate edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// A token not yet used in the graph, derived from `base`.
    pub fn fresh_token(&self, base: &str) -> String {
        let mut candidate = base.to_owned();
        while self.index.contains_key(&candidate) {
            candidate.push('\'');
        }
        candidate
    }

    /// Induced subgraph on `set`, keeping tokens and relative order. Also
    /// returns the ambient vertex of each new vertex.
    pub fn induced(&self, set: &VertexSet) -> (Graph, Vec<Vertex>) {
        let verts: Vec<Vertex> = set.iter().copied().collect();
        let local: HashMap<Vertex, Vertex> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let names = verts.iter().map(|&v| self.names[v].clone()).collect();
        let edges = self
            .edges()
            .filter_map(|(u, v)| Some((*local.get(&u)?, *local.get(&v)?)));
        (Graph::from_parts(names, edges).expect("induced subgraph"), verts)
    }

    /// Partition of `set` into maximal connected pieces. Blocks are listed by
    /// their least vertex.
    pub fn components(&self, set: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for &start in set {
            if seen.contains(&start) {
                continue;
            }
            let mut block = VertexSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(u) = queue.pop_front() {
                block.insert(u);
                for &w in &self.adj[u] {
                    if set.contains(&w) && seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(block);
        }
        out
    }

    /// The component of `set` containing `v`.
    pub fn component_of(&self, set: &VertexSet, v: Vertex) -> VertexSet {
        self.components(set)
            .into_iter()
            .find(|c| c.contains(&v))
            .unwrap_or_default()
    }

    /// Connectedness of the induced subgraph; the empty set counts as connected.
    pub fn is_connected_set(&self, set: &VertexSet) -> bool {
        self.components(set).len() <= 1
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_set(&self.all())
    }

    /// Shortest path from `from` to any vertex of `targets`, moving only
    /// inside `within`. Ties are broken by token order.
    pub fn shortest_path(&self, within: &VertexSet, from: Vertex, targets: &VertexSet) -> Option<Vec<Vertex>> {
        if !within.contains(&from) {
            return None;
        }
        let mut parent: HashMap<Vertex, Vertex> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        parent.insert(from, from);
        while let Some(u) = queue.pop_front() {
            if targets.contains(&u) {
                let mut path = vec![u];
                let mut cur = u;
                while cur != from {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.adj[u] {
                if within.contains(&w) && !parent.contains_key(&w) {
                    parent.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Arc test. Returns the end-vertices when the induced subgraph on `set`
    /// is connected and all but at most two of its vertices are cut vertices.
    /// A single vertex is an arc with itself as its only end.
    pub fn arc_ends(&self, set: &VertexSet) -> Option<Vec<Vertex>> {
        if set.is_empty() || !self.is_connected_set(set) {
            return None;
        }
        if set.len() == 1 {
            return Some(set.iter().copied().collect());
        }
        let mut ends = Vec::new();
        for &x in set {
            let mut rest = set.clone();
            rest.remove(&x);
            if self.is_connected_set(&rest) {
                ends.push(x);
                if ends.len() > 2 {
                    return None;
                }
            }
        }
        Some(ends)
    }

    pub fn is_arc(&self, set: &VertexSet) -> bool {
        self.arc_ends(set).is_some()
    }

    /// Walks an arc from one of its ends. Returns `None` if `set` is not an
    /// arc with `start` as an end-vertex.
    pub fn arc_order(&self, set: &VertexSet, start: Vertex) -> Option<Vec<Vertex>> {
        let ends = self.arc_ends(set)?;
        if !ends.contains(&start) {
            return None;
        }
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        while order.len() < set.len() {
            let next = self.adj[cur]
                .iter()
                .copied()
                .find(|w| set.contains(w) && Some(*w) != prev && !order.contains(w))?;
            prev = Some(cur);
            cur = next;
            order.push(cur);
        }
        Some(order)
    }

    /// Every chordless cycle with at least `min_len` vertices, once each, in
    /// canonical orientation: least vertex first, then its lesser cycle
    /// neighbour.
    pub fn induced_cycles(&self, min_len: usize) -> Vec<OrientedCycle> {
        let min_len = min_len.max(3);
        let mut out = Vec::new();
        for s in self.vertices() {
            let mut path = vec![s];
            let mut on_path = vec![false; self.len()];
            on_path[s] = true;
            self.extend_chordless(s, &mut path, &mut on_path, min_len, &mut out);
        }
        out
    }

    fn extend_chordless(
        &self,
        s: Vertex,
        path: &mut Vec<Vertex>,
        on_path: &mut [bool],
        min_len: usize,
        out: &mut Vec<OrientedCycle>,
    ) {
        let last = *path.last().expect("nonempty path");
        for &v in &self.adj[last] {
            if v <= s || on_path[v] {
                continue;
            }
            // v may touch only `last` among the interior vertices.
            let interior = path.get(1..path.len() - 1).unwrap_or(&[]);
            if interior.iter().any(|&p| self.adjacent(p, v)) {
                continue;
            }
            let closes = path.len() >= 2 && self.adjacent(s, v);
            if closes {
                if path.len() + 1 >= min_len && path[1] < v {
                    let mut seq = path.clone();
                    seq.push(v);
                    out.push(OrientedCycle::from_ambient(self, &seq).expect("chordless by construction"));
                }
                continue;
            }
            path.push(v);
            on_path[v] = true;
            self.extend_chordless(s, path, on_path, min_len, out);
            on_path[v] = false;
            path.pop();
        }
    }

    /// Whether the whole graph is a single chordless cycle.
    pub fn is_chordless_cycle(&self) -> bool {
        self.len() >= 3 && self.is_connected() && self.adj.iter().all(|ns| ns.len() == 2)
    }

    pub(crate) fn check_search_bound(&self, bound: usize, what: &str) -> Result<()> {
        if self.len() > bound {
            return Err(Error::budget(what, bound, self.len(), 0));
        }
        Ok(())
    }

    fn neighbor_masks(&self) -> Vec<u64> {
        assert!(self.len() <= 64, "mask search needs at most 64 vertices");
        self.adj
            .iter()
            .map(|ns| ns.iter().fold(0u64, |m, &w| m | (1 << w)))
            .collect()
    }

    /// All connected nonempty vertex subsets as bitmasks, ascending.
    pub(crate) fn connected_masks(&self) -> Vec<u64> {
        let nbr = self.neighbor_masks();
        (1u64..(1u64 << self.len()))
            .filter(|&m| mask_connected(&nbr, m))
            .collect()
    }

    /// First cycle division in canonical order, if any.
    ///
    /// Connected sets `H` are scanned by ascending bitmask. For a fixed `H`
    /// some connected `K` splits `H ∩ K` exactly when a component of `G − H`
    /// touches two non-adjacent vertices `c < d` of `H`; then `K` is `{c, d}`
    /// plus a shortest path through that component, `C = {c}` and `D = {d}`.
    pub fn find_cycle_division(&self, bound: usize) -> Result<Option<CycleDivision>> {
        self.check_search_bound(bound, "cycle division search")?;
        let n = self.len();
        if n < 4 {
            return Ok(None);
        }
        let nbr = self.neighbor_masks();
        let full = (1u64 << n) - 1;
        for h in 1u64..full {
            if !mask_connected(&nbr, h) {
                continue;
            }
            let outside = mask_to_set(full & !h);
            for comp in self.components(&outside) {
                let touch: Vec<Vertex> = (0..n)
                    .filter(|&x| h & (1 << x) != 0 && self.adj[x].iter().any(|w| comp.contains(w)))
                    .collect();
                for (i, &c) in touch.iter().enumerate() {
                    for &d in &touch[i + 1..] {
                        if self.adjacent(c, d) {
                            continue;
                        }
                        let start: VertexSet = self.adj[c].iter().copied().filter(|w| comp.contains(w)).collect();
                        let goal: VertexSet = self.adj[d].iter().copied().filter(|w| comp.contains(w)).collect();
                        let link = start
                            .iter()
                            .filter_map(|&s0| self.shortest_path(&comp, s0, &goal))
                            .min_by_key(|p| (p.len(), p.clone()))
                            .expect("component is connected");
                        let mut k: VertexSet = link.into_iter().collect();
                        k.insert(c);
                        k.insert(d);
                        return Ok(Some(CycleDivision {
                            h: mask_to_set(h),
                            k,
                            c: VertexSet::from([c]),
                            d: VertexSet::from([d]),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_hereditarily_unicoherent(&self, bound: usize) -> Result<bool> {
        Ok(self.find_cycle_division(bound)?.is_none())
    }

    /// Whether connected `t` separates every two distinct outside vertices
    /// adjacent to it, i.e. no component of `G − T` holds two of them.
    pub fn is_adjacently_disconnecting(&self, t: &VertexSet) -> Result<bool> {
        if t.is_empty() || !self.is_connected_set(t) {
            return Err(Error::pre(
                "adjacently disconnecting set must be nonempty and connected",
            ));
        }
        let outside: VertexSet = self.vertices().filter(|v| !t.contains(v)).collect();
        Ok(self.components(&outside).iter().all(|comp| {
            comp.iter()
                .filter(|&&x| self.adj[x].iter().any(|w| t.contains(w)))
                .count()
                <= 1
        }))
    }

    /// Graphviz text: undirected edges, loops omitted.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph {} {{", dot_id(name));
        for v in &self.names {
            let _ = writeln!(s, "  {};", dot_id(v));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {} -- {};", dot_id(&self.names[u]), dot_id(&self.names[v]));
        }
        s.push_str("}\n");
        s
    }
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub(crate) fn mask_connected(nbr: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return true;
    }
    let mut reached = mask & mask.wrapping_neg();
    loop {
        let mut grown = reached;
        let mut rest = reached;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grown |= nbr[v] & mask;
        }
        if grown == reached {
            return reached == mask;
        }
        reached = grown;
    }
}

pub(crate) fn mask_to_set(mask: u64) -> VertexSet {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

/// A quadruple `⟨H, K, C, D⟩` witnessing that intersections of connected
/// sets can be disconnected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDivision {
    pub h: VertexSet,
    pub k: VertexSet,
    pub c: VertexSet,
    pub d: VertexSet,
}

impl CycleDivision {
    pub fn is_valid(&self, g: &Graph) -> bool {
        let inter: VertexSet = self.h.intersection(&self.k).copied().collect();
        let union: VertexSet = self.c.union(&self.d).copied().collect();
        !self.h.is_empty()
            && !self.k.is_empty()
            && g.is_connected_set(&self.h)
            && g.is_connected_set(&self.k)
            && !self.c.is_empty()
            && !self.d.is_empty()
            && inter == union
            && self.c.is_disjoint(&self.d)
            && self.c.iter().all(|&x| self.d.iter().all(|&y| !g.adjacent(x, y)))
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.is_valid(g) {
            Ok(())
        } else {
            Err(Error::pre("not a cycle division"))
        }
    }
}
