//! Graph-building constructions, each returning a projection back onto its
//! input graph.
//!
//! Copies of an input vertex `x` are named `x@i`.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::cycles::OrientedCycle;
use crate::error::{Error, Result};
use crate::graph::{mask_connected, mask_to_set, CycleDivision, Graph, Vertex, VertexSet};
use crate::morphism::Morphism;

fn copy_name(g: &Graph, v: Vertex, i: usize) -> String {
    format!("{}@{}", g.name(v), i)
}

fn require_edge(g: &Graph, a: Vertex, b: Vertex) -> Result<()> {
    if !g.adjacent(a, b) {
        return Err(Error::pre(format!("`{}`–`{}` is not an edge", g.name(a), g.name(b))));
    }
    Ok(())
}

fn check_vertex(g: &Graph, v: Vertex) -> Result<()> {
    if v >= g.len() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    Ok(())
}

/// A new graph with its projection onto the input.
#[derive(Debug, Clone)]
pub struct Built {
    pub graph: Arc<Graph>,
    pub map: Morphism,
}

#[derive(Debug, Clone)]
pub struct SplitEdge {
    pub built: Built,
    pub s: Vertex,
}

/// Replaces the edge `a–b` by the path `a–s–b`. `s` maps to `b`, or to `a`
/// when `paper_literal` is set.
pub fn split_edge(g: &Arc<Graph>, a: Vertex, b: Vertex, paper_literal: bool) -> Result<SplitEdge> {
    check_vertex(g, a)?;
    check_vertex(g, b)?;
    require_edge(g, a, b)?;
    let mut names = g.names().to_vec();
    let s = names.len();
    names.push(g.fresh_token("s"));
    let edges = g
        .edges()
        .filter(|&(u, v)| (u, v) != (a.min(b), a.max(b)))
        .chain([(a, s), (s, b)]);
    let h = Arc::new(Graph::from_parts(names, edges)?);
    let mut map: Vec<Vertex> = g.vertices().collect();
    map.push(if paper_literal { a } else { b });
    let f = Morphism::new(h.clone(), g.clone(), map)?;
    Ok(SplitEdge {
        built: Built { graph: h, map: f },
        s,
    })
}

/// Vertices `p, q, r` over `a, b, c` with `p–q` and `q–r` both edges.
pub fn transitive_premise_violation(f: &Morphism, a: Vertex, b: Vertex, c: Vertex) -> Option<(Vertex, Vertex, Vertex)> {
    let h = f.domain();
    for q in f.fiber(b) {
        let p = h.neighbors(q).iter().copied().find(|&p| f.apply(p) == a);
        let r = h.neighbors(q).iter().copied().find(|&r| f.apply(r) == c);
        if let (Some(p), Some(r)) = (p, r) {
            return Some((p, q, r));
        }
    }
    None
}

/// `2n + 1` copies of `f` (indexed from 1) chained by the linking edges
/// `(aᵢ, i)–(bᵢ, i+1)` and `(aᵢ, n+i)–(bᵢ, n+i+1)`, where `⟨aᵢ, bᵢ⟩` is the
/// `i`-th edge in edge order.
pub fn indecomposability_witness(f: &Arc<Graph>) -> Result<Built> {
    if !f.is_connected() || f.edge_count() == 0 {
        return Err(Error::pre(
            "indecomposability witness needs a connected graph with an edge",
        ));
    }
    let n = f.edge_count();
    let size = f.len();
    let copies = 2 * n + 1;
    let idx = |v: Vertex, i: usize| (i - 1) * size + v;
    let names = (1..=copies)
        .flat_map(|i| f.vertices().map(move |v| (v, i)))
        .map(|(v, i)| copy_name(f, v, i))
        .collect();
    let mut edges: Vec<(Vertex, Vertex)> = (1..=copies)
        .flat_map(|i| f.edges().map(move |(u, v)| (idx(u, i), idx(v, i))))
        .collect();
    for (k, (a, b)) in f.edges().enumerate() {
        let i = k + 1;
        edges.push((idx(a, i), idx(b, i + 1)));
        edges.push((idx(a, n + i), idx(b, n + i + 1)));
    }
    let g = Arc::new(Graph::from_parts(names, edges)?);
    let map = (1..=copies).flat_map(|_| f.vertices()).collect();
    let p = Morphism::new(g.clone(), f.clone(), map)?;
    Ok(Built { graph: g, map: p })
}

/// Connected `A`, `B` covering the domain with neither mapped onto the
/// codomain, by literal enumeration of all pairs of connected sets.
pub fn two_pass_violation_exhaustive(f: &Morphism) -> Result<Option<(VertexSet, VertexSet)>> {
    let g = f.domain();
    g.check_search_bound(20, "two-pass enumeration")?;
    let full = f.codomain().len();
    let masks: Vec<u64> = g
        .connected_masks()
        .into_iter()
        .filter(|&m| f.image(&mask_to_set(m)).len() < full)
        .collect();
    let all = (1u64 << g.len()) - 1;
    for (i, &a) in masks.iter().enumerate() {
        for &b in &masks[i..] {
            if a | b == all {
                return Ok(Some((mask_to_set(a), mask_to_set(b))));
            }
        }
    }
    Ok(None)
}

/// Same property, pruned: for each connected `A` not mapped onto, a bad
/// `B` exists iff the rest `R` lies in one component of the preimage of
/// the codomain minus some vertex `w ∉ f(R)`.
pub fn two_pass_violation(f: &Morphism) -> Result<Option<(VertexSet, VertexSet)>> {
    let g = f.domain();
    g.check_search_bound(24, "two-pass check")?;
    let cod = f.codomain();
    let n = g.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let nbr: Vec<u64> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect();
    let fiber_mask: Vec<u64> = cod
        .vertices()
        .map(|t| f.fiber(t).iter().fold(0u64, |m, &v| m | (1 << v)))
        .collect();
    let image_of = |m: u64| cod.vertices().filter(|&t| fiber_mask[t] & m != 0).count();
    for a in 1..all {
        if !mask_connected(&nbr, a) || image_of(a) == cod.len() {
            continue;
        }
        let rest = all & !a;
        for w in cod.vertices() {
            if fiber_mask[w] & rest != 0 {
                continue;
            }
            let allowed = all & !fiber_mask[w];
            // Component of `allowed` containing the lowest vertex of `rest`.
            let mut comp = rest & rest.wrapping_neg();
            loop {
                let mut grown = comp;
                let mut it = comp;
                while it != 0 {
                    let v = it.trailing_zeros() as usize;
                    it &= it - 1;
                    grown |= nbr[v] & allowed;
                }
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            if rest & !comp == 0 {
                return Ok(Some((mask_to_set(a), mask_to_set(comp))));
            }
        }
    }
    Ok(None)
}

/// `Δ(G, p)`: two copies of `g` glued at `p`.
pub fn delta_double(g: &Arc<Graph>, p: Vertex) -> Result<Built> {
    check_vertex(g, p)?;
    let mut names = Vec::new();
    let mut idx = vec![[0usize; 2]; g.len()];
    let mut map = Vec::new();
    for v in g.vertices() {
        if v == p {
            idx[v] = [names.len(); 2];
            names.push(g.name(v).to_owned());
            map.push(v);
        }
    }
    for i in 0..2 {
        for (v, slot) in idx.iter_mut().enumerate().filter(|&(v, _)| v != p) {
            slot[i] = names.len();
            names.push(copy_name(g, v, i));
            map.push(v);
        }
    }
    let edges: Vec<(Vertex, Vertex)> = (0..2)
        .flat_map(|i| g.edges().map(move |(u, v)| (u, v, i)))
        .map(|(u, v, i)| (idx[u][i], idx[v][i]))
        .collect();
    let d = Arc::new(Graph::from_parts(names, edges)?);
    let delta = Morphism::new(d.clone(), g.clone(), map)?;
    Ok(Built { graph: d, map: delta })
}

/// Extends `f: W → U` along an induced embedding `U ⊆ G` to `f*: H → G`
/// with `H = W ⊔ (G ∖ U)` and `(f*)⁻¹(U) = W`.
pub fn extend_confluent(f: &Morphism, g: &Arc<Graph>, embed: &Morphism) -> Result<Built> {
    f.require_confluent_epi("extension")?;
    let w = f.domain();
    let u = f.codomain();
    if **embed.domain() != **u || **embed.codomain() != **g {
        return Err(Error::pre("embedding must map the codomain of f into G"));
    }
    let image = embed.full_image();
    if image.len() != u.len() {
        return Err(Error::pre("embedding is not injective"));
    }
    let induced = u.vertices().all(|x| {
        u.vertices()
            .all(|y| u.adjacent(x, y) == g.adjacent(embed.apply(x), embed.apply(y)))
    });
    if !induced {
        return Err(Error::pre("embedding does not induce the subgraph U"));
    }
    if !w.is_connected() || !g.is_connected() || !u.is_connected() {
        return Err(Error::pre("extension needs connected W, U and G"));
    }
    let outside: Vec<Vertex> = g.vertices().filter(|v| !image.contains(v)).collect();
    let mut names: Vec<String> = w.names().to_vec();
    let mut used: HashSet<String> = names.iter().cloned().collect();
    for &v in &outside {
        let mut t = g.name(v).to_owned();
        while used.contains(&t) {
            t.push('\'');
        }
        used.insert(t.clone());
        names.push(t);
    }
    let off = w.len();
    let local = |v: Vertex| outside.binary_search(&v).ok().map(|i| off + i);
    let mut edges: Vec<(Vertex, Vertex)> = w.edges().collect();
    edges.extend(g.edges().filter_map(|(a, b)| Some((local(a)?, local(b)?))));
    for x in w.vertices() {
        let fx = embed.apply(f.apply(x));
        for (i, &y) in outside.iter().enumerate() {
            if g.adjacent(fx, y) {
                edges.push((x, off + i));
            }
        }
    }
    let h = Arc::new(Graph::from_parts(names, edges)?);
    let map = w
        .vertices()
        .map(|x| embed.apply(f.apply(x)))
        .chain(outside.iter().copied())
        .collect();
    let fstar = Morphism::new(h.clone(), g.clone(), map)?;
    Ok(Built { graph: h, map: fstar })
}

/// One copy of some `X_j` inside an unfolding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyInfo {
    /// `j`, the chain index of the copied set.
    pub level: usize,
    /// Copy this one hangs from (none for the base copy of `X₀`).
    pub parent: Option<usize>,
    /// Attachment edge `(x, copy of t)` in the unfolded graph.
    pub attach: Option<(Vertex, Vertex)>,
    /// Layer `k` at which the copy first appears in `Y_k`.
    pub layer: usize,
    pub vertices: Vec<Vertex>,
}

#[derive(Debug, Clone)]
pub struct UnfoldingResult {
    pub graph: Arc<Graph>,
    pub map: Morphism,
    /// `Y₀`, the copy of `X₀`.
    pub base: VertexSet,
    /// `Y₁`.
    pub kernel: VertexSet,
    /// `Y₀ ⊆ Y₁ ⊆ … ⊆ Yₙ`.
    pub layers: Vec<VertexSet>,
    /// The chain `X₀ ⊊ … ⊊ Xₙ` in the input graph.
    pub chain: Vec<VertexSet>,
    pub copies: Vec<CopyInfo>,
}

impl UnfoldingResult {
    /// `C_k`: the component of `g⁻¹(X_k)` containing the base copy.
    pub fn component_over(&self, k: usize) -> VertexSet {
        let pre = self.map.preimage(&self.chain[k]);
        let anchor = *self.base.iter().next().expect("nonempty base");
        self.graph.component_of(&pre, anchor)
    }

    /// Chain levels of the copies first appearing in layer `k`, ascending.
    pub fn layer_levels(&self, k: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.copies.iter().filter(|c| c.layer == k).map(|c| c.level).collect();
        v.sort_unstable();
        v
    }

    /// Whether collapsing every copy to a point leaves a tree.
    pub fn collapse_is_tree(&self) -> bool {
        let mut owner = vec![usize::MAX; self.graph.len()];
        for (i, c) in self.copies.iter().enumerate() {
            for &v in &c.vertices {
                owner[v] = i;
            }
        }
        let mut links = BTreeSet::new();
        let mut cross = 0;
        for (u, v) in self.graph.edges() {
            if owner[u] != owner[v] {
                cross += 1;
                links.insert((owner[u].min(owner[v]), owner[u].max(owner[v])));
            }
        }
        let names = (0..self.copies.len()).map(|i| i.to_string()).collect();
        let quotient = Graph::from_parts(names, links.iter().copied()).expect("copy quotient");
        cross == links.len() && links.len() + 1 == self.copies.len() && quotient.is_connected()
    }
}

/// Unfolding of `b` along `chain = X₀ ⊊ X₁ ⊊ … ⊊ Xₙ = V(b)`.
///
/// Every vertex `x` first added in a copy of `X_j` receives, for each
/// neighbour `t ∉ X_j` of its original, a fresh copy of the least `X_{i+1}`
/// containing `t`, joined to `x` through the copy of `t`. Neighbours inside
/// `X₀` are never reached from the base, since no index fits them.
pub fn unfold(b: &Arc<Graph>, chain: &[VertexSet]) -> Result<UnfoldingResult> {
    unfold_capped(b, chain, usize::MAX)
}

/// [`unfold`], failing once the unfolded graph passes `cap` vertices.
pub fn unfold_capped(b: &Arc<Graph>, chain: &[VertexSet], cap: usize) -> Result<UnfoldingResult> {
    if chain.is_empty() || chain[0].is_empty() {
        return Err(Error::pre("unfolding chain must start with a nonempty set"));
    }
    if *chain.last().expect("nonempty") != b.all() {
        return Err(Error::pre("unfolding chain must end with all vertices"));
    }
    for (i, x) in chain.iter().enumerate() {
        if x.iter().any(|&v| v >= b.len()) {
            return Err(Error::UnknownVertex(x.iter().max().expect("nonempty").to_string()));
        }
        if !b.is_connected_set(x) {
            return Err(Error::pre(format!("chain set {i} is not connected")));
        }
        if i > 0 && !(chain[i - 1].is_subset(x) && chain[i - 1].len() < x.len()) {
            return Err(Error::pre(format!("chain is not strictly increasing at {i}")));
        }
    }
    let level_of = |t: Vertex| {
        chain
            .iter()
            .position(|x| x.contains(&t))
            .expect("last set is everything")
    };

    let mut names: Vec<String> = Vec::new();
    let mut orig: Vec<Vertex> = Vec::new();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut copies: Vec<CopyInfo> = Vec::new();

    let add_copy = |level: usize,
                    parent: Option<usize>,
                    layer: usize,
                    names: &mut Vec<String>,
                    orig: &mut Vec<Vertex>,
                    edges: &mut Vec<(Vertex, Vertex)>,
                    copies: &mut Vec<CopyInfo>| {
        let idx = copies.len();
        let start = names.len();
        let set = &chain[level];
        let verts: Vec<Vertex> = set.iter().copied().collect();
        for &v in &verts {
            names.push(copy_name(b, v, idx));
            orig.push(v);
        }
        let local = |v: Vertex| start + verts.binary_search(&v).expect("member");
        for (u, v) in b.edges() {
            if set.contains(&u) && set.contains(&v) {
                edges.push((local(u), local(v)));
            }
        }
        copies.push(CopyInfo {
            level,
            parent,
            attach: None,
            layer,
            vertices: (start..start + verts.len()).collect(),
        });
        idx
    };

    add_copy(0, None, 0, &mut names, &mut orig, &mut edges, &mut copies);
    let mut layers = vec![(0..names.len()).collect::<VertexSet>()];
    let mut frontier: Vec<usize> = vec![0];
    let mut layer = 0;
    while !frontier.is_empty() {
        layer += 1;
        let mut next = Vec::new();
        for &ci in &frontier {
            let j = copies[ci].level;
            for x in copies[ci].vertices.clone() {
                for &t in b.neighbors(orig[x]) {
                    if chain[j].contains(&t) {
                        continue;
                    }
                    let lvl = level_of(t);
                    let child = add_copy(lvl, Some(ci), layer, &mut names, &mut orig, &mut edges, &mut copies);
                    let tc = copies[child]
                        .vertices
                        .iter()
                        .copied()
                        .find(|&v| orig[v] == t)
                        .expect("t lies in its copy");
                    edges.push((x, tc));
                    copies[child].attach = Some((x, tc));
                    next.push(child);
                    if names.len() > cap {
                        return Err(Error::budget("unfolded vertices", cap, names.len(), 0));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push((0..names.len()).collect());
        frontier = next;
    }
    let n = chain.len() - 1;
    while layers.len() < n + 1 {
        layers.push(layers.last().expect("nonempty").clone());
    }
    let graph = Arc::new(Graph::from_parts(names, edges)?);
    let map = Morphism::new(graph.clone(), b.clone(), orig)?;
    let base: VertexSet = copies[0].vertices.iter().copied().collect();
    let kernel = layers.get(1).cloned().unwrap_or_else(|| base.clone());
    Ok(UnfoldingResult {
        graph,
        map,
        base,
        kernel,
        layers,
        chain: chain.to_vec(),
        copies,
    })
}

/// Two levels of `f` in which the edges between `K ∖ C` and `C` cross
/// levels instead of staying inside them.
pub fn unicoherence_witness(f: &Arc<Graph>, div: &CycleDivision) -> Result<Built> {
    div.validate(f)?;
    let n = f.len();
    let names = (0..2)
        .flat_map(|i| f.vertices().map(move |v| (v, i)))
        .map(|(v, i)| copy_name(f, v, i))
        .collect();
    let crossing = |x: Vertex, y: Vertex| div.k.contains(&x) && !div.c.contains(&x) && div.c.contains(&y);
    let mut edges = Vec::new();
    for (x, y) in f.edges() {
        if crossing(x, y) || crossing(y, x) {
            edges.push((x, n + y));
            edges.push((n + x, y));
        } else {
            edges.push((x, y));
            edges.push((n + x, n + y));
        }
    }
    let g = Arc::new(Graph::from_parts(names, edges)?);
    let map = (0..2).flat_map(|_| f.vertices()).collect();
    let alpha = Morphism::new(g.clone(), f.clone(), map)?;
    Ok(Built { graph: g, map: alpha })
}

/// A cycle division of `alpha`'s domain whose parts map onto the parts of
/// `div`, by exhaustive search.
pub fn lifted_division(alpha: &Morphism, div: &CycleDivision, bound: usize) -> Result<Option<CycleDivision>> {
    let g = alpha.domain();
    g.check_search_bound(bound, "lifted cycle division search")?;
    let sets: Vec<VertexSet> = g.connected_masks().into_iter().map(mask_to_set).collect();
    let hs: Vec<&VertexSet> = sets.iter().filter(|s| alpha.image(s) == div.h).collect();
    let ks: Vec<&VertexSet> = sets.iter().filter(|s| alpha.image(s) == div.k).collect();
    for h in &hs {
        for k in &ks {
            let inter: VertexSet = h.intersection(k).copied().collect();
            let comps = g.components(&inter);
            if comps.len() < 2 || comps.len() > 20 {
                continue;
            }
            for bits in 1..(1u32 << comps.len()) - 1 {
                let mut c = VertexSet::new();
                let mut d = VertexSet::new();
                for (i, comp) in comps.iter().enumerate() {
                    if bits >> i & 1 == 1 {
                        c.extend(comp);
                    } else {
                        d.extend(comp);
                    }
                }
                if alpha.image(&c) == div.c && alpha.image(&d) == div.d {
                    return Ok(Some(CycleDivision {
                        h: (*h).clone(),
                        k: (*k).clone(),
                        c,
                        d,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct CycleBuilt {
    pub built: Built,
    pub cycle: OrientedCycle,
}

/// `m` copies of `a` with the least edge `x–y` of `c` rewired as
/// `x_i – y_{i+1}`; the copies of `c` join into one cycle of `m·|c|`
/// vertices.
pub fn wrap_copies(a: &Arc<Graph>, c: &OrientedCycle, m: usize) -> Result<CycleBuilt> {
    if m == 0 {
        return Err(Error::pre("wrap_copies needs at least one copy"));
    }
    let seq = c.ambient_order(a)?;
    let as_cycle = OrientedCycle::from_ambient(a, &seq)?;
    if as_cycle.graph() != c.graph() {
        return Err(Error::NotACycle("cycle is not induced in A".into()));
    }
    let k = seq.len();
    let (x, y) = (0..k)
        .map(|i| (seq[i].min(seq[(i + 1) % k]), seq[i].max(seq[(i + 1) % k])))
        .min()
        .expect("nonempty cycle");
    let size = a.len();
    let idx = |v: Vertex, i: usize| i * size + v;
    let names = (0..m)
        .flat_map(|i| a.vertices().map(move |v| (v, i)))
        .map(|(v, i)| copy_name(a, v, i))
        .collect();
    let mut edges = Vec::new();
    for i in 0..m {
        for (u, v) in a.edges() {
            if (u, v) == (x, y) {
                edges.push((idx(x, i), idx(y, (i + 1) % m)));
            } else {
                edges.push((idx(u, i), idx(v, i)));
            }
        }
    }
    let b = Arc::new(Graph::from_parts(names, edges)?);
    let f = Morphism::new(b.clone(), a.clone(), (0..m).flat_map(|_| a.vertices()).collect())?;
    // Walk the lifted cycle from the base copy of seq[0].
    let mut walk = Vec::with_capacity(k * m);
    let mut copy = 0;
    for step in 0..k * m {
        let i = step % k;
        walk.push(idx(seq[i], copy));
        let (u, v) = (seq[i], seq[(i + 1) % k]);
        if (u, v) == (x, y) {
            copy = (copy + 1) % m;
        } else if (u, v) == (y, x) {
            copy = (copy + m - 1) % m;
        }
    }
    let cycle = OrientedCycle::from_ambient(&b, &walk)?;
    Ok(CycleBuilt {
        built: Built { graph: b, map: f },
        cycle,
    })
}

#[derive(Debug, Clone)]
pub struct AttachedVertex {
    pub built: Built,
    pub b: Vertex,
    pub cycle: OrientedCycle,
}

/// Adds a vertex `b` adjacent to both ends of the edge `a–c`, mapped to `a`.
pub fn attach_cycle_vertex(g: &Arc<Graph>, a: Vertex, c: Vertex) -> Result<AttachedVertex> {
    check_vertex(g, a)?;
    check_vertex(g, c)?;
    require_edge(g, a, c)?;
    let mut names = g.names().to_vec();
    let b = names.len();
    names.push(g.fresh_token("b"));
    let edges = g.edges().chain([(b, a), (b, c)]);
    let h = Arc::new(Graph::from_parts(names, edges)?);
    let mut map: Vec<Vertex> = g.vertices().collect();
    map.push(a);
    let f = Morphism::new(h.clone(), g.clone(), map)?;
    let cycle = OrientedCycle::from_ambient(&h, &[a, b, c])?;
    Ok(AttachedVertex {
        built: Built { graph: h, map: f },
        b,
        cycle,
    })
}

/// Replaces the cycle `c = (c₀, …)` by `(c₀, c₀', c₁, c₁', …)`; each vertex
/// off the cycle is joined to both copies of its cycle neighbours.
pub fn double_cycle(a: &Arc<Graph>, c: &OrientedCycle) -> Result<CycleBuilt> {
    let seq = c.ambient_order(a)?;
    let as_cycle = OrientedCycle::from_ambient(a, &seq)?;
    if as_cycle.graph() != c.graph() {
        return Err(Error::NotACycle("cycle is not induced in A".into()));
    }
    let on_cycle: VertexSet = seq.iter().copied().collect();
    let rest: Vec<Vertex> = a.vertices().filter(|v| !on_cycle.contains(v)).collect();
    let mut names: Vec<String> = rest.iter().map(|&v| a.name(v).to_owned()).collect();
    let mut map: Vec<Vertex> = rest.clone();
    let mut used: HashSet<String> = a.names().iter().cloned().collect();
    let off = names.len();
    for &v in &seq {
        names.push(a.name(v).to_owned());
        map.push(v);
        let mut t = format!("{}'", a.name(v));
        while used.contains(&t) {
            t.push('\'');
        }
        used.insert(t.clone());
        names.push(t);
        map.push(v);
    }
    let k = seq.len();
    let local = |v: Vertex| rest.binary_search(&v).ok();
    let mut edges: Vec<(Vertex, Vertex)> = a.edges().filter_map(|(u, v)| Some((local(u)?, local(v)?))).collect();
    for i in 0..2 * k {
        edges.push((off + i, off + (i + 1) % (2 * k)));
    }
    for (ri, &x) in rest.iter().enumerate() {
        for i in 0..2 * k {
            if a.adjacent(x, seq[i / 2]) {
                edges.push((ri, off + i));
            }
        }
    }
    let b = Arc::new(Graph::from_parts(names, edges)?);
    let f = Morphism::new(b.clone(), a.clone(), map)?;
    let walk: Vec<Vertex> = (off..off + 2 * k).collect();
    let cycle = OrientedCycle::from_ambient(&b, &walk)?;
    Ok(CycleBuilt {
        built: Built { graph: b, map: f },
        cycle,
    })
}

/// Restriction of `f` to the cycle `d` of its domain, onto the image cycle
/// `c` of its codomain.
pub fn restrict_to_cycle(f: &Morphism, d: &OrientedCycle, c: &OrientedCycle) -> Result<Morphism> {
    let dset: VertexSet = d.ambient_order(f.domain())?.into_iter().collect();
    let cset: VertexSet = c.ambient_order(f.codomain())?.into_iter().collect();
    f.restrict(&dset, &cset)
}
