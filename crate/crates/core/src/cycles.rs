//! Oriented chordless cycles, wrapping and almost wrapping maps.
//!
//! Positions on an [`OrientedCycle`] are indices into its cyclic order, so
//! `position(succ(v)) == position(v) + 1 (mod len)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::amalgam::AmalgamResult;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::morphism::Morphism;

/// A graph that is a chordless cycle together with a cyclic orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedCycle {
    graph: Arc<Graph>,
    order: Vec<Vertex>,
    pos: Vec<usize>,
}

impl OrientedCycle {
    /// `order` lists every vertex of `graph` once, consecutive entries
    /// adjacent, and the graph has no other edges.
    pub fn new(graph: Arc<Graph>, order: Vec<Vertex>) -> Result<Self> {
        if !graph.is_chordless_cycle() {
            return Err(Error::NotACycle("graph is not a single chordless cycle".into()));
        }
        let n = graph.len();
        let mut pos = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::NotACycle("orientation must list every vertex once".into()));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::NotACycle("orientation must list every vertex once".into()));
            }
            pos[v] = i;
        }
        for i in 0..n {
            if !graph.adjacent(order[i], order[(i + 1) % n]) {
                return Err(Error::NotACycle(format!(
                    "`{}` and `{}` are consecutive but not adjacent",
                    graph.name(order[i]),
                    graph.name(order[(i + 1) % n])
                )));
            }
        }
        Ok(OrientedCycle { graph, order, pos })
    }

    pub fn from_tokens<S: AsRef<str>>(graph: Arc<Graph>, tokens: &[S]) -> Result<Self> {
        let order = tokens
            .iter()
            .map(|t| graph.vertex(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        OrientedCycle::new(graph, order)
    }

    /// Least vertex first, then its lesser neighbour.
    pub fn canonical(graph: Arc<Graph>) -> Result<Self> {
        if !graph.is_chordless_cycle() {
            return Err(Error::NotACycle("graph is not a single chordless cycle".into()));
        }
        let mut order = vec![0, graph.neighbors(0)[0]];
        while order.len() < graph.len() {
            let prev = order[order.len() - 2];
            let cur = order[order.len() - 1];
            let next = graph
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| w != prev)
                .expect("degree two");
            order.push(next);
        }
        OrientedCycle::new(graph, order)
    }

    /// The cycle induced by `seq` inside `g`, oriented along `seq`. The
    /// cycle's own graph keeps the ambient tokens.
    pub fn from_ambient(g: &Graph, seq: &[Vertex]) -> Result<Self> {
        if seq.len() < 3 {
            return Err(Error::NotACycle("a cycle needs at least three vertices".into()));
        }
        let set: VertexSet = seq.iter().copied().collect();
        if set.len() != seq.len() || seq.iter().any(|&v| v >= g.len()) {
            return Err(Error::NotACycle(
                "cycle vertices must be distinct vertices of the graph".into(),
            ));
        }
        let (sub, verts) = g.induced(&set);
        let local: HashMap<Vertex, Vertex> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let order = seq.iter().map(|v| local[v]).collect();
        OrientedCycle::new(Arc::new(sub), order)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Vertex at position `i` (taken modulo the length).
    pub fn at(&self, i: usize) -> Vertex {
        self.order[i % self.order.len()]
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.pos[v]
    }

    pub fn succ(&self, v: Vertex) -> Vertex {
        self.at(self.pos[v] + 1)
    }

    pub fn pred(&self, v: Vertex) -> Vertex {
        self.at(self.pos[v] + self.len() - 1)
    }

    pub fn tokens(&self) -> Vec<String> {
        self.order.iter().map(|&v| self.graph.name(v).to_owned()).collect()
    }

    /// The cyclic order as vertices of an ambient graph with the same tokens.
    pub fn ambient_order(&self, ambient: &Graph) -> Result<Vec<Vertex>> {
        self.order.iter().map(|&v| ambient.vertex(self.graph.name(v))).collect()
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order[1..].reverse();
        OrientedCycle::new(self.graph.clone(), order).expect("reversal of a valid orientation")
    }

    /// `[a, b]`: from `a` along the orientation up to `b`. Must be a proper
    /// subset; `[a, a] = {a}`.
    pub fn oriented_arc(&self, a: Vertex, b: Vertex) -> Result<VertexSet> {
        let n = self.len();
        if a >= n || b >= n {
            return Err(Error::UnknownVertex(format!("{}", a.max(b))));
        }
        let span = (self.pos[b] + n - self.pos[a]) % n;
        if span == n - 1 {
            return Err(Error::pre("oriented arc would be the whole cycle"));
        }
        Ok((0..=span).map(|i| self.at(self.pos[a] + i)).collect())
    }

    /// Positions (in `cod`) of `w` applied along this cycle's order.
    fn image_positions(&self, w: &Morphism, cod: &OrientedCycle) -> Vec<usize> {
        self.order.iter().map(|&v| cod.pos[w.apply(v)]).collect()
    }
}

fn check_cycle_map(w: &Morphism, dom: &OrientedCycle, cod: &OrientedCycle) -> Result<()> {
    if **w.domain() != **dom.graph() || **w.codomain() != **cod.graph() {
        return Err(Error::pre(
            "orientations do not belong to the map's domain and codomain",
        ));
    }
    Ok(())
}

fn require_surjective_hom(w: &Morphism) -> Result<()> {
    if !w.is_homomorphism() || w.full_image().len() != w.codomain().len() {
        return Err(Error::pre("map must be a surjective homomorphism"));
    }
    Ok(())
}

/// Common number of components of the vertex fibers of a wrapping map.
pub fn winding_number(f: &Morphism) -> Result<usize> {
    if !f.domain().is_chordless_cycle() || !f.codomain().is_chordless_cycle() {
        return Err(Error::NotACycle("winding number needs maps between cycles".into()));
    }
    f.require_confluent_epi("winding number")?;
    let counts: Vec<usize> = f
        .codomain()
        .vertices()
        .map(|c| f.domain().components(&f.fiber(c)).len())
        .collect();
    if counts.iter().any(|&c| c != counts[0]) {
        return Err(Error::Invariant(format!("fiber component counts differ: {counts:?}")));
    }
    Ok(counts[0])
}

/// Largest component of any vertex fiber.
pub fn max_fiber_component(f: &Morphism) -> usize {
    f.codomain()
        .vertices()
        .flat_map(|c| f.domain().components(&f.fiber(c)))
        .map(|c| c.len())
        .max()
        .unwrap_or(0)
}

/// Whether every component of every vertex fiber has at least two vertices.
pub fn has_fat_fibers(f: &Morphism) -> bool {
    f.codomain()
        .vertices()
        .all(|c| f.domain().components(&f.fiber(c)).iter().all(|comp| comp.len() >= 2))
}

/// A reversed triple: `w(c) = x`, `w(a) = z`, `x`, `z` distinct and
/// non-adjacent, and `w([a, c]) = [x, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapViolation {
    pub x: Vertex,
    pub z: Vertex,
    pub a: Vertex,
    pub c: Vertex,
}

/// First reversed triple of `w`, scanning `a` then `c` along `dom`'s order.
pub fn swap_violation(w: &Morphism, dom: &OrientedCycle, cod: &OrientedCycle) -> Result<Option<SwapViolation>> {
    check_cycle_map(w, dom, cod)?;
    require_surjective_hom(w)?;
    let n = dom.len();
    let k = cod.len();
    let wp = dom.image_positions(w, cod);
    for i in 0..n {
        let mut hits = vec![0usize; k];
        let mut distinct = 0;
        hits[wp[i]] += 1;
        distinct += 1;
        // c = i + j, j ≤ n − 2 keeps [a, c] proper.
        for j in 1..n.saturating_sub(1) {
            let p = wp[(i + j) % n];
            hits[p] += 1;
            if hits[p] == 1 {
                distinct += 1;
            }
            let (x, z) = (p, wp[i]);
            let gap = (z + k - x) % k;
            if gap < 2 || gap == k - 1 {
                continue;
            }
            if distinct == gap + 1 && (0..=gap).all(|t| hits[(x + t) % k] > 0) {
                return Ok(Some(SwapViolation {
                    x: cod.at(x),
                    z: cod.at(z),
                    a: dom.at(i),
                    c: dom.at(i + j),
                }));
            }
        }
    }
    Ok(None)
}

/// No reversed triple exists.
pub fn is_almost_wrapping(w: &Morphism, dom: &OrientedCycle, cod: &OrientedCycle) -> Result<bool> {
    Ok(swap_violation(w, dom, cod)?.is_none())
}

/// Consecutive `x → y → z` along `dom` whose images step backwards twice.
pub fn zigzag_violation(
    w: &Morphism,
    dom: &OrientedCycle,
    cod: &OrientedCycle,
) -> Result<Option<(Vertex, Vertex, Vertex)>> {
    check_cycle_map(w, dom, cod)?;
    let n = dom.len();
    let k = cod.len();
    let wp = dom.image_positions(w, cod);
    let back = |p: usize, q: usize| (p + k - 1) % k == q;
    for i in 0..n {
        let (x, y, z) = (i, (i + 1) % n, (i + 2) % n);
        if back(wp[x], wp[y]) && back(wp[y], wp[z]) {
            return Ok(Some((dom.at(x), dom.at(y), dom.at(z))));
        }
    }
    Ok(None)
}

/// An almost wrapping map `w` with a confluent witness `f`: `f` wraps
/// along the orientations and `w(y) ∈ {f(y), succ f(y)}` everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub domain: OrientedCycle,
    pub codomain: OrientedCycle,
    pub w: Morphism,
    pub f: Morphism,
}

impl WitnessPair {
    pub fn new(domain: OrientedCycle, codomain: OrientedCycle, w: Morphism, f: Morphism) -> Result<Self> {
        let pair = WitnessPair { domain, codomain, w, f };
        pair.validate()?;
        Ok(pair)
    }

    /// Canonical witness for `w`, if any.
    pub fn find(
        domain: OrientedCycle,
        codomain: OrientedCycle,
        w: Morphism,
        require_proper: bool,
    ) -> Result<Option<Self>> {
        Ok(
            find_confluent_witness(&w, &domain, &codomain, require_proper)?.map(|f| WitnessPair {
                domain,
                codomain,
                w,
                f,
            }),
        )
    }

    pub fn validate(&self) -> Result<()> {
        check_cycle_map(&self.w, &self.domain, &self.codomain)?;
        check_cycle_map(&self.f, &self.domain, &self.codomain)?;
        require_surjective_hom(&self.w)?;
        self.f.require_confluent_epi("confluent witness")?;
        let k = self.codomain.len();
        let wp = self.domain.image_positions(&self.w, &self.codomain);
        let fp = self.domain.image_positions(&self.f, &self.codomain);
        let n = fp.len();
        for i in 0..n {
            let step = (fp[(i + 1) % n] + k - fp[i]) % k;
            if step > 1 {
                return Err(Error::pre("confluent witness does not preserve orientation"));
            }
            let shift = (wp[i] + k - fp[i]) % k;
            if shift > 1 {
                return Err(Error::pre(format!(
                    "witness condition fails at `{}`",
                    self.domain.graph().name(self.domain.at(i))
                )));
            }
        }
        Ok(())
    }

    /// Every fiber component of the witness has at least two vertices.
    pub fn is_proper(&self) -> bool {
        has_fat_fibers(&self.f)
    }

    pub fn winding_number(&self) -> Result<usize> {
        winding_number(&self.f)
    }
}

/// Lexicographically least witness along `dom`'s order, preferring
/// `f(y) = w(y)` over `f(y) = pred w(y)` at each vertex.
///
/// A witness is encoded by one bit per vertex; a memoised feasibility table
/// over (position, bit, current run length, first run length) drives a
/// greedy choice.
pub fn find_confluent_witness(
    w: &Morphism,
    dom: &OrientedCycle,
    cod: &OrientedCycle,
    require_proper: bool,
) -> Result<Option<Morphism>> {
    check_cycle_map(w, dom, cod)?;
    require_surjective_hom(w)?;
    let n = dom.len();
    let k = cod.len();
    let wp = dom.image_positions(w, cod);
    let fval = |i: usize, b: usize| (wp[i] + k - b) % k;

    // first == 0: no step taken yet; otherwise the (capped) first run length.
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    struct State {
        b: usize,
        cur: usize,
        first: usize,
    }

    struct Dp<'a, F: Fn(usize, usize) -> usize> {
        n: usize,
        k: usize,
        fval: &'a F,
        b0: usize,
        proper: bool,
        memo: HashMap<(usize, State), bool>,
    }

    impl<F: Fn(usize, usize) -> usize> Dp<'_, F> {
        fn step(&self, i: usize, s: State, nb: usize) -> Option<State> {
            let j = i + 1;
            let d = ((self.fval)(j % self.n, nb) + self.k - (self.fval)(i, s.b)) % self.k;
            match d {
                0 => Some(State {
                    b: nb,
                    cur: (s.cur + 1).min(2),
                    first: s.first,
                }),
                1 => {
                    if s.first != 0 && self.proper && s.cur < 2 {
                        return None;
                    }
                    let first = if s.first == 0 { s.cur } else { s.first };
                    Some(State { b: nb, cur: 1, first })
                }
                _ => None,
            }
        }

        fn closes(&self, s: State) -> bool {
            let d = ((self.fval)(0, self.b0) + self.k - (self.fval)(self.n - 1, s.b)) % self.k;
            match d {
                0 => s.first != 0,
                1 => s.first != 0 && (!self.proper || (s.cur >= 2 && s.first >= 2)),
                _ => false,
            }
        }

        fn feasible(&mut self, i: usize, s: State) -> bool {
            if i == self.n - 1 {
                return self.closes(s);
            }
            if let Some(&r) = self.memo.get(&(i, s)) {
                return r;
            }
            let r = (0..2).any(|nb| self.step(i, s, nb).is_some_and(|t| self.feasible(i + 1, t)));
            self.memo.insert((i, s), r);
            r
        }
    }

    for b0 in 0..2 {
        let mut dp = Dp {
            n,
            k,
            fval: &fval,
            b0,
            proper: require_proper,
            memo: HashMap::new(),
        };
        let start = State {
            b: b0,
            cur: 1,
            first: 0,
        };
        if !dp.feasible(0, start) {
            continue;
        }
        let mut bits = vec![b0];
        let mut s = start;
        for i in 0..n - 1 {
            let next = (0..2)
                .find_map(|nb| dp.step(i, s, nb).filter(|&t| dp.feasible(i + 1, t)).map(|t| (nb, t)))
                .expect("feasible state has a feasible successor");
            bits.push(next.0);
            s = next.1;
        }
        let mut map = vec![0; n];
        for (i, &b) in bits.iter().enumerate() {
            map[dom.at(i)] = cod.at(fval(i, b));
        }
        let f = Morphism::new(w.domain().clone(), w.codomain().clone(), map)?;
        if !f.is_confluent_epi() {
            return Err(Error::Invariant("witness search produced a non-confluent map".into()));
        }
        return Ok(Some(f));
    }
    Ok(None)
}

/// Proper witness for `g1.w ∘ g2.w` obtained by repairing `g1.f ∘ g2.f`
/// run by run.
pub fn compose_witness(g1: &WitnessPair, g2: &WitnessPair) -> Result<WitnessPair> {
    g1.validate()?;
    g2.validate()?;
    if !g1.is_proper() || !g2.is_proper() {
        return Err(Error::pre("compose_witness needs proper witnesses"));
    }
    if g2.codomain != g1.domain {
        return Err(Error::pre("compose_witness: middle cycles or orientations differ"));
    }
    let e = &g2.domain;
    let c = &g1.codomain;
    let k = c.len();
    let n = e.len();
    let g = g1.w.compose(&g2.w)?;
    let f0 = g1.f.compose(&g2.f)?;
    let gp = e.image_positions(&g, c);
    let f0p = e.image_positions(&f0, c);

    // Runs of f0 along E, starting at a run boundary.
    let offset = (0..n)
        .find(|&i| f0p[i] != f0p[(i + n - 1) % n])
        .ok_or_else(|| Error::Invariant("composite witness is constant".into()))?;
    let mut runs: Vec<(usize, usize)> = Vec::new(); // (start, length) in rotated positions
    for t in 0..n {
        let i = (offset + t) % n;
        if t == 0 || f0p[i] != f0p[(i + n - 1) % n] {
            runs.push((t, 1));
        } else {
            runs.last_mut().expect("run").1 += 1;
        }
    }
    let r = runs.len();
    let at = |t: usize| (offset + t) % n;

    // boundary[q]: rotated position where the repaired value of run q
    // begins; it may fall inside the preceding run, hence signed.
    let boundary: Vec<isize> = (0..r)
        .map(|q| {
            let (xs, xl) = runs[(q + r - 1) % r];
            let ys = runs[q].0;
            let target = (f0p[at(ys)] + 1) % k;
            match (0..xl).map(|t| xs + t).find(|&t| gp[at(t)] == target) {
                Some(t) if t > ys => t as isize - n as isize,
                Some(t) => t as isize,
                None => ys as isize,
            }
        })
        .collect();

    let mut fp = vec![0usize; n];
    for q in 0..r {
        let j = f0p[at(runs[q].0)];
        let to = if q + 1 < r {
            boundary[q + 1]
        } else {
            boundary[0] + n as isize
        };
        for t in boundary[q]..to {
            fp[at(t.rem_euclid(n as isize) as usize)] = j;
        }
    }
    let mut map = vec![0; n];
    for i in 0..n {
        map[e.at(i)] = c.at(fp[i]);
    }
    let f = Morphism::new(g.domain().clone(), g.codomain().clone(), map)?;
    let pair = WitnessPair {
        domain: e.clone(),
        codomain: c.clone(),
        w: g,
        f,
    };
    pair.validate()
        .map_err(|err| Error::Invariant(format!("composed witness invalid: {err}")))?;
    if !pair.is_proper() {
        return Err(Error::Invariant("composed witness is not proper".into()));
    }
    Ok(pair)
}

/// Output of [`cycle_amalgam`] with the parameters of the construction.
#[derive(Debug, Clone)]
pub struct CycleAmalgam {
    pub result: AmalgamResult,
    /// Largest fiber component over both maps.
    pub block: usize,
    pub winding_f: usize,
    pub winding_g: usize,
    /// Length of the common codomain cycle.
    pub base: usize,
}

/// Fiber components of a wrapping map, listed along an orientation of the
/// domain in which the map moves forward, starting at the component of
/// `f⁻¹(a₀)` that holds its least vertex. Each component is an oriented arc.
fn ordered_components(f: &Morphism, base: &OrientedCycle) -> Result<Vec<Vec<Vertex>>> {
    let mut dom = OrientedCycle::canonical(f.domain().clone())?;
    let k = base.len();
    let step = |d: &OrientedCycle| {
        let fp = d.image_positions(f, base);
        (0..fp.len())
            .map(|i| (fp[(i + 1) % fp.len()] + k - fp[i]) % k)
            .find(|&s| s != 0)
            .unwrap_or(1)
    };
    if step(&dom) != 1 {
        dom = dom.reversed();
    }
    let fp = dom.image_positions(f, base);
    let n = fp.len();
    let anchor = f.fiber(base.at(0)).into_iter().next().expect("epimorphism");
    // Walk back to the start of the anchor's run.
    let mut start = dom.position(anchor);
    while fp[(start + n - 1) % n] == fp[start] {
        start = (start + n - 1) % n;
    }
    let mut comps: Vec<Vec<Vertex>> = Vec::new();
    for t in 0..n {
        let i = (start + t) % n;
        if t == 0 || fp[i] != fp[(i + n - 1) % n] {
            comps.push(Vec::new());
        }
        comps.last_mut().expect("component").push(dom.at(i));
    }
    Ok(comps)
}

/// Amalgamation of two wrapping maps onto the same cycle by a cycle of
/// length `N·W_f·W_g·k`, built block by block.
pub fn cycle_amalgam(f: &Morphism, g: &Morphism) -> Result<CycleAmalgam> {
    if **f.codomain() != **g.codomain() {
        return Err(Error::pre("cycle amalgam: maps have different codomains"));
    }
    for m in [f, g] {
        if !m.domain().is_chordless_cycle() || !m.codomain().is_chordless_cycle() {
            return Err(Error::NotACycle("cycle amalgam needs maps between cycles".into()));
        }
        m.require_confluent_epi("cycle amalgam")?;
    }
    let base = OrientedCycle::canonical(f.codomain().clone())?;
    let k = base.len();
    let (wf, wg) = (winding_number(f)?, winding_number(g)?);
    let block = max_fiber_component(f).max(max_fiber_component(g));
    let blocks = wf * wg * k;
    let m = block * blocks;

    let bs = ordered_components(f, &base)?;
    let cs = ordered_components(g, &base)?;
    let mut f0 = Vec::with_capacity(m);
    let mut g0 = Vec::with_capacity(m);
    for b in 0..blocks {
        let bc = &bs[b % bs.len()];
        let cc = &cs[b % cs.len()];
        for p in 0..block {
            f0.push(bc[p.min(bc.len() - 1)]);
            g0.push(cc[p.min(cc.len() - 1)]);
        }
    }
    let names = (0..m).map(|i| format!("d{i}")).collect();
    let d = Arc::new(Graph::from_parts(names, (0..m).map(|i| (i, (i + 1) % m)))?);
    let f0 = Morphism::new(d.clone(), f.domain().clone(), f0)?;
    let g0 = Morphism::new(d.clone(), g.domain().clone(), g0)?;
    let result = AmalgamResult::new(d, f0, g0, f, g)?;
    Ok(CycleAmalgam {
        result,
        block,
        winding_f: wf,
        winding_g: wg,
        base: k,
    })
}
