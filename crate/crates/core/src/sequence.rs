//! Finite prefixes of inverse sequences of graphs with confluent bonds.
//!
//! Levels are indexed from 0; `bonds[n]` maps level `n + 1` onto level `n`.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use crate::amalgam::connected_amalgam;
use crate::canon::connected_graphs_up_to;
use crate::constructions::{unfold, unfold_capped};
use crate::cycles::{has_fat_fibers, swap_violation, winding_number, OrientedCycle, SwapViolation, WitnessPair};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::morphism::{enumerate_confluent_epis, Morphism, DEFAULT_ENUM_BUDGET};

/// Base of the thread metric `d(x, y) = BASE^(-k)`.
pub const THREAD_METRIC_BASE: f64 = 2.0;

/// Vertex cap for the graph built while batching demands into one level.
pub const LEVEL_VERTEX_CAP: usize = 40;

/// A task `f: A → F_n` met by `g: F_m → A` with `f ∘ g = α_n^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub level: usize,
    pub graph: Arc<Graph>,
    pub f: Vec<Vertex>,
    pub satisfied_at: usize,
    pub g: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSequence {
    levels: Vec<Arc<Graph>>,
    bonds: Vec<Morphism>,
    thread: Option<Vec<Vertex>>,
    ledger: Vec<LedgerEntry>,
    confluent: bool,
}

impl InverseSequence {
    pub fn new(levels: Vec<Arc<Graph>>, bonds: Vec<Morphism>) -> Result<Self> {
        Self::build(levels, bonds, true)
    }

    /// Bonds need only be surjective homomorphisms, as for towers of
    /// almost wrapping maps.
    pub fn of_homomorphisms(levels: Vec<Arc<Graph>>, bonds: Vec<Morphism>) -> Result<Self> {
        Self::build(levels, bonds, false)
    }

    fn build(levels: Vec<Arc<Graph>>, bonds: Vec<Morphism>, confluent: bool) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::pre("a sequence needs at least one level"));
        }
        if bonds.len() + 1 != levels.len() {
            return Err(Error::pre(format!(
                "{} levels need {} bonds",
                levels.len(),
                levels.len() - 1
            )));
        }
        for (n, b) in bonds.iter().enumerate() {
            if **b.domain() != *levels[n + 1] || **b.codomain() != *levels[n] {
                return Err(Error::pre(format!(
                    "bond {n} does not map level {} onto level {n}",
                    n + 1
                )));
            }
            check_bond(b, confluent, &format!("bond {n}"))?;
        }
        Ok(InverseSequence {
            levels,
            bonds,
            thread: None,
            ledger: Vec::new(),
            confluent,
        })
    }

    /// Whether bonds are required to be confluent epimorphisms.
    pub fn has_confluent_bonds(&self) -> bool {
        self.confluent
    }

    pub fn point() -> Self {
        InverseSequence::new(vec![Arc::new(Graph::point("v0"))], Vec::new()).expect("one level")
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[Arc<Graph>] {
        &self.levels
    }

    pub fn bonds(&self) -> &[Morphism] {
        &self.bonds
    }

    pub fn level(&self, n: usize) -> &Arc<Graph> {
        &self.levels[n]
    }

    pub fn thread(&self) -> Option<&[Vertex]> {
        self.thread.as_deref()
    }

    pub fn ledger(&self) -> &[LedgerEntry] {
        &self.ledger
    }

    pub fn push(&mut self, level: Arc<Graph>, bond: Morphism) -> Result<()> {
        if **bond.domain() != *level || **bond.codomain() != **self.levels.last().expect("nonempty") {
            return Err(Error::pre("bond must map the new level onto the last one"));
        }
        check_bond(&bond, self.confluent, "bond")?;
        self.levels.push(level);
        self.bonds.push(bond);
        self.thread = None;
        Ok(())
    }

    /// Sets the thread; `thread[n + 1]` must map to `thread[n]`.
    pub fn set_thread(&mut self, thread: Vec<Vertex>) -> Result<()> {
        if thread.len() != self.len() {
            return Err(Error::pre("thread needs one vertex per level"));
        }
        for (n, &x) in thread.iter().enumerate() {
            if x >= self.levels[n].len() {
                return Err(Error::UnknownVertex(x.to_string()));
            }
        }
        for (n, b) in self.bonds.iter().enumerate() {
            if b.apply(thread[n + 1]) != thread[n] {
                return Err(Error::pre(format!("thread is not coherent at bond {n}")));
            }
        }
        self.thread = Some(thread);
        Ok(())
    }

    /// The thread through `v` on the last level.
    pub fn thread_from_top(&self, v: Vertex) -> Vec<Vertex> {
        let mut t = vec![v];
        for b in self.bonds.iter().rev() {
            t.push(b.apply(*t.last().expect("nonempty")));
        }
        t.reverse();
        t
    }

    pub fn set_ledger(&mut self, ledger: Vec<LedgerEntry>) -> Result<()> {
        for e in &ledger {
            check_factorisation(self, e.level, &e.graph, &e.f, e.satisfied_at, &e.g)?;
        }
        self.ledger = ledger;
        Ok(())
    }

    /// `st(x) = {x} ∪ N(x)` in level `n`.
    pub fn star(&self, n: usize, x: Vertex) -> VertexSet {
        let g = &self.levels[n];
        std::iter::once(x).chain(g.neighbors(x).iter().copied()).collect()
    }
}

fn check_bond(b: &Morphism, confluent: bool, what: &str) -> Result<()> {
    if confluent {
        return b.require_confluent_epi(what);
    }
    let surjective = b.full_image().len() == b.codomain().len();
    if !b.is_homomorphism() || !surjective {
        return Err(Error::pre(format!("{what}: map is not a surjective homomorphism")));
    }
    Ok(())
}

/// `α_n^m = α_n ∘ ⋯ ∘ α_{m−1}: F_m → F_n`; the identity when `n = m`.
pub fn compose_bonding(seq: &InverseSequence, n: usize, m: usize) -> Result<Morphism> {
    if n > m || m >= seq.len() {
        return Err(Error::pre(format!(
            "no bonding map from level {m} to level {n} in a sequence of {}",
            seq.len()
        )));
    }
    let mut acc = Morphism::identity(seq.levels[m].clone());
    for k in (n..m).rev() {
        acc = seq.bonds[k].compose(&acc)?;
    }
    Ok(acc)
}

fn check_factorisation(
    seq: &InverseSequence,
    n: usize,
    a: &Arc<Graph>,
    f: &[Vertex],
    m: usize,
    g: &[Vertex],
) -> Result<()> {
    let alpha = compose_bonding(seq, n, m)?;
    let f = Morphism::new(a.clone(), seq.levels[n].clone(), f.to_vec())?;
    let g = Morphism::new(seq.levels[m].clone(), a.clone(), g.to_vec())?;
    if f.compose(&g)?.map() != alpha.map() {
        return Err(Error::Invariant(format!(
            "f ∘ g differs from the bonding map {m} → {n}"
        )));
    }
    g.require_confluent_epi("factoring map")?;
    f.require_confluent_epi("task")?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BondSharpness {
    pub bond: usize,
    /// Both levels are chordless cycles.
    pub applicable: bool,
    pub sharp: bool,
    pub winding: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpReport {
    pub bonds: Vec<BondSharpness>,
    /// Every divisor of every composite winding number `α_n^m`, `n < m`.
    pub divisors: BTreeSet<usize>,
}

pub fn check_sharp(seq: &InverseSequence) -> SharpReport {
    let cyc: Vec<bool> = seq.levels.iter().map(|g| g.is_chordless_cycle()).collect();
    let bonds = seq
        .bonds
        .iter()
        .enumerate()
        .map(|(n, b)| {
            let applicable = cyc[n] && cyc[n + 1];
            BondSharpness {
                bond: n,
                applicable,
                sharp: applicable && has_fat_fibers(b),
                winding: if applicable { winding_number(b).ok() } else { None },
            }
        })
        .collect();
    let mut divisors = BTreeSet::new();
    for n in 0..seq.len() {
        for m in n + 1..seq.len() {
            if !(n..=m).all(|k| cyc[k]) {
                continue;
            }
            let Ok(w) = compose_bonding(seq, n, m).and_then(|a| winding_number(&a)) else {
                continue;
            };
            divisors.extend((1..=w).filter(|d| w % d == 0));
        }
    }
    SharpReport { bonds, divisors }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskStatus {
    Satisfied {
        at: usize,
        g: Vec<Vertex>,
        from_ledger: bool,
    },
    Unsatisfied,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskResult {
    pub level: usize,
    pub graph: Arc<Graph>,
    pub f: Vec<Vertex>,
    pub status: TaskStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FraisseReport {
    pub task_bound: usize,
    pub tasks: Vec<TaskResult>,
}

impl FraisseReport {
    pub fn satisfied(&self) -> usize {
        self.tasks
            .iter()
            .filter(|t| matches!(t.status, TaskStatus::Satisfied { .. }))
            .count()
    }

    pub fn all_satisfied_at(&self, level: usize) -> bool {
        self.tasks
            .iter()
            .filter(|t| t.level == level)
            .all(|t| matches!(t.status, TaskStatus::Satisfied { .. }))
    }
}

/// Every confluent epimorphism from a connected graph with at most
/// `task_bound` vertices onto level `n`.
pub fn demands_at(seq: &InverseSequence, n: usize, task_bound: usize) -> Result<Vec<Morphism>> {
    let target = &seq.levels[n];
    if target.len() > task_bound {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for a in connected_graphs_up_to(task_bound) {
        if a.len() < target.len() {
            continue;
        }
        out.extend(enumerate_confluent_epis(&Arc::new(a), target, DEFAULT_ENUM_BUDGET)?);
    }
    Ok(out)
}

/// Confluent epimorphism `g: F_m → A` with `f ∘ g = alpha`, by
/// backtracking over the fibers of `f`.
pub fn find_factor(f: &Morphism, alpha: &Morphism, budget: usize) -> Result<Option<Morphism>> {
    let dom = alpha.domain();
    let a = f.domain();
    let cands: Vec<Vec<Vertex>> = dom
        .vertices()
        .map(|v| f.fiber(alpha.apply(v)).into_iter().collect())
        .collect();
    // Breadth-first order so each vertex meets assigned neighbours early.
    let mut order = Vec::with_capacity(dom.len());
    let mut seen = vec![false; dom.len()];
    for s in dom.vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &w in dom.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; dom.len()];
    let mut nodes = 0usize;
    let mut found = None;
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        order: &[Vertex],
        cands: &[Vec<Vertex>],
        map: &mut Vec<Vertex>,
        dom: &Graph,
        a: &Arc<Graph>,
        nodes: &mut usize,
        budget: usize,
        found: &mut Option<Morphism>,
    ) -> Result<()> {
        if found.is_some() {
            return Ok(());
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::budget("factor search", budget, *nodes, 0));
        }
        if i == order.len() {
            let g = Morphism::new(Arc::new(dom.clone()), a.clone(), map.clone())?;
            if g.is_confluent_epi() {
                *found = Some(g);
            }
            return Ok(());
        }
        let v = order[i];
        for &c in &cands[v] {
            let ok = dom
                .neighbors(v)
                .iter()
                .all(|&u| map[u] == usize::MAX || a.related(map[u], c));
            if ok {
                map[v] = c;
                go(i + 1, order, cands, map, dom, a, nodes, budget, found)?;
                map[v] = usize::MAX;
            }
        }
        Ok(())
    }
    go(0, &order, &cands, &mut map, dom, a, &mut nodes, budget, &mut found)?;
    Ok(found.map(|g| Morphism::new(alpha.domain().clone(), a.clone(), g.map().to_vec()).expect("same map")))
}

/// Checks every task at every level, trying the ledger's certificates first
/// and then searching levels in increasing order.
pub fn verify_fraisse_prefix(seq: &InverseSequence, task_bound: usize, budget: usize) -> Result<FraisseReport> {
    let mut tasks = Vec::new();
    for n in 0..seq.len() {
        for f in demands_at(seq, n, task_bound)? {
            let from_ledger = seq
                .ledger
                .iter()
                .find(|e| e.level == n && *e.graph == **f.domain() && e.f == f.map());
            let status = if let Some(e) = from_ledger {
                check_factorisation(seq, n, f.domain(), f.map(), e.satisfied_at, &e.g)?;
                TaskStatus::Satisfied {
                    at: e.satisfied_at,
                    g: e.g.clone(),
                    from_ledger: true,
                }
            } else {
                let mut status = TaskStatus::Unsatisfied;
                for m in n..seq.len() {
                    let alpha = compose_bonding(seq, n, m)?;
                    match find_factor(&f, &alpha, budget) {
                        Ok(Some(g)) => {
                            check_factorisation(seq, n, f.domain(), f.map(), m, g.map())?;
                            status = TaskStatus::Satisfied {
                                at: m,
                                g: g.map().to_vec(),
                                from_ledger: false,
                            };
                            break;
                        }
                        Ok(None) => {}
                        Err(Error::BudgetExceeded { .. }) => status = TaskStatus::BudgetExceeded,
                        Err(e) => return Err(e),
                    }
                }
                status
            };
            tasks.push(TaskResult {
                level: n,
                graph: f.domain().clone(),
                f: f.map().to_vec(),
                status,
            });
        }
    }
    Ok(FraisseReport { task_bound, tasks })
}

/// Copy of `p` whose domain is `g`, a relabelled twin of `p`'s domain.
fn rebase(p: &Morphism, g: &Arc<Graph>) -> Morphism {
    Morphism::new(g.clone(), p.codomain().clone(), p.map().to_vec()).expect("same shape")
}

fn relabel(g: &Graph) -> Arc<Graph> {
    Arc::new(Graph::from_parts((0..g.len()).map(|i| format!("v{i}")).collect(), g.edges()).expect("same edges"))
}

/// Deterministic prefix builder seeded with a single edge.
///
/// Demands `f: A → F_n` (`|A| ≤ task_bound`) are queued in enumeration
/// order. Each new level amalgamates the oldest open demands one after
/// another against the current top, while the result stays within
/// [`LEVEL_VERTEX_CAP`]; demands already met by the prefix are recorded
/// without amalgamation.
pub fn build_fraisse_prefix(task_bound: usize, depth: usize) -> Result<InverseSequence> {
    if task_bound == 0 || depth == 0 {
        return Err(Error::pre("task bound and depth must be positive"));
    }
    let seed = Arc::new(Graph::path(2));
    let mut seq = InverseSequence::new(vec![seed], Vec::new())?;
    let mut queue: VecDeque<(usize, Morphism)> = demands_at(&seq, 0, task_bound)?.into_iter().map(|f| (0, f)).collect();
    let mut ledger = Vec::new();

    while seq.len() < depth {
        let top = seq.len() - 1;
        // Current candidate level: `d` with `down: d → F_top`.
        let mut d = seq.levels[top].clone();
        let mut down = Morphism::identity(d.clone());
        // Factor maps `d → A` for demands folded into this level.
        let mut pending: Vec<(usize, Morphism, Morphism)> = Vec::new();
        while let Some((n, f)) = queue.front().cloned() {
            let alpha = compose_bonding(&seq, n, top)?.compose(&down)?;
            if let Ok(Some(g)) = find_factor(&f, &alpha, 200_000) {
                queue.pop_front();
                pending.push((n, f, g));
                continue;
            }
            let am = connected_amalgam(&f, &alpha, None)?;
            let r = am.result;
            if r.d.len() > LEVEL_VERTEX_CAP && !pending.is_empty() {
                break;
            }
            queue.pop_front();
            for p in &mut pending {
                p.2 = p.2.compose(&r.g0)?;
            }
            down = down.compose(&r.g0)?;
            d = r.d.clone();
            pending.push((n, f, r.f0));
        }
        let level = relabel(&d);
        let bond = rebase(&down, &level);
        seq.push(level.clone(), bond)?;
        let m = seq.len() - 1;
        for (n, f, g) in pending {
            ledger.push(LedgerEntry {
                level: n,
                graph: f.domain().clone(),
                f: f.map().to_vec(),
                satisfied_at: m,
                g: g.map().to_vec(),
            });
        }
        queue.extend(demands_at(&seq, m, task_bound)?.into_iter().map(|f| (m, f)));
    }
    // Demands already met by the finished prefix are certified as well.
    while let Some((n, f)) = queue.pop_front() {
        for m in n..seq.len() {
            let alpha = compose_bonding(&seq, n, m)?;
            if let Ok(Some(g)) = find_factor(&f, &alpha, 200_000) {
                ledger.push(LedgerEntry {
                    level: n,
                    graph: f.domain().clone(),
                    f: f.map().to_vec(),
                    satisfied_at: m,
                    g: g.map().to_vec(),
                });
                break;
            }
        }
    }
    seq.set_ledger(ledger)?;
    seq.thread = Some(seq.thread_from_top(0));
    Ok(seq)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberEntry {
    pub vertex: Vertex,
    pub components: Vec<VertexSet>,
    pub sizes: Vec<usize>,
    /// Largest thread distance between two points of the fiber at level `m`.
    pub diameter: f64,
}

/// Fibers of `α_n^m` over each vertex of level `n`.
pub fn thread_fibers(seq: &InverseSequence, n: usize, m: usize) -> Result<Vec<FiberEntry>> {
    if n >= m {
        return Err(Error::pre("thread fibers need n < m"));
    }
    let alpha = compose_bonding(seq, n, m)?;
    let downs: Vec<Morphism> = (0..=m).map(|k| compose_bonding(seq, k, m)).collect::<Result<_>>()?;
    let dom = &seq.levels[m];
    let mut out = Vec::new();
    for v in seq.levels[n].vertices() {
        let fiber = alpha.fiber(v);
        let components = dom.components(&fiber);
        let sizes = components.iter().map(|c| c.len()).collect();
        let pts: Vec<Vertex> = fiber.into_iter().collect();
        let mut diameter: f64 = 0.0;
        for (i, &x) in pts.iter().enumerate() {
            for &y in &pts[i + 1..] {
                let k = (0..=m)
                    .find(|&k| downs[k].apply(x) != downs[k].apply(y))
                    .expect("distinct at level m");
                diameter = diameter.max(THREAD_METRIC_BASE.powi(-(k as i32)));
            }
        }
        out.push(FiberEntry {
            vertex: v,
            components,
            sizes,
            diameter,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolenoidBond {
    pub bond: usize,
    pub witness: bool,
    pub winding: Option<usize>,
    pub violation: Option<SwapViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolenoidReport {
    pub cycles: bool,
    pub bonds: Vec<SolenoidBond>,
    /// Orientation chosen for each level.
    pub orientations: Vec<Vec<Vertex>>,
    pub winding_over_one: usize,
    /// `⌈#bonds / 2⌉`, the finite stand-in for "infinitely many".
    pub required: usize,
    pub holds: bool,
}

/// Every level a cycle, every bond almost wrapping with a proper witness,
/// and at least half the bonds (rounded up) of winding above one.
///
/// Level 0 takes its canonical orientation; each later level takes the
/// canonical one or its reverse, whichever admits a proper witness.
pub fn is_almost_graph_solenoid_prefix(seq: &InverseSequence) -> Result<SolenoidReport> {
    let required = seq.bonds.len().div_ceil(2);
    if !seq.levels.iter().all(|g| g.is_chordless_cycle()) {
        return Ok(SolenoidReport {
            cycles: false,
            bonds: Vec::new(),
            orientations: Vec::new(),
            winding_over_one: 0,
            required,
            holds: false,
        });
    }
    let mut cod = OrientedCycle::canonical(seq.levels[0].clone())?;
    let mut orientations = vec![cod.order().to_vec()];
    let mut bonds = Vec::new();
    for (n, b) in seq.bonds.iter().enumerate() {
        let canon = OrientedCycle::canonical(seq.levels[n + 1].clone())?;
        let mut chosen = None;
        for dom in [canon.clone(), canon.reversed()] {
            if let Some(p) = WitnessPair::find(dom.clone(), cod.clone(), b.clone(), true)? {
                chosen = Some((dom, p));
                break;
            }
        }
        let (dom, entry) = match chosen {
            Some((dom, p)) => (
                dom,
                SolenoidBond {
                    bond: n,
                    witness: true,
                    winding: Some(p.winding_number()?),
                    violation: None,
                },
            ),
            None => (
                canon.clone(),
                SolenoidBond {
                    bond: n,
                    witness: false,
                    winding: None,
                    violation: swap_violation(b, &canon, &cod)?,
                },
            ),
        };
        bonds.push(entry);
        orientations.push(dom.order().to_vec());
        cod = dom;
    }
    let winding_over_one = bonds.iter().filter(|b| b.winding.is_some_and(|w| w > 1)).count();
    let holds = bonds.iter().all(|b| b.witness) && winding_over_one >= required;
    Ok(SolenoidReport {
        cycles: true,
        bonds,
        orientations,
        winding_over_one,
        required,
        holds,
    })
}

/// One checked pair `(m, n)` of the unfolding tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerCheck {
    pub m: usize,
    pub n: usize,
    pub component: VertexSet,
    pub disconnecting: bool,
}

#[derive(Debug, Clone)]
pub struct UnfoldingTower {
    pub sequence: InverseSequence,
    /// `{x_n}` is adjacently disconnecting in each level.
    pub point_checks: Vec<bool>,
    pub component_checks: Vec<TowerCheck>,
}

impl UnfoldingTower {
    pub fn all_hold(&self) -> bool {
        self.point_checks.iter().all(|&b| b) && self.component_checks.iter().all(|c| c.disconnecting)
    }
}

/// Largest level the unfolding tower will build.
pub const TOWER_VERTEX_CAP: usize = 20_000;

/// Tower `K_0 ← K_1 ← …` of unfoldings, starting from the unfolding of `f`
/// over the chain `({z}, V(f))`.
///
/// Each step subdivides every edge at the thread point `x_N` of `K_N`,
/// collapses the new vertices back onto `x_N`, and unfolds the subdivided
/// graph along the components of the preimages of the stars of earlier
/// thread points, which contain `x_N`.
pub fn unfolding_tower(f: &Arc<Graph>, z: Vertex, steps: usize) -> Result<UnfoldingTower> {
    if z >= f.len() {
        return Err(Error::UnknownVertex(z.to_string()));
    }
    if f.len() < 2 || !f.is_connected() {
        return Err(Error::pre(
            "unfolding tower needs a connected graph with at least two vertices",
        ));
    }
    let first = unfold(f, &[VertexSet::from([z]), f.all()])?;
    let mut seq = InverseSequence::new(vec![first.graph.clone()], Vec::new())?;
    let mut thread = vec![*first.base.iter().next().expect("single base vertex")];
    for _ in 0..steps {
        let top = seq.len() - 1;
        let k = seq.levels[top].clone();
        let x = thread[top];
        // Subdivide every edge at x.
        let mut names = k.names().to_vec();
        let mut map: Vec<Vertex> = k.vertices().collect();
        let mut edges: Vec<(Vertex, Vertex)> = k.edges().filter(|&(u, v)| u != x && v != x).collect();
        for &y in k.neighbors(x) {
            let s = names.len();
            names.push(format!("{}'", k.name(y)));
            map.push(x);
            edges.push((x, s));
            edges.push((s, y));
        }
        let g = Arc::new(Graph::from_parts(relabel_names(names.len()), edges)?);
        let fx = Morphism::new(g.clone(), k.clone(), map)?;
        let mut chain = vec![VertexSet::from([x])];
        for i in 0..=top {
            let level = top - i;
            let p = compose_bonding(&seq, level, top)?.compose(&fx)?;
            let pre = p.preimage(&seq.star(level, thread[level]));
            let comp = g.component_of(&pre, x);
            if comp != *chain.last().expect("nonempty") {
                chain.push(comp);
            }
        }
        if *chain.last().expect("nonempty") != g.all() {
            chain.push(g.all());
        }
        let u = unfold_capped(&g, &chain, TOWER_VERTEX_CAP)?;
        let next = relabel(&u.graph);
        let bond = rebase(&fx.compose(&u.map)?, &next);
        let base = *u.base.iter().next().expect("single base vertex");
        seq.push(next, bond)?;
        thread.push(base);
    }
    seq.set_thread(thread.clone())?;
    let mut point_checks = Vec::new();
    let mut component_checks = Vec::new();
    for n in 0..seq.len() {
        let lvl = &seq.levels[n];
        point_checks.push(lvl.is_adjacently_disconnecting(&VertexSet::from([thread[n]]))?);
        for m in 0..n {
            let beta = compose_bonding(&seq, m, n)?;
            let comp = lvl.component_of(&beta.preimage(&seq.star(m, thread[m])), thread[n]);
            let disconnecting = lvl.is_adjacently_disconnecting(&comp)?;
            component_checks.push(TowerCheck {
                m,
                n,
                component: comp,
                disconnecting,
            });
        }
    }
    Ok(UnfoldingTower {
        sequence: seq,
        point_checks,
        component_checks,
    })
}

fn relabel_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_cover(n: usize) -> Morphism {
        Morphism::new(
            Arc::new(Graph::cycle(2 * n)),
            Arc::new(Graph::cycle(n)),
            (0..2 * n).map(|i| i % n).collect(),
        )
        .unwrap()
    }

    #[test]
    fn compose_identity_bonds() {
        let g = Arc::new(Graph::path(3));
        let id = Morphism::identity(g.clone());
        let seq = InverseSequence::new(vec![g.clone(), g.clone(), g.clone()], vec![id.clone(), id.clone()]).unwrap();
        assert_eq!(compose_bonding(&seq, 0, 2).unwrap().map(), id.map());
        assert_eq!(compose_bonding(&seq, 1, 2).unwrap(), seq.bonds()[1]);
        assert!(compose_bonding(&seq, 2, 1).is_err());
        let fibers = thread_fibers(&seq, 0, 2).unwrap();
        assert!(fibers.iter().all(|e| e.sizes == vec![1] && e.diameter == 0.0));
    }

    #[test]
    fn bonds_are_validated() {
        let g = Arc::new(Graph::path(2));
        let c = Morphism::constant(g.clone(), g.clone(), 0);
        assert!(InverseSequence::new(vec![g.clone(), g], vec![c]).is_err());
    }

    #[test]
    fn double_covers_compose_to_four() {
        let seq = InverseSequence::new(
            vec![
                Arc::new(Graph::cycle(3)),
                Arc::new(Graph::cycle(6)),
                Arc::new(Graph::cycle(12)),
            ],
            vec![double_cover(3), double_cover(6)],
        )
        .unwrap();
        assert_eq!(winding_number(&compose_bonding(&seq, 0, 2).unwrap()).unwrap(), 4);
        let r = check_sharp(&seq);
        assert!(r.bonds.iter().all(|b| b.applicable && !b.sharp && b.winding == Some(2)));
        assert_eq!(r.divisors, BTreeSet::from([1, 2, 4]));
        let fibers = thread_fibers(&seq, 0, 2).unwrap();
        assert!(fibers.iter().all(|e| e.sizes.iter().sum::<usize>() == 4));
    }

    #[test]
    fn point_tasks() {
        let seq = InverseSequence::point();
        let r = verify_fraisse_prefix(&seq, 1, 1000).unwrap();
        assert_eq!(r.tasks.len(), 1);
        assert_eq!(r.satisfied(), 1);
    }

    #[test]
    fn depth_one_is_the_seed() {
        let seq = build_fraisse_prefix(3, 1).unwrap();
        assert_eq!(seq.len(), 1);
        assert_eq!(seq.level(0).edge_count(), 1);
    }
}
