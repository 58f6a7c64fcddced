//! Brute-force canonical labelling and enumeration of small connected graphs.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::graph::{Graph, Vertex};

/// Largest vertex count accepted by the permutation search.
pub const CANON_LIMIT: usize = 8;

/// Adjacency bits over pairs `(i, j)`, `i < j`, in lexicographic order, the
/// first pair being the most significant bit.
fn code_under(g: &Graph, perm: &[Vertex]) -> u64 {
    let n = perm.len();
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            code = (code << 1) | u64::from(g.adjacent(perm[i], perm[j]));
        }
    }
    code
}

/// Least adjacency code over all relabellings and a permutation achieving
/// it (`perm[i]` is the vertex placed at position `i`).
pub fn canonical_code(g: &Graph) -> (u64, Vec<Vertex>) {
    let n = g.len();
    assert!(
        n <= CANON_LIMIT,
        "canonical labelling is limited to {CANON_LIMIT} vertices"
    );
    let mut perm: Vec<Vertex> = (0..n).collect();
    let mut best = (code_under(g, &perm), perm.clone());
    // Heap's algorithm.
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let code = code_under(g, &perm);
            if code < best.0 {
                best = (code, perm.clone());
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.len() == b.len() && a.edge_count() == b.edge_count() && canonical_code(a).0 == canonical_code(b).0
}

/// The graph on `v0 … v{n-1}` whose identity code is `code`.
fn from_code(n: usize, code: u64) -> Graph {
    let pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let m = pairs.len();
    let edges = pairs
        .iter()
        .enumerate()
        .filter(|(t, _)| code >> (m - 1 - t) & 1 == 1)
        .map(|(_, &p)| p);
    Graph::from_parts((0..n).map(|i| format!("v{i}")).collect(), edges).expect("valid pairs")
}

/// Connected graphs on exactly `n` vertices, one per isomorphism class, each
/// in its canonical labelling, ordered by edge count then code.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<Graph>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&n) {
        return v.clone();
    }
    let out = compute_connected(n);
    cache.lock().expect("cache lock").insert(n, out.clone());
    out
}

/// Every connected graph has a vertex whose removal leaves it connected, so
/// each class arises from a smaller class plus one vertex.
fn compute_connected(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    assert!(n <= 7, "graph enumeration is limited to 7 vertices");
    if n == 1 {
        return vec![from_code(1, 0)];
    }
    let mut found: BTreeSet<(u32, u64)> = BTreeSet::new();
    for base in connected_graphs(n - 1) {
        for nbrs in 1u64..(1 << (n - 1)) {
            let edges = base
                .edges()
                .chain((0..n - 1).filter(|&v| nbrs >> v & 1 == 1).map(|v| (v, n - 1)));
            let g = Graph::from_parts((0..n).map(|i| format!("v{i}")).collect(), edges).expect("valid edges");
            let code = canonical_code(&g).0;
            found.insert((code.count_ones(), code));
        }
    }
    found.into_iter().map(|(_, code)| from_code(n, code)).collect()
}

/// Connected graphs with `1..=max` vertices, smallest first.
pub fn connected_graphs_up_to(max: usize) -> Vec<Graph> {
    (1..=max).flat_map(connected_graphs).collect()
}
