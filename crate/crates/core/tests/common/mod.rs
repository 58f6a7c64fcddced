#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use fraisse_core::{Graph, Morphism, VertexSet};

pub fn graph(vs: &[&str], es: &[(&str, &str)]) -> Arc<Graph> {
    Arc::new(Graph::new(vs.iter().copied(), es.iter().copied()).unwrap())
}

pub fn set(g: &Graph, toks: &[&str]) -> VertexSet {
    g.resolve(toks.iter().copied()).unwrap()
}

/// The triod example: `g` over the triod `h`, and the six-cycle `k` inside `g`.
pub struct Triod {
    pub g: Arc<Graph>,
    pub h: Arc<Graph>,
    pub k: Arc<Graph>,
    pub f: Morphism,
    pub fk: Morphism,
}

pub fn triod() -> Triod {
    let kv = ["a1", "c1", "a2", "d1", "a3", "b1"];
    let ke = [
        ("a1", "c1"),
        ("c1", "a2"),
        ("a2", "d1"),
        ("d1", "a3"),
        ("a3", "b1"),
        ("b1", "a1"),
    ];
    let k = graph(&kv, &ke);
    let mut gv = kv.to_vec();
    gv.extend(["b2", "c2", "d2"]);
    let mut ge = ke.to_vec();
    ge.extend([
        ("b2", "a2"),
        ("b2", "b1"),
        ("c2", "a3"),
        ("c2", "c1"),
        ("d2", "a1"),
        ("d2", "d1"),
    ]);
    let g = graph(&gv, &ge);
    let h = graph(&["A", "B", "C", "D"], &[("A", "B"), ("A", "C"), ("A", "D")]);
    let image = |t: &str| t[..1].to_uppercase();
    let pairs = |gr: &Graph| -> Vec<(String, String)> { gr.names().iter().map(|t| (t.clone(), image(t))).collect() };
    let f = Morphism::from_pairs(g.clone(), h.clone(), &pairs(&g)).unwrap();
    let fk = Morphism::from_pairs(k.clone(), h.clone(), &pairs(&k)).unwrap();
    Triod { g, h, k, f, fk }
}

/// Components of `s` by repeated merging of adjacent blocks.
pub fn oracle_components(g: &Graph, s: &VertexSet) -> BTreeSet<VertexSet> {
    let mut blocks: Vec<VertexSet> = s.iter().map(|&v| VertexSet::from([v])).collect();
    loop {
        let mut merged = false;
        'scan: for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if blocks[i].iter().any(|&x| blocks[j].iter().any(|&y| g.adjacent(x, y))) {
                    let b = blocks.remove(j);
                    blocks[i].extend(b);
                    merged = true;
                    break 'scan;
                }
            }
        }
        if !merged {
            return blocks.into_iter().collect();
        }
    }
}

pub fn oracle_connected(g: &Graph, s: &VertexSet) -> bool {
    !s.is_empty() && oracle_components(g, s).len() == 1
}

/// All nonempty vertex subsets as bitmasks.
pub fn subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (1u32..(1 << n)).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

/// Homomorphism, surjective on vertices and edges, and every component of
/// the preimage of every connected set maps onto it.
pub fn oracle_confluent(f: &Morphism) -> bool {
    let (g, h) = (f.domain(), f.codomain());
    let homo = g.edges().all(|(u, v)| h.related(f.apply(u), f.apply(v)));
    let onto_v = h.vertices().all(|t| g.vertices().any(|v| f.apply(v) == t));
    let onto_e = h.edges().all(|(a, b)| {
        g.edges()
            .any(|(u, v)| (f.apply(u), f.apply(v)) == (a, b) || (f.apply(v), f.apply(u)) == (a, b))
    });
    if !(homo && onto_v && onto_e) {
        return false;
    }
    subsets(h.len()).filter(|q| oracle_connected(h, q)).all(|q| {
        let pre: VertexSet = g.vertices().filter(|&v| q.contains(&f.apply(v))).collect();
        oracle_components(g, &pre)
            .iter()
            .all(|c| c.iter().map(|&v| f.apply(v)).collect::<VertexSet>() == q)
    })
}

/// Every vertex map `g → h`, in lexicographic order.
pub fn all_maps(g: &Arc<Graph>, h: &Arc<Graph>) -> Vec<Morphism> {
    let n = g.len();
    let k = h.len();
    let total = k.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut map = vec![0; n];
            for slot in map.iter_mut().rev() {
                *slot = code % k;
                code /= k;
            }
            Morphism::new(g.clone(), h.clone(), map).unwrap()
        })
        .collect()
}
