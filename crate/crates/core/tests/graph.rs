mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use fraisse_core::canon::connected_graphs_up_to;
use fraisse_core::{CycleDivision, Graph, VertexSet};

#[test]
fn components_of_path_ends() {
    let p = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
    let comps: BTreeSet<VertexSet> = p.components(&set(&p, &["a", "c"])).into_iter().collect();
    assert_eq!(comps, BTreeSet::from([set(&p, &["a"]), set(&p, &["c"])]));
    assert_eq!(p.components(&p.all()), vec![p.all()]);
}

#[test]
fn triod_preimage_is_one_block() {
    let t = triod();
    let s = set(&t.g, &["a1", "a2", "a3", "b1", "b2"]);
    let comps: BTreeSet<VertexSet> = t.g.components(&s).into_iter().collect();
    assert_eq!(comps, oracle_components(&t.g, &s));
    assert_eq!(comps.len(), 1);
}

#[test]
fn components_match_oracle_on_small_graphs() {
    for g in connected_graphs_up_to(5) {
        for s in subsets(g.len()) {
            let ours: BTreeSet<VertexSet> = g.components(&s).into_iter().collect();
            assert_eq!(ours, oracle_components(&g, &s));
        }
    }
}

#[test]
fn arcs() {
    let p = Arc::new(Graph::path(4));
    assert_eq!(p.arc_ends(&VertexSet::from([2])), Some(vec![2]));
    assert_eq!(p.arc_ends(&p.all()), Some(vec![0, 3]));
    let c = Graph::cycle(4);
    assert!(!c.is_arc(&c.all()));
    // Oracle: every removal leaves the 4-cycle connected.
    assert!(c.vertices().all(|v| {
        let mut s = c.all();
        s.remove(&v);
        oracle_connected(&c, &s)
    }));
}

#[test]
fn induced_cycles_examples() {
    let tree = graph(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("a", "d")]);
    assert!(tree.induced_cycles(3).is_empty());
    assert_eq!(Graph::cycle(4).induced_cycles(3).len(), 1);
    let t = triod();
    let six = t.k.induced_cycles(3);
    assert_eq!(six.len(), 1);
    assert_eq!(six[0].len(), 6);
}

#[test]
fn induced_cycles_are_chordless() {
    for g in connected_graphs_up_to(6) {
        for c in g.induced_cycles(3) {
            let seq = c.ambient_order(&g).unwrap();
            let n = seq.len();
            for i in 0..n {
                for j in i + 1..n {
                    let consecutive = j == i + 1 || (i == 0 && j == n - 1);
                    assert_eq!(g.adjacent(seq[i], seq[j]), consecutive);
                }
            }
        }
    }
}

#[test]
fn square_division() {
    let c = Graph::cycle(4);
    let d = c.find_cycle_division(16).unwrap().unwrap();
    assert!(d.is_valid(&c));
    let given = CycleDivision {
        h: VertexSet::from([0, 1, 2]),
        k: VertexSet::from([2, 3, 0]),
        c: VertexSet::from([0]),
        d: VertexSet::from([2]),
    };
    assert!(given.is_valid(&c));
    assert!(triod().g.find_cycle_division(16).unwrap().is_some());
}

#[test]
fn unicoherence_examples() {
    assert!(Graph::path(5).is_hereditarily_unicoherent(16).unwrap());
    assert!(Graph::cycle(3).is_hereditarily_unicoherent(16).unwrap());
    assert!(!Graph::cycle(5).is_hereditarily_unicoherent(16).unwrap());
}

/// Some two connected sets have a disconnected intersection.
fn oracle_has_division(g: &Graph) -> bool {
    let conn: Vec<VertexSet> = subsets(g.len()).filter(|s| oracle_connected(g, s)).collect();
    conn.iter().any(|h| {
        conn.iter().any(|k| {
            let i: VertexSet = h.intersection(k).copied().collect();
            !i.is_empty() && !oracle_connected(g, &i)
        })
    })
}

#[test]
fn unicoherence_matches_oracle() {
    for g in connected_graphs_up_to(6) {
        assert_eq!(
            g.is_hereditarily_unicoherent(16).unwrap(),
            !oracle_has_division(&g),
            "{g:?}"
        );
    }
}

/// Two outside vertices adjacent to `t` joined by a path avoiding `t`.
fn oracle_not_disconnecting(g: &Graph, t: &VertexSet) -> bool {
    let touching: Vec<usize> = g
        .vertices()
        .filter(|v| !t.contains(v) && g.neighbors(*v).iter().any(|w| t.contains(w)))
        .collect();
    touching.iter().enumerate().any(|(i, &x)| {
        touching[i + 1..].iter().any(|&y| {
            let mut seen = VertexSet::from([x]);
            let mut stack = vec![x];
            while let Some(v) = stack.pop() {
                for &w in g.neighbors(v) {
                    if !t.contains(&w) && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            seen.contains(&y)
        })
    })
}

#[test]
fn adjacently_disconnecting_examples() {
    let p = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
    assert!(p.is_adjacently_disconnecting(&set(&p, &["b"])).unwrap());
    assert!(!Graph::cycle(4)
        .is_adjacently_disconnecting(&VertexSet::from([0]))
        .unwrap());
    assert!(p.is_adjacently_disconnecting(&VertexSet::new()).is_err());
}

#[test]
fn adjacently_disconnecting_matches_oracle() {
    for g in connected_graphs_up_to(6) {
        for t in subsets(g.len()).filter(|t| oracle_connected(&g, t)) {
            assert_eq!(
                g.is_adjacently_disconnecting(&t).unwrap(),
                !oracle_not_disconnecting(&g, &t)
            );
        }
    }
}

#[test]
fn rejects_bad_input() {
    assert!(Graph::new(["a", "a"], Vec::<(&str, &str)>::new()).is_err());
    assert!(Graph::new(["a"], [("a", "b")]).is_err());
    assert!(Graph::path(20).find_cycle_division(16).is_err());
}

#[test]
fn dot_lists_edges() {
    let dot = Graph::path(3).to_dot("p");
    assert!(dot.starts_with("graph"));
    assert_eq!(dot.matches("--").count(), 2);
}
