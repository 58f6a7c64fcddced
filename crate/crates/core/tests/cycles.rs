use std::sync::Arc;

use fraisse_core::cycles::*;
use fraisse_core::{Graph, Morphism, OrientedCycle, VertexSet, WitnessPair};

fn oriented(n: usize) -> OrientedCycle {
    OrientedCycle::canonical(Arc::new(Graph::cycle(n))).unwrap()
}

fn cycle_map(n: usize, k: usize, map: impl Fn(usize) -> usize) -> Morphism {
    Morphism::new(
        Arc::new(Graph::cycle(n)),
        Arc::new(Graph::cycle(k)),
        (0..n).map(map).collect(),
    )
    .unwrap()
}

#[test]
fn winding_examples() {
    assert_eq!(
        winding_number(&Morphism::identity(Arc::new(Graph::cycle(5)))).unwrap(),
        1
    );
    assert_eq!(winding_number(&cycle_map(6, 3, |i| i % 3)).unwrap(), 2);
    assert!(winding_number(&Morphism::identity(Arc::new(Graph::path(3)))).is_err());
}

#[test]
fn oriented_arcs() {
    let c = oriented(4);
    assert_eq!(c.oriented_arc(1, 1).unwrap(), VertexSet::from([1]));
    assert_eq!(c.oriented_arc(0, 2).unwrap(), VertexSet::from([0, 1, 2]));
    assert_eq!(c.oriented_arc(2, 0).unwrap(), VertexSet::from([2, 3, 0]));
    assert!(c.oriented_arc(0, 3).is_err());
}

#[test]
fn confluent_maps_are_their_own_witness() {
    let w = cycle_map(6, 3, |i| i % 3);
    let (d, c) = (oriented(6), oriented(3));
    assert!(is_almost_wrapping(&w, &d, &c).unwrap());
    let f = find_confluent_witness(&w, &d, &c, false).unwrap().unwrap();
    assert_eq!(f.map(), w.map());
}

#[test]
fn shifted_double_cover() {
    // A double cover 8 → 4 with fibers of two, one vertex pushed ahead.
    let w = cycle_map(8, 4, |i| [0, 0, 1, 2, 2, 2, 3, 3][i]);
    assert!(w.classify().homomorphism);
    let (d, c) = (oriented(8), oriented(4));
    assert!(is_almost_wrapping(&w, &d, &c).unwrap());
    let p = WitnessPair::find(d.clone(), c.clone(), w.clone(), false)
        .unwrap()
        .unwrap();
    p.validate().unwrap();

    let back = cycle_map(8, 4, |i| [0, 1, 0, 1, 2, 2, 3, 3][i]);
    assert!(!back.is_confluent_epi());
    assert!(is_almost_wrapping(&back, &d, &c).unwrap());
    let p = WitnessPair::find(d, c, back, false).unwrap().unwrap();
    p.validate().unwrap();
}

#[test]
fn backward_fold_has_no_witness() {
    let w = cycle_map(6, 4, |i| [0, 1, 2, 1, 0, 3][i]);
    let (d, c) = (oriented(6), oriented(4));
    let v = swap_violation(&w, &d, &c).unwrap().unwrap();
    assert!(!Graph::cycle(4).adjacent(v.x, v.z));
    assert_eq!(find_confluent_witness(&w, &d, &c, false).unwrap(), None);
}

/// Fibers of size two, wound `turns` times.
fn doubled(n: usize, k: usize, turns: usize) -> WitnessPair {
    assert_eq!(n, 2 * k * turns);
    let w = cycle_map(n, k, |i| (i / 2) % k);
    WitnessPair::find(oriented(n), oriented(k), w, true).unwrap().unwrap()
}

#[test]
fn composed_witnesses_stay_proper() {
    let g1 = doubled(6, 3, 1);
    let g2 = doubled(12, 6, 1);
    let c = compose_witness(&g1, &g2).unwrap();
    c.validate().unwrap();
    assert!(c.is_proper());
    assert_eq!(c.winding_number().unwrap(), 1);
    assert!(find_confluent_witness(&c.w, &c.domain, &c.codomain, true)
        .unwrap()
        .is_some());

    let g1 = doubled(12, 3, 2);
    let g2 = doubled(48, 12, 2);
    let c = compose_witness(&g1, &g2).unwrap();
    c.validate().unwrap();
    assert!(c.is_proper());
    assert_eq!(c.winding_number().unwrap(), 4);
}

#[test]
fn compose_rejects_improper_inputs() {
    let plain = WitnessPair::find(oriented(6), oriented(3), cycle_map(6, 3, |i| i % 3), false)
        .unwrap()
        .unwrap();
    assert!(!plain.is_proper());
    assert!(compose_witness(&plain, &plain).is_err());
}

#[test]
fn cycle_amalgam_sizes() {
    let id = Morphism::identity(Arc::new(Graph::cycle(3)));
    let r = cycle_amalgam(&id, &id).unwrap();
    assert_eq!(r.result.d.len(), 3);

    let f = cycle_map(6, 3, |i| i % 3);
    let r = cycle_amalgam(&f, &f).unwrap();
    assert_eq!((r.block, r.winding_f, r.winding_g), (1, 2, 2));
    assert_eq!(r.result.d.len(), 12);
    r.result.check(&f, &f).unwrap();
    for x in r.result.d.vertices() {
        assert_eq!(f.apply(r.result.f0.apply(x)), f.apply(r.result.g0.apply(x)));
    }
    let w0 = winding_number(&r.result.f0).unwrap();
    assert_eq!(winding_number(&f.compose(&r.result.f0).unwrap()).unwrap(), 2 * w0);
}

#[test]
fn cycle_amalgam_with_fat_fibers() {
    let f = cycle_map(6, 3, |i| i / 2);
    let g = cycle_map(6, 3, |i| i % 3);
    let r = cycle_amalgam(&f, &g).unwrap();
    let (block, wf, wg, k) = (2, 1, 2, 3);
    assert_eq!(r.result.d.len(), block * wf * wg * k);
    r.result.check(&f, &g).unwrap();
}

#[test]
fn adjacent_sides_of_fiber_components_differ() {
    for (n, k) in [(6, 3), (8, 4), (9, 3), (8, 3)] {
        let (dg, cg) = (Arc::new(Graph::cycle(n)), Arc::new(Graph::cycle(k)));
        for f in fraisse_core::morphism::enumerate_confluent_epis(&dg, &cg, 5_000_000).unwrap() {
            for a in cg.vertices() {
                for comp in dg.components(&f.fiber(a)) {
                    let outside: Vec<usize> = comp
                        .iter()
                        .flat_map(|&v| dg.neighbors(v).iter().copied())
                        .filter(|v| !comp.contains(v))
                        .collect();
                    if let [x, y] = outside[..] {
                        assert_ne!(f.apply(x), f.apply(y));
                    }
                }
            }
        }
    }
}
