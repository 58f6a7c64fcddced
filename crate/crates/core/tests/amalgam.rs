mod common;

use std::sync::Arc;

use fraisse_core::amalgam::{common_refinement, connected_amalgam, standard_amalgam, verify_amalgamation, AmalgamPath};
use fraisse_core::canon::is_isomorphic;
use fraisse_core::cycles::{cycle_amalgam, winding_number};
use fraisse_core::{Graph, Morphism};

fn double_cover() -> Morphism {
    Morphism::new(
        Arc::new(Graph::cycle(6)),
        Arc::new(Graph::cycle(3)),
        vec![0, 1, 2, 0, 1, 2],
    )
    .unwrap()
}

#[test]
fn standard_examples() {
    let pt = Arc::new(Graph::point("p"));
    let id = Morphism::identity(pt.clone());
    assert_eq!(standard_amalgam(&id, &id).unwrap().d.len(), 1);

    let e = Arc::new(Graph::path(2));
    let c = Morphism::constant(e.clone(), pt, 0);
    let fp = standard_amalgam(&c, &c).unwrap();
    assert_eq!(fp.d.len(), 4);
    assert_eq!(fp.d.edge_count(), 6);

    let a = Arc::new(Graph::path(4));
    let ida = Morphism::identity(a.clone());
    let diag = standard_amalgam(&ida, &ida).unwrap();
    assert!(is_isomorphic(&diag.d, &a));
}

#[test]
fn standard_projections_are_epis() {
    let f = double_cover();
    let fp = standard_amalgam(&f, &f).unwrap();
    assert!(fp.f0.classify().epimorphism && fp.g0.classify().epimorphism);
    for x in fp.d.vertices() {
        assert_eq!(f.apply(fp.f0.apply(x)), f.apply(fp.g0.apply(x)));
    }
}

#[test]
fn connected_examples() {
    let a = Arc::new(Graph::cycle(5));
    let id = Morphism::identity(a.clone());
    let r = connected_amalgam(&id, &id, None).unwrap();
    assert!(is_isomorphic(&r.result.d, &a));

    let pt = Arc::new(Graph::point("p"));
    let e = Arc::new(Graph::path(2));
    let c = Morphism::constant(e, pt, 0);
    let r = connected_amalgam(&c, &c, None).unwrap();
    assert_eq!(r.result.d.len(), 4);
    assert_eq!(r.path, AmalgamPath::Component(0));
    r.result.check(&c, &c).unwrap();
}

#[test]
fn connected_and_cycle_amalgams_agree_on_winding() {
    let f = double_cover();
    let r = connected_amalgam(&f, &f, None).unwrap();
    r.result.check(&f, &f).unwrap();
    assert!(r.result.d.is_chordless_cycle());
    // The least component is the diagonal hexagon.
    assert_eq!(r.result.d.len(), 6);
    let c = cycle_amalgam(&f, &f).unwrap();
    assert_eq!(c.result.d.len(), 12);
    for (res, w) in [(&r.result, 1), (&c.result, 2)] {
        for p in [&res.f0, &res.g0] {
            assert_eq!(winding_number(p).unwrap(), w);
            assert_eq!(winding_number(&f.compose(p).unwrap()).unwrap(), 2 * w);
        }
    }
}

#[test]
fn refinements() {
    let pt = Arc::new(Graph::point("p"));
    assert_eq!(common_refinement(&pt, &pt).unwrap().result.d.len(), 1);
    for (b, c) in [(Graph::path(2), Graph::cycle(3)), (Graph::path(3), Graph::path(3))] {
        let r = common_refinement(&Arc::new(b), &Arc::new(c)).unwrap();
        assert!(r.result.f0.is_confluent_epi() && r.result.g0.is_confluent_epi());
        assert!(r.result.d.is_connected());
    }
}

#[test]
fn small_verification_runs() {
    let r = verify_amalgamation(1, None).unwrap();
    assert!(r.all_passed() && r.total == 1);
    let r = verify_amalgamation(2, None).unwrap();
    assert!(r.all_passed());
    let again = verify_amalgamation(2, None).unwrap();
    assert_eq!(r.checked, again.checked);
}

#[test]
fn amalgamation_is_deterministic() {
    let f = double_cover();
    let a = connected_amalgam(&f, &f, None).unwrap();
    let b = connected_amalgam(&f, &f, None).unwrap();
    assert_eq!(a.result, b.result);
}
