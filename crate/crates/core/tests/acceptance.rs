//! Acceptance suite: one PASS/FAIL line per criterion. Every comparison is
//! exact (tolerance 0); sampling uses the fixed seed below.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use fraisse_core::amalgam::verify_amalgamation;
use fraisse_core::canon::{connected_graphs, connected_graphs_up_to};
use fraisse_core::constructions::*;
use fraisse_core::cycles::*;
use fraisse_core::doc::{to_json, SequenceDoc};
use fraisse_core::morphism::{
    confluent_by_definition, enumerate_epis, for_each_homomorphism, lift_cycle, DEFAULT_ENUM_BUDGET,
};
use fraisse_core::sequence::*;
use fraisse_core::{CycleDivision, Graph, InverseSequence, Morphism, OrientedCycle, VertexSet, WitnessPair};

const SAMPLE_SEED: u64 = 20_240_601;
const SAMPLE_COUNT: usize = 500;

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
    /// Expected failure: the stated property is false on these instances.
    known_gap: bool,
}

type Criterion = fn() -> Vec<Check>;

fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        ok,
        detail: detail.into(),
        known_gap: false,
    }
}

fn epis_between_small_graphs(max: usize) -> Vec<Morphism> {
    let graphs: Vec<Arc<Graph>> = connected_graphs_up_to(max).into_iter().map(Arc::new).collect();
    let mut out = Vec::new();
    for g in &graphs {
        for h in graphs.iter().filter(|h| h.len() <= g.len()) {
            out.extend(enumerate_epis(g, h, DEFAULT_ENUM_BUDGET).unwrap());
        }
    }
    out
}

fn criterion_1() -> Vec<Check> {
    let t = triod();
    let c = t.f.classify();
    let ck = t.fk.classify();
    let w = ck.witness.clone();
    let a = t.h.vertex("A").unwrap();
    let b = t.h.vertex("B").unwrap();
    let a2 = set(&t.k, &["a2"]);
    vec![
        check("f confluent", c.confluent, format!("{c:?}")),
        check("f|K not confluent", ck.epimorphism && !ck.confluent, ""),
        check(
            "witness {a2} over <A,B>",
            w.as_ref().is_some_and(|w| w.edge == (a, b) && w.component == a2),
            format!("{w:?}"),
        ),
    ]
}

fn criterion_2() -> Vec<Check> {
    let epis = epis_between_small_graphs(5);
    let mismatches = epis
        .iter()
        .filter(|f| f.classify().confluent != confluent_by_definition(f).unwrap())
        .count();
    vec![check(
        "edge criterion == definition",
        mismatches == 0,
        format!("{} epimorphisms, {mismatches} mismatches", epis.len()),
    )]
}

fn criterion_3() -> Vec<Check> {
    let epis = epis_between_small_graphs(5);
    let bad_monotone = epis.iter().filter(|f| {
        let c = f.classify();
        c.monotone && !c.confluent
    });
    let bad_monotone = bad_monotone.count();

    let graphs: Vec<Arc<Graph>> = connected_graphs_up_to(4).into_iter().map(Arc::new).collect();
    let mut compositions = 0usize;
    let mut bad_composition = 0usize;
    let mut threemaps = 0usize;
    let mut bad_threemaps = 0usize;
    for g in &graphs {
        for h in graphs.iter().filter(|h| h.len() <= g.len()) {
            let fs = enumerate_epis(g, h, DEFAULT_ENUM_BUDGET).unwrap();
            let fs_conf: Vec<bool> = fs.iter().map(Morphism::is_confluent_epi).collect();
            for k in graphs.iter().filter(|k| k.len() <= h.len()) {
                let gs = enumerate_epis(h, k, DEFAULT_ENUM_BUDGET).unwrap();
                for gm in &gs {
                    let g_conf = gm.is_confluent_epi();
                    for (f, &f_conf) in fs.iter().zip(&fs_conf) {
                        let comp = gm.compose(f).unwrap();
                        let comp_conf = comp.is_confluent_epi();
                        if f_conf && g_conf {
                            compositions += 1;
                            bad_composition += usize::from(!comp_conf);
                        }
                        if comp_conf {
                            threemaps += 1;
                            bad_threemaps += usize::from(!g_conf);
                        }
                    }
                }
            }
        }
    }
    vec![
        check(
            "monotone => confluent",
            bad_monotone == 0,
            format!("{} epis, {bad_monotone} violations", epis.len()),
        ),
        check(
            "composition of confluent",
            bad_composition == 0,
            format!("{compositions} composites, {bad_composition} violations"),
        ),
        check(
            "g.f confluent => g confluent",
            bad_threemaps == 0,
            format!("{threemaps} triples, {bad_threemaps} violations"),
        ),
    ]
}

fn criterion_4() -> Vec<Check> {
    let full = verify_amalgamation(3, None).unwrap();
    let sampled = verify_amalgamation(4, Some((SAMPLE_COUNT, SAMPLE_SEED))).unwrap();
    vec![
        check(
            "exhaustive <= 3 vertices",
            full.all_passed() && full.checked == full.total,
            format!(
                "{}/{} passed ({} component, {} search)",
                full.passed, full.total, full.via_component, full.via_search
            ),
        ),
        check(
            "500 samples at 4 vertices",
            sampled.all_passed() && sampled.checked == SAMPLE_COUNT,
            format!(
                "{}/{} passed of {} instances ({} component, {} search), seed {SAMPLE_SEED}",
                sampled.passed, sampled.checked, sampled.total, sampled.via_component, sampled.via_search
            ),
        ),
    ]
}

fn criterion_5() -> Vec<Check> {
    let mut triples = 0usize;
    let mut bad = 0usize;
    for g in connected_graphs_up_to(6) {
        let g = Arc::new(g);
        for a in g.vertices() {
            for &b in g.neighbors(a) {
                let s = split_edge(&g, a, b, false).unwrap();
                for &c in g.neighbors(b).iter().filter(|&&c| c != a) {
                    triples += 1;
                    let ok =
                        s.built.map.is_confluent_epi() && transitive_premise_violation(&s.built.map, a, b, c).is_none();
                    bad += usize::from(!ok);
                }
            }
        }
    }
    let path = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
    let literal = split_edge(&path, 0, 1, true).unwrap();
    let literal_bad = transitive_premise_violation(&literal.built.map, 0, 1, 2);
    vec![
        check(
            "premise with f(s)=b",
            bad == 0,
            format!("{triples} triples, {bad} violations"),
        ),
        check(
            "variant f(s)=a fails on a-b-c",
            literal_bad.is_some(),
            format!("bad triple {literal_bad:?}"),
        ),
    ]
}

fn criterion_6() -> Vec<Check> {
    let edge = graph(&["u", "v"], &[("u", "v")]);
    let w = indecomposability_witness(&edge).unwrap();
    let exhaustive = two_pass_violation_exhaustive(&w.map).unwrap();
    let p3 = Arc::new(Graph::path(3));
    let started = Instant::now();
    let w3 = indecomposability_witness(&p3).unwrap();
    let pruned = two_pass_violation(&w3.map).unwrap();
    vec![
        check(
            "edge, exhaustive",
            w.graph.len() == 6 && w.map.is_confluent_epi() && exhaustive.is_none(),
            format!("{} vertices, violation {exhaustive:?}", w.graph.len()),
        ),
        check(
            "path3, pruned",
            w3.graph.len() == 15 && w3.map.is_confluent_epi() && pruned.is_none(),
            format!(
                "{} vertices, violation {pruned:?}, {:?}",
                w3.graph.len(),
                started.elapsed()
            ),
        ),
    ]
}

fn criterion_7() -> Vec<Check> {
    let tri = Arc::new(Graph::cycle(3));
    let c = OrientedCycle::canonical(tri.clone()).unwrap();

    let mut lift_ok = true;
    for k in 3..=5 {
        let base = Arc::new(Graph::cycle(k));
        let cover = Morphism::new(
            Arc::new(Graph::cycle(2 * k)),
            base.clone(),
            (0..2 * k).map(|i| i % k).collect(),
        )
        .unwrap();
        let bc = OrientedCycle::canonical(base.clone()).unwrap();
        let d = lift_cycle(&cover, &bc).unwrap();
        let image: VertexSet = d
            .ambient_order(cover.domain())
            .unwrap()
            .iter()
            .map(|&v| cover.apply(v))
            .collect();
        lift_ok &= image == base.all();
    }

    let windings: Vec<usize> = (1..=4)
        .map(|m| {
            let r = wrap_copies(&tri, &c, m).unwrap();
            winding_number(&restrict_to_cycle(&r.built.map, &r.cycle, &c).unwrap()).unwrap()
        })
        .collect();

    let edge = graph(&["a", "c"], &[("a", "c")]);
    let at = attach_cycle_vertex(&edge, 0, 1).unwrap();
    let through_b = at.built.graph.induced_cycles(3).iter().any(|cy| {
        let s: VertexSet = cy.ambient_order(&at.built.graph).unwrap().into_iter().collect();
        s == VertexSet::from([0, 1, at.b])
    });

    let mut double_ok = true;
    for k in 3..=6 {
        let a = Arc::new(Graph::cycle(k));
        let ca = OrientedCycle::canonical(a.clone()).unwrap();
        let r = double_cycle(&a, &ca).unwrap();
        let d = restrict_to_cycle(&r.built.map, &r.cycle, &ca).unwrap();
        double_ok &= r.built.map.is_confluent_epi() && winding_number(&d).unwrap() == 1;
        double_ok &= a.vertices().all(|x| d.fiber(x).len() == 2);
    }
    vec![
        check("lift_cycle covers the cycle", lift_ok, "double covers of 3..5 cycles"),
        check(
            "wrap_copies winding = m",
            windings == vec![1, 2, 3, 4],
            format!("{windings:?}"),
        ),
        check(
            "attach gives triangle through b",
            through_b && at.built.map.is_confluent_epi(),
            "",
        ),
        check("double_cycle winding 1, fibers 2", double_ok, "cycles 3..6"),
    ]
}

fn criterion_8() -> Vec<Check> {
    let b = graph(
        &["a", "b", "c", "d", "e"],
        &[
            ("a", "b"),
            ("a", "c"),
            ("a", "d"),
            ("b", "c"),
            ("c", "d"),
            ("c", "e"),
            ("d", "e"),
        ],
    );
    let chain = vec![
        set(&b, &["a", "b"]),
        set(&b, &["a", "b", "c"]),
        set(&b, &["a", "b", "c", "d"]),
        b.all(),
    ];
    let u = unfold(&b, &chain).unwrap();
    let levels = u.layer_levels(1);
    let disconnecting: Vec<bool> = (0..chain.len())
        .map(|k| u.graph.is_adjacently_disconnecting(&u.component_over(k)).unwrap())
        .collect();
    vec![
        check(
            "g confluent",
            u.map.is_confluent_epi(),
            format!("{} vertices", u.graph.len()),
        ),
        check("Y1 copies {X1, X1, X2}", levels == vec![1, 1, 2], format!("{levels:?}")),
        check(
            "C_k adjacently disconnecting",
            disconnecting.iter().all(|&d| d),
            format!("{disconnecting:?}"),
        ),
        check(
            "copy collapse is a tree",
            u.collapse_is_tree(),
            format!("{} copies", u.copies.len()),
        ),
    ]
}

fn criterion_9() -> Vec<Check> {
    let mut total = 0usize;
    let mut mismatches: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut almost = 0usize;
    let mut zigzags = 0usize;
    let mut zigzags_beyond_triangle = 0usize;
    for k in 3..=6 {
        let cg = Arc::new(Graph::cycle(k));
        let co = OrientedCycle::canonical(cg.clone()).unwrap();
        for n in k..=8 {
            let dg = Arc::new(Graph::cycle(n));
            let dor = OrientedCycle::canonical(dg.clone()).unwrap();
            let mut maps = Vec::new();
            for_each_homomorphism(&dg, &cg, DEFAULT_ENUM_BUDGET, true, |m| maps.push(m.to_vec())).unwrap();
            for m in maps {
                let w = Morphism::new(dg.clone(), cg.clone(), m.clone()).unwrap();
                total += 1;
                let no_triple = swap_violation(&w, &dor, &co).unwrap().is_none();
                let witness = find_confluent_witness(&w, &dor, &co, false).unwrap().is_some();
                if no_triple != witness {
                    mismatches.push((n, k, m));
                }
                if witness {
                    almost += 1;
                    let z = usize::from(zigzag_violation(&w, &dor, &co).unwrap().is_some());
                    zigzags += z;
                    if k > 3 {
                        zigzags_beyond_triangle += z;
                    }
                }
            }
        }
    }
    let triangle_reversals: Vec<(usize, usize, Vec<usize>)> =
        vec![(3, 3, vec![0, 2, 1]), (3, 3, vec![1, 0, 2]), (3, 3, vec![2, 1, 0])];
    let mut equivalence = check(
        "reversed triple <=> witness",
        mismatches.is_empty(),
        format!("{total} maps, {} mismatches {mismatches:?}", mismatches.len()),
    );
    equivalence.known_gap = mismatches == triangle_reversals;

    let cyc = |n: usize| OrientedCycle::canonical(Arc::new(Graph::cycle(n))).unwrap();
    let doubled = |n: usize, k: usize| {
        let w = Morphism::new(
            Arc::new(Graph::cycle(n)),
            Arc::new(Graph::cycle(k)),
            (0..n).map(|i| (i / 2) % k).collect(),
        )
        .unwrap();
        WitnessPair::find(cyc(n), cyc(k), w, true).unwrap().unwrap()
    };
    let composed = compose_witness(&doubled(6, 3), &doubled(12, 6)).unwrap();
    let compose_ok = composed.validate().is_ok() && composed.is_proper();

    let f = Morphism::new(
        Arc::new(Graph::cycle(6)),
        Arc::new(Graph::cycle(3)),
        (0..6).map(|i| i % 3).collect(),
    )
    .unwrap();
    let am = cycle_amalgam(&f, &f).unwrap();
    let expected = am.block * am.winding_f * am.winding_g * 3;
    let am_ok = am.result.d.len() == 12 && expected == 12 && am.result.check(&f, &f).is_ok();

    let mut zigzag = check(
        "no zig-zag on almost wrapping maps",
        zigzags == 0,
        format!("{almost} maps, {zigzags} violations, {zigzags_beyond_triangle} with |C| > 3"),
    );
    zigzag.known_gap = zigzags_beyond_triangle == 0;
    vec![
        equivalence,
        zigzag,
        check(
            "12->6->3 composed witness proper",
            compose_ok,
            format!("winding {}", composed.winding_number().unwrap()),
        ),
        check(
            "cycle amalgam M = N*Wf*Wg*k = 12",
            am_ok,
            format!(
                "N={} Wf={} Wg={} |D|={}",
                am.block,
                am.winding_f,
                am.winding_g,
                am.result.d.len()
            ),
        ),
    ]
}

fn criterion_10() -> Vec<Check> {
    let mut trees = 0usize;
    let mut tree_bad = 0usize;
    for n in 1..=7 {
        for g in connected_graphs(n)
            .into_iter()
            .filter(|g| g.edge_count() + 1 == g.len())
        {
            trees += 1;
            tree_bad += usize::from(g.find_cycle_division(16).unwrap().is_some());
        }
    }
    let cycles_ok: Vec<bool> = (4..=7)
        .map(|n| {
            let g = Graph::cycle(n);
            g.find_cycle_division(16).unwrap().is_some_and(|d| d.is_valid(&g))
        })
        .collect();
    let f = Arc::new(Graph::cycle(4));
    let div = CycleDivision {
        h: VertexSet::from([0, 1, 2]),
        k: VertexSet::from([0, 2, 3]),
        c: VertexSet::from([0]),
        d: VertexSet::from([2]),
    };
    let w = unicoherence_witness(&f, &div).unwrap();
    let lifted = lifted_division(&w.map, &div, 16).unwrap();
    vec![
        check(
            "trees have no division",
            tree_bad == 0,
            format!("{trees} trees, {tree_bad} divisions"),
        ),
        check(
            "cycles 4..7 have divisions",
            cycles_ok.iter().all(|&b| b),
            format!("{cycles_ok:?}"),
        ),
        check(
            "witness over the square lifts no division",
            lifted.is_none() && w.map.is_confluent_epi() && w.graph.is_connected(),
            format!("{} vertices, lifted {lifted:?}", w.graph.len()),
        ),
    ]
}

fn criterion_11() -> Vec<Check> {
    let seq = build_fraisse_prefix(3, 6).unwrap();
    let report = verify_fraisse_prefix(&seq, 3, 1_000_000).unwrap();
    let level0 = report.tasks.iter().filter(|t| t.level == 0).count();
    let mut bare = seq.clone();
    bare.set_ledger(Vec::new()).unwrap();
    let searched = verify_fraisse_prefix(&bare, 3, 1_000_000).unwrap();
    let first = to_json(&SequenceDoc::from_sequence(&seq));
    let second = to_json(&SequenceDoc::from_sequence(&build_fraisse_prefix(3, 6).unwrap()));

    let tower = |sizes: &[usize], map: fn(usize, usize) -> usize| {
        let levels = sizes.iter().map(|&n| Arc::new(Graph::cycle(n))).collect();
        let bonds = sizes
            .windows(2)
            .map(|w| {
                Morphism::new(
                    Arc::new(Graph::cycle(w[1])),
                    Arc::new(Graph::cycle(w[0])),
                    (0..w[1]).map(|i| map(i, w[0])).collect(),
                )
                .unwrap()
            })
            .collect();
        InverseSequence::new(levels, bonds).unwrap()
    };
    let doubled = tower(&[3, 12, 48], |i, k| (i / 2) % k);
    let plain = tower(&[3, 6, 12], |i, k| i % k);
    let sharp_d = check_sharp(&doubled);
    let sharp_p = check_sharp(&plain);
    let sharp_ok = sharp_d.bonds.iter().all(|b| b.sharp && b.winding == Some(2))
        && sharp_p.bonds.iter().all(|b| !b.sharp && b.winding == Some(2))
        && sharp_p.divisors == BTreeSet::from([1, 2, 4]);
    let sol_ok = is_almost_graph_solenoid_prefix(&doubled).unwrap().holds
        && !is_almost_graph_solenoid_prefix(&plain).unwrap().holds;

    vec![
        check(
            "level-0 demands satisfied",
            level0 > 0 && report.all_satisfied_at(0),
            format!(
                "{} tasks, {} satisfied, {level0} at level 0",
                report.tasks.len(),
                report.satisfied()
            ),
        ),
        check(
            "level-0 demands found by search",
            searched.all_satisfied_at(0),
            format!("{} satisfied without ledger", searched.satisfied()),
        ),
        check(
            "bonds confluent",
            seq.len() == 6 && seq.bonds().iter().all(Morphism::is_confluent_epi),
            format!(
                "level sizes {:?}",
                seq.levels().iter().map(|g| g.len()).collect::<Vec<_>>()
            ),
        ),
        check("deterministic", first == second, format!("{} bytes", first.len())),
        check("sharp audit", sharp_ok, format!("divisors {:?}", sharp_p.divisors)),
        check("solenoid audit", sol_ok, ""),
    ]
}

fn main() -> ExitCode {
    let criteria: [(usize, Criterion); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut unexpected = 0;
    for (n, run) in criteria {
        let started = Instant::now();
        let checks = run();
        let ok = checks.iter().all(|c| c.ok);
        println!(
            "{} criterion {n} ({:.1?}, tolerance exact)",
            if ok { "PASS" } else { "FAIL" },
            started.elapsed()
        );
        for c in &checks {
            let tag = match (c.ok, c.known_gap) {
                (true, _) => "ok",
                (false, true) => "FAIL (documented gap)",
                (false, false) => "FAIL",
            };
            println!("    {tag}: {} - {}", c.name, c.detail);
            if !c.ok && !c.known_gap {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failures");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
