use fraisse_core::amalgam::{self, AmalgamPath, ConnectedAmalgam};
use fraisse_core::constructions::{self as cons, Built};
use fraisse_core::cycles::{self, SwapViolation, WitnessPair};
use fraisse_core::doc::SequenceDoc;
use fraisse_core::morphism;
use fraisse_core::sequence::{self as seq, TaskStatus};
use fraisse_core::{Error, InverseSequence, Morphism, OrientedCycle};
use serde_json::{json, Value};

use crate::args::*;
use crate::input;
use crate::report::{self, Outcome, Status};
use crate::CliError;

type Run = Result<Outcome, CliError>;

pub fn run(cmd: &Command) -> Run {
    match cmd {
        Command::Check(c) => check(c),
        Command::Amalgamate(c) => amalgamate(c),
        Command::Construct(c) => construct(c),
        Command::Lift(c) => lift(c),
        Command::Cycles(c) => cycles(c),
        Command::Sequence(c) => sequence(c),
        Command::Export(Export::Dot(one)) => export_dot(one),
    }
}

fn classification(f: &Morphism) -> Value {
    let c = f.classify();
    let g = f.codomain();
    let witness = c.witness.as_ref().map(|w| {
        json!({
            "edge": [g.name(w.edge.0), g.name(w.edge.1)],
            "component": report::set(f.domain(), &w.component),
        })
    });
    json!({
        "homomorphism": c.homomorphism,
        "epimorphism": c.epimorphism,
        "monotone": c.monotone,
        "confluent": c.confluent,
        "witness": witness,
    })
}

fn check(c: &Check) -> Run {
    match c {
        Check::Hom(one) | Check::Epi(one) | Check::Monotone(one) => {
            let f = input::morphism(&one.input)?;
            let cl = f.classify();
            let holds = match c {
                Check::Hom(_) => cl.homomorphism,
                Check::Epi(_) => cl.epimorphism,
                _ => cl.monotone,
            };
            Ok(Outcome::new(classification(&f), holds).draw_map(&f))
        }
        Check::Confluent {
            input,
            by_definition,
            bound,
        } => {
            let f = input::morphism(&input.input)?;
            let mut report = classification(&f);
            let mut holds = f.is_confluent_epi();
            if *by_definition {
                let violation = if f.is_epimorphism() {
                    f.definition_violation(*bound)?
                } else {
                    None
                };
                let by_def = f.is_epimorphism() && violation.is_none();
                report["confluent_by_definition"] = json!(by_def);
                report["definition_violation"] = match violation {
                    Some((q, comp)) => json!({
                        "set": report::set(f.codomain(), &q),
                        "component": report::set(f.domain(), &comp),
                    }),
                    None => Value::Null,
                };
                holds &= by_def;
            }
            Ok(Outcome::new(report, holds).draw_map(&f))
        }
        Check::CycleDivision { input, bound } | Check::Heruni { input, bound } => {
            let g = input::graph(&input.input)?;
            let div = g.find_cycle_division(*bound)?;
            let found = div.is_some();
            let report = json!({
                "hereditarily_unicoherent": !found,
                "division": div.map(|d| report::division(&g, &d)),
            });
            let holds = matches!(c, Check::CycleDivision { .. }) == found;
            Ok(Outcome::new(report, holds).draw("graph", &g))
        }
        Check::AdjDisc { input, set } => {
            let g = input::graph(&input.input)?;
            let t = input::set(&g, set)?;
            let holds = g.is_adjacently_disconnecting(&t)?;
            Ok(Outcome::new(json!({ "adjacently_disconnecting": holds }), holds).draw("graph", &g))
        }
    }
}

fn amalgam_report(r: &ConnectedAmalgam) -> Value {
    let path = match r.path {
        AmalgamPath::Component(i) => json!({ "component": i }),
        AmalgamPath::Search(n) => json!({ "search": n }),
    };
    json!({
        "graph": report::graph(&r.result.d),
        "f0": report::morphism(&r.result.f0),
        "g0": report::morphism(&r.result.g0),
        "path": path,
    })
}

fn amalgamate(c: &Amalgamate) -> Run {
    match c {
        Amalgamate::Standard(two) => {
            let (a, b) = input::pair(&two.inputs)?;
            let (f, g) = (input::morphism(a)?, input::morphism(b)?);
            let fp = amalgam::standard_amalgam(&f, &g)?;
            let pairs: Vec<[&str; 2]> = fp
                .pairs
                .iter()
                .map(|&(x, y)| [f.domain().name(x), g.domain().name(y)])
                .collect();
            let report = json!({
                "graph": report::graph(&fp.d),
                "f0": report::morphism(&fp.f0),
                "g0": report::morphism(&fp.g0),
                "pairs": pairs,
                "connected": fp.d.is_connected(),
            });
            Ok(Outcome::new(report, true).draw("fiber_product", &fp.d))
        }
        Amalgamate::Connected { inputs, budget } => {
            let (a, b) = input::pair(&inputs.inputs)?;
            let (f, g) = (input::morphism(a)?, input::morphism(b)?);
            let r = amalgam::connected_amalgam(&f, &g, *budget)?;
            Ok(Outcome::new(amalgam_report(&r), true).draw("amalgam", &r.result.d))
        }
        Amalgamate::Refine(two) => {
            let (a, b) = input::pair(&two.inputs)?;
            let r = amalgam::common_refinement(&input::graph(a)?, &input::graph(b)?)?;
            Ok(Outcome::new(amalgam_report(&r), true).draw("refinement", &r.result.d))
        }
        Amalgamate::Verify {
            max_vertices,
            sample,
            seed,
        } => {
            let spec = sample.zip(*seed);
            let r = amalgam::verify_amalgamation(*max_vertices, spec)?;
            let counterexamples: Vec<Value> = r
                .counterexamples
                .iter()
                .map(|c| {
                    json!({
                        "index": c.index,
                        "f": report::morphism(&c.f),
                        "g": report::morphism(&c.g),
                        "error": c.error,
                    })
                })
                .collect();
            let report = json!({
                "max_vertices": r.max_vertices,
                "sample": sample,
                "seed": seed,
                "total": r.total,
                "checked": r.checked,
                "passed": r.passed,
                "via_component": r.via_component,
                "via_search": r.via_search,
                "counterexamples": counterexamples,
            });
            Ok(Outcome::new(report, r.all_passed()))
        }
    }
}

fn built(b: &Built, metadata: Value, holds: bool) -> Outcome {
    Outcome::new(report::bundle(&b.graph, &b.map, metadata), holds)
        .draw("built", &b.graph)
        .draw("input", b.map.codomain())
}

fn construct(c: &Construct) -> Run {
    match c {
        Construct::SplitEdge {
            input,
            edge,
            paper_literal,
        } => {
            let g = input::graph(&input.input)?;
            let (a, b) = input::edge(&g, edge)?;
            let s = cons::split_edge(&g, a, b, *paper_literal)?;
            let f = &s.built.map;
            let violations: Vec<Value> = g
                .neighbors(b)
                .iter()
                .filter(|&&c| c != a)
                .filter_map(|&c| cons::transitive_premise_violation(f, a, b, c).map(|t| (c, t)))
                .map(|(c, (p, q, r))| {
                    let h = f.domain();
                    json!({ "c": g.name(c), "triple": [h.name(p), h.name(q), h.name(r)] })
                })
                .collect();
            let holds = f.is_confluent_epi() && violations.is_empty();
            let meta = json!({
                "s": s.built.graph.name(s.s),
                "paper_literal": paper_literal,
                "confluent": f.is_confluent_epi(),
                "premise_violations": violations,
            });
            Ok(built(&s.built, meta, holds))
        }
        Construct::Indec(one) => {
            let g = input::graph(&one.input)?;
            let w = cons::indecomposability_witness(&g)?;
            let checked = w.graph.len() <= 24;
            let violation = if checked {
                cons::two_pass_violation(&w.map)?
            } else {
                None
            };
            let meta = json!({
                "confluent": w.map.is_confluent_epi(),
                "two_pass_checked": checked,
                "two_pass_violation": violation.map(|(a, b)| json!([report::set(&w.graph, &a), report::set(&w.graph, &b)])),
            });
            let holds = w.map.is_confluent_epi() && meta["two_pass_violation"].is_null();
            Ok(built(&w, meta, holds))
        }
        Construct::Delta { input, vertex } => {
            let g = input::graph(&input.input)?;
            let p = g.vertex(vertex)?;
            let d = cons::delta_double(&g, p)?;
            let ok = d.map.is_confluent_epi();
            Ok(built(&d, json!({ "confluent": ok }), ok))
        }
        Construct::Extend { input, embed } => {
            let f = input::morphism(&input.input)?;
            let e = input::morphism(embed)?;
            let g = e.codomain().clone();
            let b = cons::extend_confluent(&f, &g, &e)?;
            let ok = b.map.is_confluent_epi();
            Ok(built(&b, json!({ "confluent": ok }), ok))
        }
        Construct::Unfold { input, chain, cap } => {
            let g = input::graph(&input.input)?;
            let links = chain.iter().map(|l| input::set(&g, l)).collect::<Result<Vec<_>, _>>()?;
            let u = cons::unfold_capped(&g, &links, cap.unwrap_or(usize::MAX))?;
            let h = &u.graph;
            let disconnecting = (0..links.len())
                .map(|k| h.is_adjacently_disconnecting(&u.component_over(k)))
                .collect::<Result<Vec<_>, _>>()?;
            let copies: Vec<Value> = u
                .copies
                .iter()
                .map(|c| {
                    json!({
                        "level": c.level,
                        "parent": c.parent,
                        "layer": c.layer,
                        "attach": c.attach.map(|(x, y)| [h.name(x), h.name(y)]),
                        "vertices": c.vertices.iter().map(|&v| h.name(v)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let meta = json!({
                "base": report::set(h, &u.base),
                "kernel": report::set(h, &u.kernel),
                "layers": u.layers.iter().map(|l| report::set(h, l)).collect::<Vec<_>>(),
                "copies": copies,
                "components_adjacently_disconnecting": disconnecting,
                "collapse_is_tree": u.collapse_is_tree(),
                "confluent": u.map.is_confluent_epi(),
            });
            let holds = u.map.is_confluent_epi() && u.collapse_is_tree() && disconnecting.iter().all(|&d| d);
            let b = Built {
                graph: u.graph.clone(),
                map: u.map.clone(),
            };
            Ok(built(&b, meta, holds))
        }
        Construct::Heruni { input, division, bound } => {
            let g = input::graph(&input.input)?;
            let div = match division {
                Some(p) => input::division(&g, p)?,
                None => g
                    .find_cycle_division(*bound)?
                    .ok_or_else(|| Error::Precondition("graph has no cycle division".into()))?,
            };
            let w = cons::unicoherence_witness(&g, &div)?;
            let lifted = cons::lifted_division(&w.map, &div, *bound)?;
            let meta = json!({
                "division": report::division(&g, &div),
                "confluent": w.map.is_confluent_epi(),
                "lifted_division": lifted.as_ref().map(|d| report::division(&w.graph, d)),
            });
            let holds = w.map.is_confluent_epi() && lifted.is_none();
            Ok(built(&w, meta, holds))
        }
        Construct::Wrap { input, cycle, copies } => {
            let g = input::graph(&input.input)?;
            let c = input::cycle_in(&g, cycle)?;
            let r = cons::wrap_copies(&g, &c, *copies)?;
            cycle_bundle(&r.built, &r.cycle, &c)
        }
        Construct::Attach { input, edge } => {
            let g = input::graph(&input.input)?;
            let (a, c) = input::edge(&g, edge)?;
            let r = cons::attach_cycle_vertex(&g, a, c)?;
            let ok = r.built.map.is_confluent_epi();
            let meta = json!({ "b": r.built.graph.name(r.b), "cycle": report::cycle(&r.cycle), "confluent": ok });
            Ok(built(&r.built, meta, ok))
        }
        Construct::Double { input, cycle } => {
            let g = input::graph(&input.input)?;
            let c = input::cycle_in(&g, cycle)?;
            let r = cons::double_cycle(&g, &c)?;
            cycle_bundle(&r.built, &r.cycle, &c)
        }
    }
}

fn cycle_bundle(b: &Built, d: &OrientedCycle, c: &OrientedCycle) -> Run {
    let ok = b.map.is_confluent_epi();
    let winding = cycles::winding_number(&cons::restrict_to_cycle(&b.map, d, c)?)?;
    let meta = json!({ "cycle": report::cycle(d), "winding": winding, "confluent": ok });
    Ok(built(b, meta, ok))
}

fn lift(c: &Lift) -> Run {
    match c {
        Lift::Arc { input, arc, end, start } => {
            let f = input::morphism(&input.input)?;
            let arc = input::set(f.codomain(), arc)?;
            let end = f.codomain().vertex(end)?;
            let start = f.domain().vertex(start)?;
            let lifted = morphism::lift_arc(&f, &arc, end, start)?;
            Ok(Outcome::new(json!({ "arc": report::set(f.domain(), &lifted) }), true).draw_map(&f))
        }
        Lift::Cycle { input, cycle } => {
            let f = input::morphism(&input.input)?;
            let c = input::cycle_in(f.codomain(), cycle)?;
            let d = morphism::lift_cycle(&f, &c)?;
            Ok(Outcome::new(json!({ "cycle": report::cycle(&d) }), true).draw_map(&f))
        }
    }
}

fn oriented(f: &Morphism, o: &Orientations) -> Result<(OrientedCycle, OrientedCycle), CliError> {
    Ok((
        input::orient(f.domain(), o.domain_orientation.as_deref())?,
        input::orient(f.codomain(), o.codomain_orientation.as_deref())?,
    ))
}

fn swap_report(f: &Morphism, v: &SwapViolation) -> Value {
    let (d, c) = (f.domain(), f.codomain());
    json!({ "x": c.name(v.x), "z": c.name(v.z), "a": d.name(v.a), "c": d.name(v.c) })
}

fn witness_pair(path: &std::path::Path) -> Result<WitnessPair, CliError> {
    let w = input::morphism(path)?;
    let dom = OrientedCycle::canonical(w.domain().clone())?;
    let cod = OrientedCycle::canonical(w.codomain().clone())?;
    WitnessPair::find(dom, cod, w, true)?
        .ok_or_else(|| Error::Precondition(format!("{} has no proper confluent witness", path.display())).into())
}

fn cycles(c: &Cycles) -> Run {
    match c {
        Cycles::Winding(one) => {
            let f = input::morphism(&one.input)?;
            let w = cycles::winding_number(&f)?;
            Ok(Outcome::new(json!({ "winding": w }), true).draw_map(&f))
        }
        Cycles::Almost { input, orient } => {
            let w = input::morphism(&input.input)?;
            let (d, k) = oriented(&w, orient)?;
            let v = cycles::swap_violation(&w, &d, &k)?;
            let zig = cycles::zigzag_violation(&w, &d, &k)?;
            let report = json!({
                "almost_wrapping": v.is_none(),
                "reversed_triple": v.map(|v| swap_report(&w, &v)),
                "zigzag": zig.map(|(x, y, z)| [w.domain().name(x), w.domain().name(y), w.domain().name(z)]),
            });
            Ok(Outcome::new(report, v.is_none()).draw_map(&w))
        }
        Cycles::Witness { input, orient, proper } => {
            let w = input::morphism(&input.input)?;
            let (d, k) = oriented(&w, orient)?;
            let f = cycles::find_confluent_witness(&w, &d, &k, *proper)?;
            let winding = f.as_ref().map(cycles::winding_number).transpose()?;
            let report = json!({
                "witness": f.as_ref().map(report::morphism),
                "winding": winding,
                "proper": f.as_ref().map(cycles::has_fat_fibers),
            });
            Ok(Outcome::new(report, f.is_some()).draw_map(&w))
        }
        Cycles::Compose(two) => {
            let (a, b) = input::pair(&two.inputs)?;
            let (g1, g2) = (witness_pair(a)?, witness_pair(b)?);
            let p = cycles::compose_witness(&g1, &g2)?;
            let report = json!({
                "w": report::morphism(&p.w),
                "f": report::morphism(&p.f),
                "winding": p.winding_number()?,
                "proper": p.is_proper(),
            });
            Ok(Outcome::new(report, p.is_proper()).draw_map(&p.w))
        }
        Cycles::Amalgam(two) => {
            let (a, b) = input::pair(&two.inputs)?;
            let (f, g) = (input::morphism(a)?, input::morphism(b)?);
            let r = cycles::cycle_amalgam(&f, &g)?;
            let report = json!({
                "graph": report::graph(&r.result.d),
                "f0": report::morphism(&r.result.f0),
                "g0": report::morphism(&r.result.g0),
                "block": r.block,
                "winding_f": r.winding_f,
                "winding_g": r.winding_g,
                "base": r.base,
            });
            Ok(Outcome::new(report, true).draw("amalgam", &r.result.d))
        }
    }
}

fn draw_levels(mut out: Outcome, s: &InverseSequence) -> Outcome {
    for (n, g) in s.levels().iter().enumerate() {
        out = out.draw(&format!("level{n}"), g);
    }
    out
}

fn sequence(c: &Sequence) -> Run {
    match c {
        Sequence::Build { task_bound, depth } => {
            let s = seq::build_fraisse_prefix(*task_bound, *depth)?;
            let report = serde_json::to_value(SequenceDoc::from_sequence(&s)).expect("sequence document");
            Ok(draw_levels(Outcome::new(report, true), &s))
        }
        Sequence::Verify {
            input,
            task_bound,
            budget,
        } => {
            let s = input::sequence(&input.input, true)?;
            let r = seq::verify_fraisse_prefix(&s, *task_bound, *budget)?;
            let tasks: Vec<Value> = r
                .tasks
                .iter()
                .map(|t| {
                    let level = s.level(t.level);
                    let f: Vec<[&str; 2]> =
                        t.f.iter()
                            .enumerate()
                            .map(|(v, &x)| [t.graph.name(v), level.name(x)])
                            .collect();
                    let status = match &t.status {
                        TaskStatus::Satisfied { at, from_ledger, .. } => {
                            json!({ "satisfied_at": at, "from_ledger": from_ledger })
                        }
                        TaskStatus::Unsatisfied => json!("unsatisfied"),
                        TaskStatus::BudgetExceeded => json!("budget_exceeded"),
                    };
                    json!({ "level": t.level, "graph": report::graph(&t.graph), "f": f, "status": status })
                })
                .collect();
            let unsatisfied = r.tasks.iter().any(|t| t.status == TaskStatus::Unsatisfied);
            let over_budget = r.tasks.iter().any(|t| t.status == TaskStatus::BudgetExceeded);
            let status = if unsatisfied {
                Status::Violated
            } else if over_budget {
                Status::Budget
            } else {
                Status::Holds
            };
            let report = json!({
                "task_bound": r.task_bound,
                "total": r.tasks.len(),
                "satisfied": r.satisfied(),
                "tasks": tasks,
            });
            Ok(draw_levels(Outcome::new(report, status), &s))
        }
        Sequence::Sharp(one) => {
            let s = input::sequence(&one.input, true)?;
            let r = seq::check_sharp(&s);
            let bonds: Vec<Value> = r
                .bonds
                .iter()
                .map(|b| json!({ "bond": b.bond, "applicable": b.applicable, "sharp": b.sharp, "winding": b.winding }))
                .collect();
            let holds = r.bonds.iter().all(|b| !b.applicable || b.sharp);
            let report = json!({ "bonds": bonds, "divisors": r.divisors, "holds": holds });
            Ok(draw_levels(Outcome::new(report, holds), &s))
        }
        Sequence::Fibers { input, from, to } => {
            let s = input::sequence(&input.input, true)?;
            if *to >= s.len() {
                return Err(CliError::Usage(format!(
                    "level {to} is beyond the prefix of {} levels",
                    s.len()
                )));
            }
            let (lo, hi) = (s.level(*from).clone(), s.level(*to).clone());
            let fibers: Vec<Value> = seq::thread_fibers(&s, *from, *to)?
                .iter()
                .map(|e| {
                    json!({
                        "vertex": lo.name(e.vertex),
                        "components": e.components.iter().map(|c| report::set(&hi, c)).collect::<Vec<_>>(),
                        "sizes": e.sizes,
                        "diameter": e.diameter,
                    })
                })
                .collect();
            Ok(Outcome::new(json!({ "from": from, "to": to, "fibers": fibers }), true)
                .draw("from", &lo)
                .draw("to", &hi))
        }
        Sequence::Solenoid(one) => {
            let s = input::sequence(&one.input, false)?;
            let r = seq::is_almost_graph_solenoid_prefix(&s)?;
            let bonds: Vec<Value> = r
                .bonds
                .iter()
                .map(|b| {
                    let f = &s.bonds()[b.bond];
                    json!({
                        "bond": b.bond,
                        "witness": b.witness,
                        "winding": b.winding,
                        "reversed_triple": b.violation.as_ref().map(|v| swap_report(f, v)),
                    })
                })
                .collect();
            let orientations: Vec<Vec<&str>> = r
                .orientations
                .iter()
                .enumerate()
                .map(|(n, o)| o.iter().map(|&v| s.level(n).name(v)).collect())
                .collect();
            let report = json!({
                "cycles": r.cycles,
                "bonds": bonds,
                "orientations": orientations,
                "winding_over_one": r.winding_over_one,
                "required": r.required,
                "holds": r.holds,
            });
            Ok(draw_levels(Outcome::new(report, r.holds), &s))
        }
    }
}

/// Any graph, morphism or sequence document, drawn whole; the kind is
/// told by its keys.
fn export_dot(one: &One) -> Run {
    let text = input::read(&one.input)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Document(e.to_string()))?;
    let out = Outcome::new(Value::Null, true);
    Ok(if v.get("levels").is_some() {
        draw_levels(out, &input::sequence(&one.input, false)?)
    } else if v.get("map").is_some() {
        out.draw_map(&input::morphism(&one.input)?)
    } else {
        out.draw("graph", &input::graph(&one.input)?)
    })
}
