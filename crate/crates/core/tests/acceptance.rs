//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! reach the output.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use common::*;
use dagshare::algos::{exact_min_arborescence, prim_arborescence};
use dagshare::audit::{
    audit_contractor_truthfulness, audit_node_truthfulness, check_budget_balance, check_positiveness, replay,
    DeviationGrid, Status, Violation,
};
use dagshare::coalition::{coalition_value, CoalitionGame, DEFAULT_ENUMERATION_LIMIT};
use dagshare::mechanisms::{contractor_utility, ShareDetail};
use dagshare::{induce, parse_overlay, Cost, Edge, Execution, Instance, Mechanism, MechanismKind, NodeId, ReportProfile};

/// Wall-clock limits.
const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const SWEEP_LIMIT: Duration = Duration::from_secs(60);
/// Truthfulness audits run on sweep instances with at most this many agents.
const AUDIT_MAX_AGENTS: usize = 6;
/// Coalition brute force runs on instances with at most this many nodes,
/// source included.
const COALITION_MAX_NODES: usize = 6;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    ensure(got == want, || format!("{what}: got {got:?}, want {want:?}"))
}

fn n(s: &str) -> NodeId {
    NodeId::new(s)
}

fn r(p: i64, q: i64) -> Cost {
    Cost::ratio(p, q)
}

fn edges(list: &[(&str, &str)]) -> BTreeSet<Edge> {
    list.iter().map(|(f, t)| Edge::new(*f, *t)).collect()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let inst = fixture("fig5.inst");
    let reports = ReportProfile::truthful(&inst);
    let out = Mechanism::shortest_path().run(&inst, &reports).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    eq("winner", out.selection.winner.as_str(), "a")?;
    eq("p_a", out.payments[&"a".into()].clone(), Cost::integer(-44))?;
    eq("p_b", out.payments[&"b".into()].clone(), Cost::zero())?;
    let ShareDetail::ShortestPath(d) = &out.detail else {
        return Err("missing path decomposition".into());
    };
    let order: Vec<&str> = d.order().iter().map(|x| x.as_str()).collect();
    eq("order", order, vec!["G", "D", "F", "E", "C", "B", "A"])?;
    let want_d = [("G", 14), ("D", 10), ("F", 7), ("E", 6), ("C", 0), ("B", 3), ("A", 1)];
    for (node, dv) in want_d {
        eq(&format!("d({node})"), d.step(&n(node)).unwrap().residual_cost.clone(), Cost::integer(dv))?;
        eq(&format!("x_{node}"), out.shares[&n(node)].clone(), r(dv * 44, 41))?;
    }
    eq("B", d.total.clone(), Cost::integer(41))?;
    eq(
        "f",
        out.selected_edges.clone(),
        edges(&[("s", "C"), ("s", "B"), ("s", "A"), ("C", "D"), ("C", "G"), ("C", "F"), ("F", "E")]),
    )?;
    ensure(elapsed < EXAMPLE_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("exact match in {elapsed:.2?}"))
}

fn criterion_2() -> Check {
    let inst = fixture("fig1.inst");
    let truthful = ReportProfile::truthful(&inst);
    let g = induce(&inst, &truthful, &"a".into()).map_err(|e| e.to_string())?;
    let game = CoalitionGame::new(&g, DEFAULT_ENUMERATION_LIMIT).map_err(|e| e.to_string())?;
    let want_v: [(&[&str], i64); 8] = [
        (&[], 0),
        (&["A"], 3),
        (&["B"], 5),
        (&["A", "B"], 5),
        (&["C"], 7),
        (&["A", "C"], 7),
        (&["B", "C"], 7),
        (&["A", "B", "C"], 7),
    ];
    for (set, v) in want_v {
        let s: BTreeSet<NodeId> = set.iter().map(|x| n(x)).collect();
        eq(&format!("v({set:?}) table"), game.value(&s).unwrap().clone(), Cost::integer(v))?;
        eq(&format!("v({set:?}) direct"), coalition_value(&g, &s).unwrap(), Cost::integer(v))?;
    }
    let phi = game.shapley(Execution::Sequential);
    for (node, v) in [("A", 1), ("B", 2), ("C", 4)] {
        eq(&format!("phi_{node}"), phi.values[&n(node)].clone(), Cost::integer(v))?;
    }
    let mech = Mechanism::shapley();
    let out = mech.run(&inst, &truthful).map_err(|e| e.to_string())?;
    eq("x_A truthful", out.shares[&n("A")].clone(), Cost::integer(100))?;

    let cut = parse_overlay(&inst, &fixture_text("fig1-cut-ab.rep")).map_err(|e| e.to_string())?;
    let dev = mech.run(&inst, &cut).map_err(|e| e.to_string())?;
    let ShareDetail::Shapley(phi) = &dev.detail else {
        return Err("missing Shapley detail".into());
    };
    eq("phi after cut", phi.values.clone(), BTreeMap::from([(n("A"), r(3, 2)), (n("C"), r(203, 2))]))?;
    eq("x_A after cut", dev.shares[&n("A")].clone(), r(1200, 103))?;
    let fig2 = mech.run(&fixture("fig2.inst"), &ReportProfile::truthful(&fixture("fig2.inst")));
    eq("fig2 x_A", fig2.map_err(|e| e.to_string())?.shares[&n("A")].clone(), r(1200, 103))?;

    flagged(&inst, &mech, "A", &[("A", "B")])?;
    Ok("coalition values, Shapley vectors and shares exact; auditor flags A cutting (A,B)".into())
}

/// The node audit's first witness is exactly `node` cutting `cut`, and it
/// replays.
fn flagged(inst: &Instance, mech: &Mechanism, node: &str, cut: &[(&str, &str)]) -> Result<(), String> {
    let verdict = audit_node_truthfulness(inst, mech, 1 << 10).map_err(|e| e.to_string())?;
    let w = verdict.witness().ok_or("auditor found no violation")?;
    let Violation::NodeDeviation { node: who, cut: what, .. } = &w.violation else {
        return Err(format!("unexpected witness {}", w.violation));
    };
    eq("deviator", who.as_str(), node)?;
    eq("cut", what.iter().cloned().collect::<BTreeSet<_>>(), edges(cut))?;
    ensure(replay(inst, mech, w).unwrap(), || "witness does not replay".into())
}

fn criterion_3() -> Check {
    let inst = fixture("fig3.inst");
    let mech = Mechanism::bird();
    let out = mech
        .run(&inst, &ReportProfile::truthful(&inst))
        .map_err(|e| e.to_string())?;
    eq("x_C truthful", out.shares[&n("C")].clone(), Cost::integer(20))?;
    let cut = parse_overlay(&inst, &fixture_text("fig3-cut-cb.rep")).map_err(|e| e.to_string())?;
    let dev = mech.run(&inst, &cut).map_err(|e| e.to_string())?;
    eq("x_C after cut", dev.shares[&n("C")].clone(), Cost::integer(10))?;
    let fig4 = fixture("fig4.inst");
    let out4 = mech.run(&fig4, &ReportProfile::truthful(&fig4)).map_err(|e| e.to_string())?;
    eq("fig4 x_C", out4.shares[&n("C")].clone(), Cost::integer(10))?;
    flagged(&inst, &mech, "C", &[("C", "B")])?;
    Ok("x_C 20 -> 10; auditor flags C cutting (C,B)".into())
}

fn criterion_4(instances: &[(u64, Instance)]) -> Check {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut runs = 0;
    for (seed, inst) in instances {
        let reports = ReportProfile::truthful(inst);
        for kind in MechanismKind::ALL {
            let out = Mechanism::new(kind).run(inst, &reports).map_err(|e| e.to_string())?;
            runs += 1;
            if !check_budget_balance(&out).passed() || out.total_paid() != out.selection.runner_up_cost {
                failures.push(format!("seed {seed} {kind}: budget balance"));
            }
            if !check_positiveness(&out).passed() {
                failures.push(format!("seed {seed} {kind}: positiveness"));
            }
            let u = contractor_utility(inst, &out, &out.selection.winner).map_err(|e| e.to_string())?;
            if u.is_negative() {
                failures.push(format!("seed {seed} {kind}: winner utility {u}"));
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_LIMIT, || format!("took {elapsed:?}"))?;
    if failures.is_empty() {
        Ok(format!("{runs} runs, BB/positiveness/IR hold, {elapsed:.2?}"))
    } else {
        Err(format!("{} violation(s) in {runs} runs; first: {}", failures.len(), failures[0]))
    }
}

fn criterion_5(instances: &[(u64, Instance)]) -> Check {
    let small: Vec<&(u64, Instance)> = instances
        .iter()
        .filter(|(_, i)| i.dag().agents().len() <= AUDIT_MAX_AGENTS)
        .collect();
    let sp = Mechanism::shortest_path();
    let mut node_fail = Vec::new();
    let mut grid_fail: BTreeMap<MechanismKind, Vec<String>> = BTreeMap::new();
    for (seed, inst) in &small {
        let v = audit_node_truthfulness(inst, &sp, 1 << 16).map_err(|e| e.to_string())?;
        if let Status::Fail(w) = &v.status {
            ensure(replay(inst, &sp, w).unwrap(), || format!("seed {seed}: witness does not replay"))?;
            node_fail.push(format!("seed {seed}: {}", w.violation));
        }
        for kind in MechanismKind::ALL {
            let mech = Mechanism::new(kind);
            let v = audit_contractor_truthfulness(inst, &mech, &DeviationGrid::default()).map_err(|e| e.to_string())?;
            if let Status::Fail(w) = &v.status {
                ensure(replay(inst, &mech, w).unwrap(), || format!("seed {seed}: witness does not replay"))?;
                grid_fail.entry(kind).or_default().push(format!("seed {seed}: {}", w.violation));
            }
        }
    }
    let mut summary = vec![format!(
        "{} instances; shortest-path node audit: {}",
        small.len(),
        if node_fail.is_empty() {
            "no violation within budget".to_string()
        } else {
            format!("{} violating instance(s), first {}", node_fail.len(), node_fail[0])
        }
    )];
    for kind in MechanismKind::ALL {
        summary.push(match grid_fail.get(&kind) {
            None => format!("{kind} contractor grid: no violation within budget"),
            Some(f) => format!("{kind} contractor grid: {} violating instance(s), first {}", f.len(), f[0]),
        });
    }
    let text = summary.join("; ");
    if node_fail.is_empty() && grid_fail.is_empty() {
        Ok(text)
    } else {
        Err(text)
    }
}

fn criterion_6() -> Check {
    let mut greedy_equal = 0;
    let mut graphs = 0;
    let mut brute = 0;
    for seed in 1..=50u64 {
        let params = dagshare::graph::GeneratorParams {
            seed: 1000 + seed,
            nodes: 1 + (seed as usize % 7),
            contractors: 2,
            ..sweep_params(seed)
        };
        let inst = dagshare::graph::generate_instance(&params).map_err(|e| e.to_string())?;
        let reports = ReportProfile::truthful(&inst);
        for k in inst.contractor_ids() {
            let g = induce(&inst, &reports, k).map_err(|e| e.to_string())?;
            graphs += 1;
            let exact = exact_min_arborescence(&g);
            let greedy = prim_arborescence(&g);
            ensure(exact.total_cost() <= greedy.total_cost(), || format!("seed {seed}: exact above greedy"))?;
            if exact.total_cost() == greedy.total_cost() {
                greedy_equal += 1;
            }
            eq(
                &format!("seed {seed} {k}: exact vs brute arborescence"),
                int(exact.total_cost()),
                brute_min_arborescence(&g),
            )?;
            let game = CoalitionGame::new(&g, DEFAULT_ENUMERATION_LIMIT).map_err(|e| e.to_string())?;
            let phi = game.shapley(Execution::Parallel);
            eq(&format!("seed {seed} {k}: sum phi"), phi.total(), game.grand_value().clone())?;
            if g.node_count() <= COALITION_MAX_NODES {
                brute += 1;
                for (set, v) in brute_coalition_values(&g) {
                    let s: BTreeSet<NodeId> = set.iter().map(|x| n(x)).collect();
                    eq(&format!("seed {seed} {k}: v({set:?})"), int(&coalition_value(&g, &s).unwrap()), v)?;
                    eq(&format!("seed {seed} {k}: table v({set:?})"), int(game.value(&s).unwrap()), v)?;
                }
            }
        }
    }
    Ok(format!(
        "{graphs} graphs; greedy equals exact on {greedy_equal}, strictly above on {}; coalition brute force on {brute}",
        graphs - greedy_equal
    ))
}

fn criterion_7(instances: &[(u64, Instance)]) -> Check {
    for (seed, inst) in instances {
        let reports = ReportProfile::truthful(inst);
        let out = Mechanism::shortest_path().run(inst, &reports).map_err(|e| e.to_string())?;
        let g = induce(inst, &reports, &out.selection.winner).map_err(|e| e.to_string())?;
        let ShareDetail::ShortestPath(d) = &out.detail else {
            return Err("missing path decomposition".into());
        };
        let f = &out.selected_edges;
        let reachable = g.reachable_set();
        // One entering edge per reachable agent, none into the source.
        let mut entering: BTreeMap<&NodeId, usize> = BTreeMap::new();
        for e in f {
            *entering.entry(&e.to).or_default() += 1;
        }
        ensure(
            entering.len() == reachable.len() - 1 && entering.values().all(|&c| c == 1),
            || format!("seed {seed}: f is not one edge per node"),
        )?;
        ensure(!entering.contains_key(g.source_id()), || format!("seed {seed}: edge into source"))?;
        // Everything reachable from the source through f alone.
        let mut seen = BTreeSet::from([g.source_id().clone()]);
        loop {
            let before = seen.len();
            for e in f {
                if seen.contains(&e.from) {
                    seen.insert(e.to.clone());
                }
            }
            if seen.len() == before {
                break;
            }
        }
        eq(&format!("seed {seed}: f spans"), &seen, &reachable)?;
        let sum: Cost = f
            .iter()
            .map(|e| {
                let (a, b) = (g.index_of(&e.from).unwrap(), g.index_of(&e.to).unwrap());
                g.weight(a, b).unwrap().clone()
            })
            .sum();
        eq(&format!("seed {seed}: cost of f"), sum, d.total.clone())?;
    }
    Ok(format!("{} instances", instances.len()))
}

fn main() {
    let instances = sweep();
    let results: Vec<(&str, Check)> = vec![
        ("1 worked example (shortest-path)", criterion_1()),
        ("2 Shapley counterexample", criterion_2()),
        ("3 Bird counterexample", criterion_3()),
        ("4 property sweep", criterion_4(&instances)),
        ("5 truthfulness audit", criterion_5(&instances)),
        ("6 oracle equivalence", criterion_6()),
        ("7 structural invariant", criterion_7(&instances)),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
