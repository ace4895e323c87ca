//! Independent brute-force oracles and instance sweeps shared by the
//! integration tests. Nothing here calls the library's algorithms; it only
//! reads graphs through the public accessors.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use dagshare::graph::{generate_instance, GeneratorParams};
use dagshare::{parse_instance, Cost, InducedGraph, Instance};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> Instance {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_instance(&text).unwrap()
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn int(c: &Cost) -> i64 {
    c.to_string()
        .parse()
        .unwrap_or_else(|_| panic!("oracle expects integer costs, got {c}"))
}

/// Sweep instance for `seed`: 2..=8 agents, 2 or 3 contractors.
pub fn sweep_params(seed: u64) -> GeneratorParams {
    GeneratorParams {
        seed,
        nodes: 2 + (seed as usize % 7),
        contractors: 2 + (seed as usize % 2),
        edge_density: 0.5,
        cost_range: (1, 20),
    }
}

pub fn sweep() -> Vec<(u64, Instance)> {
    (1..=100)
        .map(|seed| (seed, generate_instance(&sweep_params(seed)).unwrap()))
        .collect()
}

/// Plain integer adjacency: (from, to, cost) with node 0 the source.
pub fn int_edges(graph: &InducedGraph) -> Vec<(usize, usize, i64)> {
    graph
        .edges()
        .iter()
        .map(|e| (e.from, e.to, int(&e.cost)))
        .collect()
}

/// Nodes reachable from the source using only `edges` selected by `mask`.
fn reach(n: usize, edges: &[(usize, usize, i64)], mask: u64) -> u64 {
    let mut seen = 1u64;
    loop {
        let mut grown = seen;
        for (b, &(f, t, _)) in edges.iter().enumerate() {
            if mask & (1 << b) != 0 && seen & (1 << f) != 0 {
                grown |= 1 << t;
            }
        }
        if grown == seen {
            return seen & ((1 << n) - 1);
        }
        seen = grown;
    }
}

/// v(S) for every node set S (bit i = node i, bit 0 unused) reachable by
/// some edge subset: the minimum total cost of an edge subset connecting
/// every member of S to the source.
pub fn brute_coalition_values(graph: &InducedGraph) -> BTreeMap<BTreeSet<String>, i64> {
    let n = graph.node_count();
    let edges = int_edges(graph);
    assert!(edges.len() <= 24, "too many edges for subset enumeration");
    // Cheapest subset whose reachable set is exactly R.
    let mut by_reach: BTreeMap<u64, i64> = BTreeMap::new();
    for mask in 0..(1u64 << edges.len()) {
        let cost: i64 = edges
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .map(|(_, e)| e.2)
            .sum();
        let r = reach(n, &edges, mask);
        let best = by_reach.entry(r).or_insert(i64::MAX);
        *best = (*best).min(cost);
    }
    let reachable = by_reach.keys().fold(0u64, |a, r| a | r);
    let agents: Vec<usize> = (1..n).filter(|v| reachable & (1 << v) != 0).collect();
    let mut out = BTreeMap::new();
    for sub in 0..(1u64 << agents.len()) {
        let s: u64 = agents
            .iter()
            .enumerate()
            .filter(|(p, _)| sub & (1 << p) != 0)
            .map(|(_, &v)| 1u64 << v)
            .sum();
        let v = by_reach
            .iter()
            .filter(|(r, _)| *r & s == s)
            .map(|(_, c)| *c)
            .min()
            .unwrap();
        let names = agents
            .iter()
            .filter(|&&v| s & (1 << v) != 0)
            .map(|&v| graph.id(v).to_string())
            .collect();
        out.insert(names, v);
    }
    out
}

/// Minimum arborescence over the reachable set by trying every combination
/// of one entering edge per reachable agent and keeping the ones that
/// actually connect everything.
pub fn brute_min_arborescence(graph: &InducedGraph) -> i64 {
    let n = graph.node_count();
    let edges = int_edges(graph);
    let all = reach(n, &edges, u64::MAX >> (64 - edges.len().max(1)));
    let agents: Vec<usize> = (1..n).filter(|v| all & (1 << v) != 0).collect();
    let choices: Vec<Vec<usize>> = agents
        .iter()
        .map(|&v| (0..edges.len()).filter(|&e| edges[e].1 == v).collect())
        .collect();
    let mut best = i64::MAX;
    let mut pick = vec![0usize; agents.len()];
    loop {
        let mask: u64 = pick
            .iter()
            .zip(&choices)
            .map(|(&p, c)| 1u64 << c[p])
            .sum();
        if reach(n, &edges, mask) == all {
            let cost: i64 = pick.iter().zip(&choices).map(|(&p, c)| edges[c[p]].2).sum();
            best = best.min(cost);
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == pick.len() {
                return if agents.is_empty() { 0 } else { best };
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// All simple directed paths from `from` to `to` as node sequences.
pub fn all_paths(graph: &InducedGraph, from: usize, to: usize) -> Vec<Vec<usize>> {
    fn walk(g: &InducedGraph, at: usize, to: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == to {
            out.push(path.clone());
            return;
        }
        for &e in g.out_edges(at) {
            let next = g.edge(e).to;
            path.push(next);
            walk(g, next, to, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(graph, from, to, &mut vec![from], &mut out);
    out
}

pub fn path_cost(graph: &InducedGraph, weights: &[Cost], path: &[usize]) -> Cost {
    path.windows(2)
        .map(|w| weights[graph.edge_index(w[0], w[1]).unwrap()].clone())
        .sum()
}

/// Minimum original-weight distance from any node of `from` to `to`.
pub fn distance_from_set(graph: &InducedGraph, from: &BTreeSet<usize>, to: usize) -> Option<Cost> {
    let w = graph.weights();
    from.iter()
        .flat_map(|&u| all_paths(graph, u, to))
        .map(|p| path_cost(graph, &w, &p))
        .min()
}
