//! Spanning arborescences, depths and shortest paths on induced graphs.
//!
//! All routines address nodes by the dense indices of [`InducedGraph`] and
//! break ties deterministically, so identical inputs give identical outputs.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{Edge, InducedGraph, NodeId};

/// A tree directed away from the source, given by one entering edge per
/// covered node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arborescence {
    entering: Vec<Option<usize>>,
    total_cost: Cost,
}

impl Arborescence {
    fn from_entering(graph: &InducedGraph, entering: Vec<Option<usize>>) -> Self {
        let total_cost = entering
            .iter()
            .flatten()
            .map(|&e| &graph.edge(e).cost)
            .sum();
        Arborescence {
            entering,
            total_cost,
        }
    }

    pub fn root(&self) -> usize {
        InducedGraph::SOURCE
    }

    pub fn total_cost(&self) -> &Cost {
        &self.total_cost
    }

    /// Edge index entering `node`; `None` for the root and uncovered nodes.
    pub fn entering_edge(&self, node: usize) -> Option<usize> {
        self.entering.get(node).copied().flatten()
    }

    pub fn is_covered(&self, node: usize) -> bool {
        node == InducedGraph::SOURCE || self.entering_edge(node).is_some()
    }

    /// Covered nodes, root included, in index order.
    pub fn covered(&self) -> Vec<usize> {
        (0..self.entering.len())
            .filter(|&v| self.is_covered(v))
            .collect()
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entering.iter().flatten().copied()
    }

    pub fn edges(&self, graph: &InducedGraph) -> BTreeSet<Edge> {
        self.edge_indices().map(|e| graph.edge_key(e)).collect()
    }

    /// Covered node id to its entering edge.
    pub fn entering_edges(&self, graph: &InducedGraph) -> BTreeMap<NodeId, Edge> {
        self.entering
            .iter()
            .enumerate()
            .filter_map(|(v, e)| e.map(|e| (graph.id(v).clone(), graph.edge_key(e))))
            .collect()
    }
}

/// Greedy growth from the source: repeatedly take the cheapest edge from the
/// covered set to an uncovered node, ties broken by head index then tail
/// index. Covers exactly the reachable set.
///
/// On directed graphs this need not be a minimum arborescence; compare with
/// [`exact_min_arborescence`].
pub fn prim_arborescence(graph: &InducedGraph) -> Arborescence {
    let n = graph.node_count();
    let mut entering = vec![None; n];
    let mut covered = vec![false; n];
    covered[InducedGraph::SOURCE] = true;
    let mut frontier = BinaryHeap::new();
    let push = |frontier: &mut BinaryHeap<_>, v: usize, covered: &[bool]| {
        for &e in graph.out_edges(v) {
            let edge = graph.edge(e);
            if !covered[edge.to] {
                frontier.push(Reverse((edge.cost.clone(), edge.to, edge.from, e)));
            }
        }
    };
    push(&mut frontier, InducedGraph::SOURCE, &covered);
    while let Some(Reverse((_, to, _, e))) = frontier.pop() {
        if covered[to] {
            continue;
        }
        covered[to] = true;
        entering[to] = Some(e);
        push(&mut frontier, to, &covered);
    }
    Arborescence::from_entering(graph, entering)
}

/// A minimum-cost spanning arborescence of the reachable set.
///
/// In a DAG any choice of one entering edge per reachable node, taken from a
/// reachable parent, is an arborescence: following entering edges backwards
/// strictly descends a topological order and must end at the source. The
/// optimum is therefore the cheapest such edge per node (ties by tail).
pub fn exact_min_arborescence(graph: &InducedGraph) -> Arborescence {
    let entering = (0..graph.node_count())
        .map(|v| {
            if v == InducedGraph::SOURCE || !graph.is_reachable(v) {
                return None;
            }
            graph
                .in_edges(v)
                .iter()
                .copied()
                .filter(|&e| graph.is_reachable(graph.edge(e).from))
                .min_by(|&a, &b| {
                    let (ea, eb) = (graph.edge(a), graph.edge(b));
                    ea.cost.cmp(&eb.cost).then(ea.from.cmp(&eb.from))
                })
        })
        .collect();
    Arborescence::from_entering(graph, entering)
}

/// Hop-count distance from the source, indexed by node. Unreachable nodes
/// are `None`.
pub fn depth_vector(graph: &InducedGraph) -> Vec<Option<usize>> {
    let mut depth = vec![None; graph.node_count()];
    depth[InducedGraph::SOURCE] = Some(0);
    let mut queue = VecDeque::from([InducedGraph::SOURCE]);
    while let Some(v) = queue.pop_front() {
        let next = depth[v].map(|d| d + 1);
        for &e in graph.out_edges(v) {
            let to = graph.edge(e).to;
            if depth[to].is_none() {
                depth[to] = next;
                queue.push_back(to);
            }
        }
    }
    depth
}

/// Breadth-first depths of every reachable node.
pub fn bfs_depths(graph: &InducedGraph) -> BTreeMap<NodeId, usize> {
    depth_vector(graph)
        .into_iter()
        .enumerate()
        .filter_map(|(v, d)| d.map(|d| (graph.id(v).clone(), d)))
        .collect()
}

/// A directed path from the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathResult {
    pub target: usize,
    pub cost: Cost,
    /// Edge indices in path order.
    pub edges: Vec<usize>,
    /// Node indices in path order, starting at the source.
    pub nodes: Vec<usize>,
}

impl PathResult {
    pub fn node_ids<'g>(&self, graph: &'g InducedGraph) -> Vec<&'g NodeId> {
        self.nodes.iter().map(|&v| graph.id(v)).collect()
    }

    pub fn edge_keys(&self, graph: &InducedGraph) -> Vec<Edge> {
        self.edges.iter().map(|&e| graph.edge_key(e)).collect()
    }
}

/// Minimum-cost path from the source to `target` under `weights` (one entry
/// per edge index, all non-negative). Among equal-cost paths the
/// lexicographically smallest node sequence wins.
pub fn shortest_path_from_source(
    weights: &[Cost],
    graph: &InducedGraph,
    target: usize,
) -> Result<PathResult> {
    assert_eq!(weights.len(), graph.edges().len(), "one weight per edge");
    if target >= graph.node_count() {
        return Err(Error::UnknownNode(NodeId::new(format!("#{target}"))));
    }
    let n = graph.node_count();
    let mut dist: Vec<Option<Cost>> = vec![None; n];
    let mut done = vec![false; n];
    dist[InducedGraph::SOURCE] = Some(Cost::zero());
    let mut heap = BinaryHeap::from([Reverse((Cost::zero(), InducedGraph::SOURCE))]);
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &e in graph.out_edges(v) {
            let to = graph.edge(e).to;
            let candidate = &d + &weights[e];
            if dist[to].as_ref().is_none_or(|cur| candidate < *cur) {
                dist[to] = Some(candidate.clone());
                heap.push(Reverse((candidate, to)));
            }
        }
    }
    let Some(cost) = dist[target].clone() else {
        return Err(Error::Unreachable(graph.id(target).clone()));
    };

    let tight = |e: usize| -> bool {
        let edge = graph.edge(e);
        match (&dist[edge.from], &dist[edge.to]) {
            (Some(du), Some(dv)) => &(du + &weights[e]) == dv,
            _ => false,
        }
    };
    // Nodes that reach the target along tight edges.
    let mut leads = vec![false; n];
    leads[target] = true;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for &e in graph.in_edges(v) {
            let from = graph.edge(e).from;
            if !leads[from] && tight(e) {
                leads[from] = true;
                queue.push_back(from);
            }
        }
    }

    let mut nodes = vec![InducedGraph::SOURCE];
    let mut edges = Vec::new();
    let mut current = InducedGraph::SOURCE;
    while current != target {
        // out_edges are sorted by head, so the first admissible edge has the
        // smallest next node.
        let e = graph
            .out_edges(current)
            .iter()
            .copied()
            .find(|&e| tight(e) && leads[graph.edge(e).to])
            .expect("a tight edge continues every shortest path");
        current = graph.edge(e).to;
        edges.push(e);
        nodes.push(current);
    }
    Ok(PathResult {
        target,
        cost,
        edges,
        nodes,
    })
}
