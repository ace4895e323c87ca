//! The connection-cost game and its Shapley value.
//!
//! `v(S)` is the cheapest way to connect every member of `S` to the source.
//! Connections may pass through agents outside `S` (a directed Steiner
//! connection). Both routes below compute it exactly by enumerating the node
//! set `U ⊇ S` that the connection uses: on a DAG, the cheapest connection
//! of exactly `U` picks, for each member, its cheapest entering edge from
//! the source or from another member of `U`.

use std::collections::{BTreeMap, BTreeSet};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::graph::{InducedGraph, NodeId};

/// Default cap on reachable agents for exact Shapley enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 12;

/// A coalition together with its connection cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalitionValue {
    pub coalition: BTreeSet<NodeId>,
    pub value: Cost,
}

/// Exact Shapley values over the reachable agents.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ShapleyVector {
    pub values: BTreeMap<NodeId, Cost>,
}

impl ShapleyVector {
    pub fn get(&self, node: &NodeId) -> Option<&Cost> {
        self.values.get(node)
    }

    pub fn total(&self) -> Cost {
        self.values.values().sum()
    }
}

/// Reachable agents as game players, with bit positions.
struct Players<'g> {
    graph: &'g InducedGraph,
    nodes: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl<'g> Players<'g> {
    fn new(graph: &'g InducedGraph) -> Self {
        let nodes = graph.reachable_agents();
        let mut position = vec![None; graph.node_count()];
        for (p, &v) in nodes.iter().enumerate() {
            position[v] = Some(p);
        }
        Players {
            graph,
            nodes,
            position,
        }
    }

    fn mask_of(&self, coalition: &BTreeSet<NodeId>) -> Result<u64> {
        let mut mask = 0u64;
        for node in coalition {
            let v = self.graph.index_of(node)?;
            let p = self.position[v].ok_or_else(|| Error::UnreachableMember(node.clone()))?;
            mask |= 1 << p;
        }
        Ok(mask)
    }

    /// Cheapest connection using exactly the players in `mask`, or `None`
    /// when some member has no entering edge from inside.
    fn exact_connection(&self, mask: u64) -> Option<Cost> {
        let mut total = Cost::zero();
        for (p, &v) in self.nodes.iter().enumerate() {
            if mask & (1 << p) == 0 {
                continue;
            }
            let best = self
                .graph
                .in_edges(v)
                .iter()
                .map(|&e| self.graph.edge(e))
                .filter(|e| {
                    e.from == InducedGraph::SOURCE
                        || self.position[e.from].is_some_and(|q| mask & (1 << q) != 0)
                })
                .map(|e| &e.cost)
                .min()?;
            total += best;
        }
        Some(total)
    }
}

/// `v(coalition)` by direct enumeration of the supersets of the coalition
/// within the reachable agents.
pub fn coalition_value(graph: &InducedGraph, coalition: &BTreeSet<NodeId>) -> Result<Cost> {
    let players = Players::new(graph);
    let base = players.mask_of(coalition)?;
    let all = (1u64 << players.nodes.len()) - 1;
    let free = all & !base;
    let mut best: Option<Cost> = None;
    // Enumerate every subset of the free players.
    let mut extra = free;
    loop {
        if let Some(c) = players.exact_connection(base | extra) {
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
        if extra == 0 {
            break;
        }
        extra = (extra - 1) & free;
    }
    Ok(best.expect("connecting every reachable agent is always feasible"))
}

/// The full table of `v` over all coalitions of reachable agents, shared
/// read-only once built.
pub struct CoalitionGame<'g> {
    players: Players<'g>,
    values: Vec<Cost>,
}

impl<'g> CoalitionGame<'g> {
    /// Builds the table for at most `limit` reachable agents.
    pub fn new(graph: &'g InducedGraph, limit: usize) -> Result<Self> {
        let players = Players::new(graph);
        let m = players.nodes.len();
        if m > limit || m >= 63 {
            return Err(Error::TooManyNodes { count: m, limit });
        }
        let size = 1usize << m;
        let mut values: Vec<Option<Cost>> = (0..size as u64)
            .map(|mask| players.exact_connection(mask))
            .collect();
        // Superset minimum: v(S) = min over U ⊇ S of the exact cost of U.
        for bit in 0..m {
            for mask in 0..size {
                if mask & (1 << bit) == 0 {
                    let with = values[mask | (1 << bit)].clone();
                    if let Some(w) = with {
                        if values[mask].as_ref().is_none_or(|cur| w < *cur) {
                            values[mask] = Some(w);
                        }
                    }
                }
            }
        }
        let values = values
            .into_iter()
            .map(|v| v.expect("the grand coalition is always connectable"))
            .collect();
        Ok(CoalitionGame { players, values })
    }

    pub fn player_count(&self) -> usize {
        self.players.nodes.len()
    }

    /// Player ids in bit order.
    pub fn players(&self) -> Vec<&NodeId> {
        self.players
            .nodes
            .iter()
            .map(|&v| self.players.graph.id(v))
            .collect()
    }

    pub fn value_of_mask(&self, mask: u64) -> &Cost {
        &self.values[mask as usize]
    }

    pub fn value(&self, coalition: &BTreeSet<NodeId>) -> Result<&Cost> {
        Ok(self.value_of_mask(self.players.mask_of(coalition)?))
    }

    pub fn grand_value(&self) -> &Cost {
        self.values.last().expect("table has at least the empty coalition")
    }

    /// Every coalition with its value, in mask order.
    pub fn all_values(&self) -> Vec<CoalitionValue> {
        (0..self.values.len() as u64)
            .map(|mask| CoalitionValue {
                coalition: self
                    .players
                    .nodes
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| mask & (1 << p) != 0)
                    .map(|(_, &v)| self.players.graph.id(v).clone())
                    .collect(),
                value: self.values[mask as usize].clone(),
            })
            .collect()
    }

    /// Shapley value of every player, one player per work item.
    pub fn shapley(&self, execution: Execution) -> ShapleyVector {
        let m = self.player_count();
        // weight[k] = k! (m - k - 1)! / m!
        let factorial = |n: usize| -> Cost { (1..=n as i64).map(Cost::integer).fold(Cost::integer(1), |a, b| a * b) };
        let weights: Vec<Cost> = (0..m)
            .map(|k| &(&factorial(k) * &factorial(m - k - 1)) / &factorial(m))
            .collect();
        let positions: Vec<usize> = (0..m).collect();
        let phis = map_ordered(execution, &positions, |&p| {
            let bit = 1u64 << p;
            let mut phi = Cost::zero();
            for mask in 0..(1u64 << m) {
                if mask & bit != 0 {
                    continue;
                }
                let marginal = self.value_of_mask(mask | bit) - self.value_of_mask(mask);
                if !marginal.is_zero() {
                    phi += &(&weights[mask.count_ones() as usize] * &marginal);
                }
            }
            phi
        });
        ShapleyVector {
            values: self
                .players
                .nodes
                .iter()
                .zip(phis)
                .map(|(&v, phi)| (self.players.graph.id(v).clone(), phi))
                .collect(),
        }
    }
}

/// Shapley values of the reachable agents with the default enumeration
/// limit.
pub fn shapley_values(graph: &InducedGraph) -> Result<ShapleyVector> {
    Ok(CoalitionGame::new(graph, DEFAULT_ENUMERATION_LIMIT)?.shapley(Execution::default()))
}
