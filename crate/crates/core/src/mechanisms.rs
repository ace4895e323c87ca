//! Contractor selection with second-price payment, and the three cost
//! sharing rules built on top of it.
//!
//! Every mechanism runs the same selection: each contractor's induced graph
//! gets a greedy spanning arborescence, the cheapest contractor wins and is
//! paid the second-cheapest arborescence cost. The mechanisms differ only in
//! how that payment is split among the reachable agents:
//!
//! * [`MechanismKind::Shapley`]: proportional to Shapley values of the
//!   connection game on the winner's graph.
//! * [`MechanismKind::Bird`]: proportional to each node's entering edge on
//!   the winner's arborescence.
//! * [`MechanismKind::ShortestPath`]: nodes are processed deepest first;
//!   each pays in proportion to the residual cost of its shortest path after
//!   the edges of earlier paths have been zeroed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algos::{depth_vector, exact_min_arborescence, prim_arborescence, shortest_path_from_source, Arborescence};
use crate::coalition::{CoalitionGame, ShapleyVector, DEFAULT_ENUMERATION_LIMIT};
use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{induce, validate_instance, ContractorId, Edge, InducedGraph, Instance, NodeId, ReportProfile};

/// Default depth-tie seed. The smallest seed under which the fig5 fixture
/// is processed in the order G,D,F,E,C,B,A.
pub const DEFAULT_TIE_SEED: u64 = 397;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MechanismKind {
    Shapley,
    Bird,
    ShortestPath,
}

impl MechanismKind {
    pub const ALL: [MechanismKind; 3] = [
        MechanismKind::Shapley,
        MechanismKind::Bird,
        MechanismKind::ShortestPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::Shapley => "shapley",
            MechanismKind::Bird => "bird",
            MechanismKind::ShortestPath => "shortest-path",
        }
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MechanismKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MechanismKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mechanism `{s}` (expected shapley, bird or shortest-path)"))
    }
}

/// A configured mechanism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mechanism {
    pub kind: MechanismKind,
    /// Permutes equal-depth nodes in the shortest-path rule.
    pub tie_seed: u64,
    /// Cap on reachable agents for the Shapley rule.
    pub shapley_limit: usize,
    pub execution: Execution,
}

impl Mechanism {
    pub fn new(kind: MechanismKind) -> Self {
        Mechanism {
            kind,
            tie_seed: DEFAULT_TIE_SEED,
            shapley_limit: DEFAULT_ENUMERATION_LIMIT,
            execution: Execution::default(),
        }
    }

    pub fn shapley() -> Self {
        Mechanism::new(MechanismKind::Shapley)
    }

    pub fn bird() -> Self {
        Mechanism::new(MechanismKind::Bird)
    }

    pub fn shortest_path() -> Self {
        Mechanism::new(MechanismKind::ShortestPath)
    }

    pub fn with_tie_seed(mut self, seed: u64) -> Self {
        self.tie_seed = seed;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn run(&self, instance: &Instance, reports: &ReportProfile) -> Result<Outcome> {
        match self.kind {
            MechanismKind::Shapley => {
                run_shapley_with(instance, reports, self.shapley_limit, self.execution)
            }
            MechanismKind::Bird => run_bird(instance, reports),
            MechanismKind::ShortestPath => run_shortest_path(instance, reports, self.tie_seed),
        }
    }
}

/// Winner, runner-up and every contractor's arborescence cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractorSelection {
    pub winner: ContractorId,
    pub runner_up: ContractorId,
    pub winner_cost: Cost,
    pub runner_up_cost: Cost,
    pub all_costs: BTreeMap<ContractorId, Cost>,
}

impl ContractorSelection {
    /// Second-price payments: the winner receives the runner-up cost
    /// (recorded as a negative amount), everyone else nothing.
    pub fn payments(&self) -> BTreeMap<ContractorId, Cost> {
        self.all_costs
            .keys()
            .map(|k| {
                let p = if *k == self.winner {
                    -self.runner_up_cost.clone()
                } else {
                    Cost::zero()
                };
                (k.clone(), p)
            })
            .collect()
    }
}

/// Entering-edge cost of every covered agent on the winner's arborescence.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BirdShares {
    pub entering_costs: BTreeMap<NodeId, Cost>,
}

/// One node's turn in the shortest-path rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub node: NodeId,
    /// Nodes already joined to the source at zero cost when this node is
    /// processed, source included.
    pub covered_before: BTreeSet<NodeId>,
    /// Residual path cost, the node's proportion numerator.
    pub residual_cost: Cost,
    pub path_nodes: Vec<NodeId>,
    pub path_edges: Vec<Edge>,
    /// Path edges whose cost was still positive before this step.
    pub newly_zeroed: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PathDecomposition {
    pub steps: Vec<PathStep>,
    /// Union of all path edges.
    pub accumulated: BTreeSet<Edge>,
    /// Sum of residual costs.
    pub total: Cost,
}

impl PathDecomposition {
    pub fn order(&self) -> Vec<&NodeId> {
        self.steps.iter().map(|s| &s.node).collect()
    }

    pub fn step(&self, node: &NodeId) -> Option<&PathStep> {
        self.steps.iter().find(|s| &s.node == node)
    }
}

/// Rule-specific intermediate results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShareDetail {
    Shapley(ShapleyVector),
    Bird(BirdShares),
    ShortestPath(PathDecomposition),
}

/// A complete mechanism result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub mechanism: MechanismKind,
    pub selection: ContractorSelection,
    pub payments: BTreeMap<ContractorId, Cost>,
    pub selected_edges: BTreeSet<Edge>,
    /// Shares of the agents reachable in the winner's graph.
    pub shares: BTreeMap<NodeId, Cost>,
    pub detail: ShareDetail,
    /// Non-fatal observations, e.g. greedy and exact arborescences differ.
    pub diagnostics: Vec<String>,
}

impl Outcome {
    pub fn share(&self, node: &NodeId) -> Option<&Cost> {
        self.shares.get(node)
    }

    pub fn total_shares(&self) -> Cost {
        self.shares.values().sum()
    }

    pub fn total_paid(&self) -> Cost {
        self.payments.values().map(Cost::abs).sum()
    }
}

/// State shared by all three rules after selection.
struct Selected {
    selection: ContractorSelection,
    winner_graph: InducedGraph,
    winner_tree: Arborescence,
    diagnostics: Vec<String>,
}

fn select(instance: &Instance, reports: &ReportProfile) -> Result<Selected> {
    if instance.contractor_count() < 2 {
        return Err(Error::TooFewContractors(instance.contractor_count()));
    }
    validate_instance(instance)?;
    reports.validate(instance)?;
    let mut diagnostics = Vec::new();
    let mut all_costs = BTreeMap::new();
    let mut best: Option<(ContractorId, InducedGraph, Arborescence)> = None;
    for k in instance.contractor_ids() {
        let graph = induce(instance, reports, k)?;
        let tree = prim_arborescence(&graph);
        let exact = exact_min_arborescence(&graph);
        if exact.total_cost() != tree.total_cost() {
            diagnostics.push(format!(
                "greedy arborescence of contractor {k} costs {}, the minimum is {}",
                tree.total_cost(),
                exact.total_cost()
            ));
        }
        all_costs.insert(k.clone(), tree.total_cost().clone());
        // Strict comparison keeps the smallest id among equal costs.
        if best
            .as_ref()
            .is_none_or(|(_, _, b)| tree.total_cost() < b.total_cost())
        {
            best = Some((k.clone(), graph, tree));
        }
    }
    let (winner, winner_graph, winner_tree) = best.expect("at least two contractors");
    let (runner_up, runner_up_cost) = all_costs
        .iter()
        .filter(|(k, _)| **k != winner)
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
        .map(|(k, c)| (k.clone(), c.clone()))
        .expect("at least two contractors");
    let selection = ContractorSelection {
        winner_cost: all_costs[&winner].clone(),
        winner,
        runner_up,
        runner_up_cost,
        all_costs,
    };
    Ok(Selected {
        selection,
        winner_graph,
        winner_tree,
        diagnostics,
    })
}

/// Per-contractor greedy arborescence costs, the cheapest contractor as
/// winner and the cheapest other contractor as runner-up. Ties go to the
/// smaller contractor id.
pub fn select_contractor(instance: &Instance, reports: &ReportProfile) -> Result<ContractorSelection> {
    select(instance, reports).map(|s| s.selection)
}

/// `numerator / denominator * amount`, or zero when the denominator is zero
/// (only possible when nobody is connected).
fn proportion(numerator: &Cost, denominator: &Cost, amount: &Cost) -> Cost {
    if denominator.is_zero() {
        Cost::zero()
    } else {
        &(numerator / denominator) * amount
    }
}

fn outcome(
    mechanism: MechanismKind,
    selected: Selected,
    selected_edges: BTreeSet<Edge>,
    shares: BTreeMap<NodeId, Cost>,
    detail: ShareDetail,
) -> Outcome {
    Outcome {
        mechanism,
        payments: selected.selection.payments(),
        selection: selected.selection,
        selected_edges,
        shares,
        detail,
        diagnostics: selected.diagnostics,
    }
}

pub fn run_shapley(instance: &Instance, reports: &ReportProfile) -> Result<Outcome> {
    run_shapley_with(instance, reports, DEFAULT_ENUMERATION_LIMIT, Execution::default())
}

/// Shapley rule. The proportion denominator is the sum of Shapley values,
/// which equals `v(V)`; a diagnostic records when that differs from the
/// winner's greedy arborescence cost.
pub fn run_shapley_with(
    instance: &Instance,
    reports: &ReportProfile,
    limit: usize,
    execution: Execution,
) -> Result<Outcome> {
    let mut selected = select(instance, reports)?;
    let game = CoalitionGame::new(&selected.winner_graph, limit)?;
    let phi = game.shapley(execution);
    let total = phi.total();
    if total != selected.selection.winner_cost {
        selected.diagnostics.push(format!(
            "Shapley values sum to {total}, winner arborescence costs {}",
            selected.selection.winner_cost
        ));
    }
    let pay = selected.selection.runner_up_cost.clone();
    let shares = phi
        .values
        .iter()
        .map(|(n, v)| (n.clone(), proportion(v, &total, &pay)))
        .collect();
    let edges = selected.winner_tree.edges(&selected.winner_graph);
    Ok(outcome(MechanismKind::Shapley, selected, edges, shares, ShareDetail::Shapley(phi)))
}

/// Bird rule: each node's proportion is its entering edge cost over the
/// winner's arborescence cost.
pub fn run_bird(instance: &Instance, reports: &ReportProfile) -> Result<Outcome> {
    let selected = select(instance, reports)?;
    let graph = &selected.winner_graph;
    let tree = &selected.winner_tree;
    let entering_costs: BTreeMap<NodeId, Cost> = graph
        .reachable_agents()
        .into_iter()
        .filter_map(|v| {
            tree.entering_edge(v)
                .map(|e| (graph.id(v).clone(), graph.edge(e).cost.clone()))
        })
        .collect();
    let pay = &selected.selection.runner_up_cost;
    let total = tree.total_cost();
    let shares = entering_costs
        .iter()
        .map(|(n, k)| (n.clone(), proportion(k, total, pay)))
        .collect();
    let edges = tree.edges(graph);
    Ok(outcome(
        MechanismKind::Bird,
        selected,
        edges,
        shares,
        ShareDetail::Bird(BirdShares { entering_costs }),
    ))
}

/// Reachable agents by descending depth, each depth class shuffled by a
/// generator seeded with `tie_seed` (starting from ascending id order).
pub fn processing_order(graph: &InducedGraph, tie_seed: u64) -> Vec<usize> {
    let depth = depth_vector(graph);
    let mut order = graph.reachable_agents();
    order.sort_by(|&a, &b| depth[b].cmp(&depth[a]).then(a.cmp(&b)));
    let mut rng = ChaCha8Rng::seed_from_u64(tie_seed);
    for class in order.chunk_by_mut(|&a, &b| depth[a] == depth[b]) {
        class.shuffle(&mut rng);
    }
    order
}

/// Runs the residual shortest-path decomposition on one graph.
pub fn decompose(graph: &InducedGraph, tie_seed: u64) -> PathDecomposition {
    let mut weights = graph.weights();
    let mut covered: BTreeSet<usize> = BTreeSet::from([InducedGraph::SOURCE]);
    let mut accumulated = BTreeSet::new();
    let mut total = Cost::zero();
    let mut steps = Vec::new();
    for v in processing_order(graph, tie_seed) {
        let path = shortest_path_from_source(&weights, graph, v)
            .expect("processing order only holds reachable nodes");
        let covered_before = covered.iter().map(|&u| graph.id(u).clone()).collect();
        let mut newly_zeroed = Vec::new();
        for &e in &path.edges {
            if !weights[e].is_zero() {
                newly_zeroed.push(graph.edge_key(e));
                weights[e] = Cost::zero();
            }
            accumulated.insert(graph.edge_key(e));
        }
        covered.extend(path.nodes.iter().copied());
        total += &path.cost;
        steps.push(PathStep {
            node: graph.id(v).clone(),
            covered_before,
            residual_cost: path.cost.clone(),
            path_nodes: path.node_ids(graph).into_iter().cloned().collect(),
            path_edges: path.edge_keys(graph),
            newly_zeroed,
        });
    }
    PathDecomposition {
        steps,
        accumulated,
        total,
    }
}

/// Shortest-path rule on the winner's graph; the selected edges are the
/// union of all processed paths.
pub fn run_shortest_path(instance: &Instance, reports: &ReportProfile, tie_seed: u64) -> Result<Outcome> {
    let selected = select(instance, reports)?;
    let decomposition = decompose(&selected.winner_graph, tie_seed);
    let pay = &selected.selection.runner_up_cost;
    let shares = decomposition
        .steps
        .iter()
        .map(|s| {
            (
                s.node.clone(),
                proportion(&s.residual_cost, &decomposition.total, pay),
            )
        })
        .collect();
    let edges = decomposition.accumulated.clone();
    Ok(outcome(
        MechanismKind::ShortestPath,
        selected,
        edges,
        shares,
        ShareDetail::ShortestPath(decomposition),
    ))
}

/// Utility of contractor `k`: for the winner, the payment received minus the
/// TRUE cost of building the selected edges; zero for everyone else.
pub fn contractor_utility(instance: &Instance, outcome: &Outcome, k: &ContractorId) -> Result<Cost> {
    instance.contractor(k)?;
    if *k != outcome.selection.winner {
        return Ok(Cost::zero());
    }
    let mut build = Cost::zero();
    for edge in &outcome.selected_edges {
        build += instance.true_cost(k, edge)?;
    }
    let received = outcome.payments.get(k).map(Cost::abs).unwrap_or_default();
    Ok(received - build)
}
