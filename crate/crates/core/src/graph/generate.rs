use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{ContractorId, ContractorType, Dag, Edge, Instance, NodeId};

/// Parameters for [`generate_instance`].
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub nodes: usize,
    pub contractors: usize,
    /// Probability that each forward pair in the hidden order gets an edge.
    pub edge_density: f64,
    /// Inclusive integer cost range, lower bound at least 1.
    pub cost_range: (u64, u64),
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            seed: 1,
            nodes: 5,
            contractors: 2,
            edge_density: 0.5,
            cost_range: (1, 20),
        }
    }
}

/// Spreadsheet-style label: 0 -> `A`, 25 -> `Z`, 26 -> `AA`.
pub fn node_label(mut index: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Draws a random valid instance.
///
/// Agents are placed in a hidden random topological order and edges only
/// run forward in it, so the result is acyclic. Every agent receives at
/// least one parent earlier in the order, so every agent is reachable from
/// the source. The same parameters always give the same instance.
pub fn generate_instance(params: &GeneratorParams) -> Result<Instance> {
    if params.nodes < 1 {
        return Err(Error::InfeasibleParameters("need at least 1 node".into()));
    }
    if params.contractors < 2 {
        return Err(Error::InfeasibleParameters(
            "need at least 2 contractors".into(),
        ));
    }
    if !(0.0..=1.0).contains(&params.edge_density) {
        return Err(Error::InfeasibleParameters(
            "edge density must lie in [0, 1]".into(),
        ));
    }
    let (lo, hi) = params.cost_range;
    if lo < 1 || lo > hi {
        return Err(Error::InfeasibleParameters(
            "cost range must satisfy 1 <= min <= max".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let source = NodeId::new("s");
    let mut agents: Vec<NodeId> = (0..params.nodes).map(|i| NodeId::new(node_label(i))).collect();
    agents.shuffle(&mut rng);
    let order: Vec<&NodeId> = std::iter::once(&source).chain(agents.iter()).collect();

    let mut edges = Vec::new();
    for to in 1..order.len() {
        let mut parents: Vec<usize> = (0..to)
            .filter(|_| rng.gen_bool(params.edge_density))
            .collect();
        if parents.is_empty() {
            parents.push(rng.gen_range(0..to));
        }
        edges.extend(parents.into_iter().map(|from| Edge::new(order[from].clone(), order[to].clone())));
    }
    edges.sort();

    let contractors: Vec<ContractorType> = (0..params.contractors)
        .map(|k| {
            let weights: BTreeMap<Edge, Cost> = edges
                .iter()
                .map(|e| (e.clone(), Cost::integer(rng.gen_range(lo..=hi) as i64)))
                .collect();
            ContractorType {
                owner: ContractorId::new(node_label(k).to_lowercase()),
                weights,
            }
        })
        .collect();

    Ok(Instance::new(Dag::new(source, agents, edges), contractors))
}
