use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Instance, NodeId};

/// Accepts iff every instance invariant holds, otherwise reports the first
/// violation in this order: structure of the node set, per-edge checks,
/// acyclicity, contractor count, then each contractor's weight map.
pub fn validate_instance(instance: &Instance) -> Result<()> {
    let dag = instance.dag();
    if dag.agents().contains(dag.source()) {
        return Err(Error::DuplicateNode(dag.source().clone()));
    }
    if dag.agents().is_empty() {
        return Err(Error::NoAgents);
    }
    for edge in dag.edges() {
        if edge.from == edge.to {
            return Err(Error::SelfLoop(edge.clone()));
        }
        if !dag.contains_node(&edge.from) || !dag.contains_node(&edge.to) {
            return Err(Error::UnknownEndpoint(edge.clone()));
        }
        if &edge.to == dag.source() {
            return Err(Error::EdgeIntoSource(edge.clone()));
        }
    }
    if let Some(node) = find_cycle(instance) {
        return Err(Error::CycleDetected(node));
    }
    if instance.contractor_count() < 2 {
        return Err(Error::TooFewContractors(instance.contractor_count()));
    }
    for contractor in instance.contractors() {
        if let Some(edge) = contractor.weights.keys().find(|e| !dag.edges().contains(*e)) {
            return Err(Error::UnknownEdge {
                contractor: contractor.owner.clone(),
                edge: edge.clone(),
            });
        }
        if let Some(edge) = dag.edges().iter().find(|e| !contractor.weights.contains_key(*e)) {
            return Err(Error::WeightMapIncomplete {
                contractor: contractor.owner.clone(),
                edge: edge.clone(),
            });
        }
        if let Some((edge, _)) = contractor.weights.iter().find(|(_, c)| !c.is_positive()) {
            return Err(Error::WeightNotPositive {
                contractor: contractor.owner.clone(),
                edge: edge.clone(),
            });
        }
    }
    Ok(())
}

/// Kahn's algorithm; returns the smallest node left on a cycle, if any.
fn find_cycle(instance: &Instance) -> Option<NodeId> {
    let dag = instance.dag();
    let mut indegree: BTreeMap<&NodeId, usize> = dag.nodes().map(|n| (n, 0)).collect();
    for edge in dag.edges() {
        *indegree.get_mut(&edge.to)? += 1;
    }
    let mut ready: Vec<&NodeId> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(n, _)| *n)
        .collect();
    let mut removed = BTreeSet::new();
    while let Some(node) = ready.pop() {
        removed.insert(node);
        for edge in dag.edges().iter().filter(|e| &e.from == node) {
            let d = indegree.get_mut(&edge.to)?;
            *d -= 1;
            if *d == 0 {
                ready.push(&edge.to);
            }
        }
    }
    dag.nodes().find(|n| !removed.contains(n)).cloned()
}
