//! Ground-truth instances, report profiles and induced graphs.
//!
//! An [`Instance`] is the true world: a DAG rooted at a source plus one cost
//! vector per contractor. A [`ReportProfile`] is what the participants
//! declare. Each node reports a subset of its outgoing edges and each
//! contractor reports a cost for every reported edge. Mechanisms never look
//! at the instance directly; they work on the [`InducedGraph`] of one
//! contractor's reports.

mod format;
mod generate;
mod induced;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cost::Cost;
use crate::error::{Error, Result};

pub use format::{parse_instance, parse_overlay, serialize_instance, serialize_overlay};
pub use generate::{generate_instance, node_label, GeneratorParams};
pub use induced::{induce, InducedGraph, WeightedEdge};
pub use validate::validate_instance;

/// Identifier of a node. Ordering is the tie-breaking order used throughout.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(id: &str) -> Self {
        NodeId::new(id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContractorId(String);

impl ContractorId {
    pub fn new(id: impl Into<String>) -> Self {
        ContractorId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ContractorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ContractorId {
    fn from(id: &str) -> Self {
        ContractorId::new(id)
    }
}

/// A directed connection `from -> to`, keyed by node pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
}

impl Edge {
    pub fn new(from: impl Into<NodeId>, to: impl Into<NodeId>) -> Self {
        Edge {
            from: from.into(),
            to: to.into(),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.from, self.to)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    source: NodeId,
    agents: BTreeSet<NodeId>,
    edges: BTreeSet<Edge>,
}

impl Dag {
    /// Builds the graph without checking it; see [`validate_instance`].
    pub fn new(
        source: NodeId,
        agents: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Self {
        Dag {
            source,
            agents: agents.into_iter().collect(),
            edges: edges.into_iter().collect(),
        }
    }

    pub fn source(&self) -> &NodeId {
        &self.source
    }

    pub fn agents(&self) -> &BTreeSet<NodeId> {
        &self.agents
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// Source first, then agents in id order.
    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        std::iter::once(&self.source).chain(self.agents.iter())
    }

    pub fn contains_node(&self, node: &NodeId) -> bool {
        *node == self.source || self.agents.contains(node)
    }

    pub fn outgoing(&self, node: &NodeId) -> BTreeSet<Edge> {
        self.edges
            .iter()
            .filter(|e| &e.from == node)
            .cloned()
            .collect()
    }
}

/// A node's private type: the edges it could offer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeType {
    pub owner: NodeId,
    pub outgoing: BTreeSet<Edge>,
}

/// A contractor's private type: its cost for building each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractorType {
    pub owner: ContractorId,
    pub weights: BTreeMap<Edge, Cost>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    dag: Dag,
    contractors: BTreeMap<ContractorId, ContractorType>,
}

impl Instance {
    /// Builds the instance without checking it; see [`validate_instance`].
    pub fn new(dag: Dag, contractors: impl IntoIterator<Item = ContractorType>) -> Self {
        let contractors = contractors
            .into_iter()
            .map(|c| (c.owner.clone(), c))
            .collect();
        Instance { dag, contractors }
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn source(&self) -> &NodeId {
        &self.dag.source
    }

    pub fn contractor_ids(&self) -> impl Iterator<Item = &ContractorId> {
        self.contractors.keys()
    }

    pub fn contractors(&self) -> impl Iterator<Item = &ContractorType> {
        self.contractors.values()
    }

    pub fn contractor(&self, id: &ContractorId) -> Result<&ContractorType> {
        self.contractors
            .get(id)
            .ok_or_else(|| Error::UnknownContractor(id.clone()))
    }

    pub fn contractor_count(&self) -> usize {
        self.contractors.len()
    }

    /// True cost of `edge` for contractor `k`.
    pub fn true_cost(&self, k: &ContractorId, edge: &Edge) -> Result<&Cost> {
        let contractor = self.contractor(k)?;
        contractor
            .weights
            .get(edge)
            .ok_or_else(|| Error::WeightMapIncomplete {
                contractor: k.clone(),
                edge: edge.clone(),
            })
    }

    pub fn node_type(&self, node: &NodeId) -> Result<NodeType> {
        if !self.dag.contains_node(node) {
            return Err(Error::UnknownNode(node.clone()));
        }
        Ok(NodeType {
            owner: node.clone(),
            outgoing: self.dag.outgoing(node),
        })
    }

    /// One type per node, source included.
    pub fn node_types(&self) -> Vec<NodeType> {
        self.dag
            .nodes()
            .map(|n| NodeType {
                owner: n.clone(),
                outgoing: self.dag.outgoing(n),
            })
            .collect()
    }
}

/// The declared part of a profile: node edge offers and contractor costs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportProfile {
    node_reports: BTreeMap<NodeId, BTreeSet<Edge>>,
    contractor_reports: BTreeMap<ContractorId, BTreeMap<Edge, Cost>>,
}

impl ReportProfile {
    /// Everyone reports their full type.
    pub fn truthful(instance: &Instance) -> Self {
        let node_reports = instance
            .node_types()
            .into_iter()
            .map(|t| (t.owner, t.outgoing))
            .collect();
        let contractor_reports = instance
            .contractors()
            .map(|c| (c.owner.clone(), c.weights.clone()))
            .collect();
        ReportProfile {
            node_reports,
            contractor_reports,
        }
    }

    pub fn from_parts(
        node_reports: BTreeMap<NodeId, BTreeSet<Edge>>,
        contractor_reports: BTreeMap<ContractorId, BTreeMap<Edge, Cost>>,
    ) -> Self {
        ReportProfile {
            node_reports,
            contractor_reports,
        }
    }

    pub fn node_reports(&self) -> &BTreeMap<NodeId, BTreeSet<Edge>> {
        &self.node_reports
    }

    pub fn contractor_reports(&self) -> &BTreeMap<ContractorId, BTreeMap<Edge, Cost>> {
        &self.contractor_reports
    }

    pub fn node_report(&self, node: &NodeId) -> Option<&BTreeSet<Edge>> {
        self.node_reports.get(node)
    }

    pub fn contractor_report(&self, k: &ContractorId) -> Result<&BTreeMap<Edge, Cost>> {
        self.contractor_reports
            .get(k)
            .ok_or_else(|| Error::UnknownContractor(k.clone()))
    }

    /// The union of all node reports.
    pub fn reported_edges(&self) -> BTreeSet<Edge> {
        self.node_reports.values().flatten().cloned().collect()
    }

    /// Replaces `node`'s report with `kept` and drops contractor costs for
    /// the withdrawn edges, keeping every contractor report aligned with the
    /// reported edge union.
    pub fn with_node_report(&self, node: &NodeId, kept: BTreeSet<Edge>) -> Self {
        let mut next = self.clone();
        let withdrawn: Vec<Edge> = self
            .node_reports
            .get(node)
            .map(|r| r.difference(&kept).cloned().collect())
            .unwrap_or_default();
        next.node_reports.insert(node.clone(), kept);
        for costs in next.contractor_reports.values_mut() {
            for edge in &withdrawn {
                costs.remove(edge);
            }
        }
        next
    }

    pub fn with_contractor_report(&self, k: &ContractorId, costs: BTreeMap<Edge, Cost>) -> Self {
        let mut next = self.clone();
        next.contractor_reports.insert(k.clone(), costs);
        next
    }

    /// Checks the profile against the instance: node reports are subsets of
    /// true types, and contractor reports cover exactly the reported union
    /// with strictly positive costs.
    pub fn validate(&self, instance: &Instance) -> Result<()> {
        for (node, report) in &self.node_reports {
            let truth = instance.node_type(node)?;
            if let Some(extra) = report.difference(&truth.outgoing).next() {
                return Err(Error::InvalidReport(format!(
                    "node {node} reports edge {extra} outside its type"
                )));
            }
        }
        for node in instance.dag().nodes() {
            if !self.node_reports.contains_key(node) {
                return Err(Error::InvalidReport(format!("node {node} has no report")));
            }
        }
        if *self.node_report(instance.source()).unwrap_or(&BTreeSet::new())
            != instance.dag().outgoing(instance.source())
        {
            return Err(Error::InvalidReport(
                "the source must report its full type".to_string(),
            ));
        }
        let union = self.reported_edges();
        for k in instance.contractor_ids() {
            let costs = self.contractor_report(k)?;
            if let Some(edge) = union.iter().find(|e| !costs.contains_key(*e)) {
                return Err(Error::InvalidReport(format!(
                    "contractor {k} reports no cost for reported edge {edge}"
                )));
            }
            if let Some(edge) = costs.keys().find(|e| !union.contains(*e)) {
                return Err(Error::InvalidReport(format!(
                    "contractor {k} reports a cost for unreported edge {edge}"
                )));
            }
            if let Some((edge, _)) = costs.iter().find(|(_, c)| !c.is_positive()) {
                return Err(Error::InvalidReport(format!(
                    "contractor {k} reports a non-positive cost on {edge}"
                )));
            }
        }
        if let Some(k) = self
            .contractor_reports
            .keys()
            .find(|k| instance.contractor(k).is_err())
        {
            return Err(Error::UnknownContractor(k.clone()));
        }
        Ok(())
    }
}
