use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{ContractorId, Edge, Instance, NodeId, ReportProfile};

/// An edge of an [`InducedGraph`], addressed by dense node indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedEdge {
    pub from: usize,
    pub to: usize,
    pub cost: Cost,
}

/// The DAG restricted to reported edges and weighted by one contractor's
/// reported costs.
///
/// Nodes are addressed by dense indices: index 0 is the source and agents
/// follow in id order, so comparing indices agrees with comparing ids
/// among agents. Edges are stored sorted by `(from, to)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedGraph {
    ids: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    edges: Vec<WeightedEdge>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    reachable: Vec<bool>,
}

impl InducedGraph {
    /// Builds a graph from explicit weighted edges. Edges whose endpoints are
    /// not declared are rejected with [`Error::UnknownNode`].
    pub fn new(
        source: NodeId,
        agents: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (Edge, Cost)>,
    ) -> Result<Self> {
        let agents: BTreeSet<NodeId> = agents.into_iter().filter(|a| *a != source).collect();
        let ids: Vec<NodeId> = std::iter::once(source).chain(agents).collect();
        let index: BTreeMap<NodeId, usize> =
            ids.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let mut weighted = Vec::new();
        for (edge, cost) in edges {
            let from = *index
                .get(&edge.from)
                .ok_or_else(|| Error::UnknownNode(edge.from.clone()))?;
            let to = *index
                .get(&edge.to)
                .ok_or_else(|| Error::UnknownNode(edge.to.clone()))?;
            weighted.push(WeightedEdge { from, to, cost });
        }
        weighted.sort_by_key(|e| (e.from, e.to));
        weighted.dedup_by_key(|e| (e.from, e.to));

        let n = ids.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for (i, e) in weighted.iter().enumerate() {
            outgoing[e.from].push(i);
            incoming[e.to].push(i);
        }
        let mut graph = InducedGraph {
            ids,
            index,
            edges: weighted,
            outgoing,
            incoming,
            reachable: vec![false; n],
        };
        graph.reachable = graph.search_reachable();
        Ok(graph)
    }

    fn search_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.ids.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.outgoing[v] {
                let to = self.edges[e].to;
                if !seen[to] {
                    seen[to] = true;
                    queue.push_back(to);
                }
            }
        }
        seen
    }

    pub const SOURCE: usize = 0;

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn id(&self, index: usize) -> &NodeId {
        &self.ids[index]
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn source_id(&self) -> &NodeId {
        &self.ids[Self::SOURCE]
    }

    pub fn index_of(&self, node: &NodeId) -> Result<usize> {
        self.index
            .get(node)
            .copied()
            .ok_or_else(|| Error::UnknownNode(node.clone()))
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &WeightedEdge {
        &self.edges[index]
    }

    /// The edge between two ids, in the crate-wide [`Edge`] form.
    pub fn edge_key(&self, index: usize) -> Edge {
        let e = &self.edges[index];
        Edge::new(self.ids[e.from].clone(), self.ids[e.to].clone())
    }

    pub fn edge_index(&self, from: usize, to: usize) -> Option<usize> {
        self.outgoing[from]
            .iter()
            .copied()
            .find(|&e| self.edges[e].to == to)
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<&Cost> {
        self.edge_index(from, to).map(|e| &self.edges[e].cost)
    }

    /// Indices of edges leaving `node`, sorted by head.
    pub fn out_edges(&self, node: usize) -> &[usize] {
        &self.outgoing[node]
    }

    /// Indices of edges entering `node`, sorted by tail.
    pub fn in_edges(&self, node: usize) -> &[usize] {
        &self.incoming[node]
    }

    pub fn is_reachable(&self, node: usize) -> bool {
        self.reachable[node]
    }

    pub fn reachable_set(&self) -> BTreeSet<NodeId> {
        (0..self.ids.len())
            .filter(|&i| self.reachable[i])
            .map(|i| self.ids[i].clone())
            .collect()
    }

    /// Reachable agent indices in id order.
    pub fn reachable_agents(&self) -> Vec<usize> {
        (1..self.ids.len()).filter(|&i| self.reachable[i]).collect()
    }

    /// Tails of all edges entering `node`.
    pub fn parents_of(&self, node: &NodeId) -> Result<BTreeSet<NodeId>> {
        let v = self.index_of(node)?;
        Ok(self.incoming[v]
            .iter()
            .map(|&e| self.ids[self.edges[e].from].clone())
            .collect())
    }

    pub fn parent_indices(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.incoming[node].iter().map(move |&e| self.edges[e].from)
    }

    /// Edge weights in edge-index order, the starting point for a mutable
    /// cost view.
    pub fn weights(&self) -> Vec<Cost> {
        self.edges.iter().map(|e| e.cost.clone()).collect()
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        (0..self.edges.len()).map(|i| self.edge_key(i)).collect()
    }
}

/// The graph seen by contractor `contractor` under `reports`: the reported
/// edge union weighted by that contractor's reported costs.
pub fn induce(
    instance: &Instance,
    reports: &ReportProfile,
    contractor: &ContractorId,
) -> Result<InducedGraph> {
    instance.contractor(contractor)?;
    let costs = reports.contractor_report(contractor)?;
    let mut weighted = Vec::new();
    for edge in reports.reported_edges() {
        let cost = costs.get(&edge).ok_or_else(|| {
            Error::InvalidReport(format!(
                "contractor {contractor} reports no cost for reported edge {edge}"
            ))
        })?;
        weighted.push((edge, cost.clone()));
    }
    InducedGraph::new(
        instance.source().clone(),
        instance.dag().agents().iter().cloned(),
        weighted,
    )
}
