use thiserror::Error;

use crate::graph::{ContractorId, Edge, NodeId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("directed cycle through node {0}")]
    CycleDetected(NodeId),
    #[error("edge {0} enters the source")]
    EdgeIntoSource(Edge),
    #[error("edge {0} is a self-loop")]
    SelfLoop(Edge),
    #[error("edge {0} references an undeclared node")]
    UnknownEndpoint(Edge),
    #[error("node {0} is declared more than once")]
    DuplicateNode(NodeId),
    #[error("instance has no agent nodes")]
    NoAgents,
    #[error("need at least 2 contractors, found {0}")]
    TooFewContractors(usize),
    #[error("contractor {contractor} has no cost for edge {edge}")]
    WeightMapIncomplete { contractor: ContractorId, edge: Edge },
    #[error("contractor {contractor} has a cost for {edge}, which is not an edge of the graph")]
    UnknownEdge { contractor: ContractorId, edge: Edge },
    #[error("contractor {contractor} cost on {edge} is not strictly positive")]
    WeightNotPositive { contractor: ContractorId, edge: Edge },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown contractor {0}")]
    UnknownContractor(ContractorId),
    #[error("invalid report profile: {0}")]
    InvalidReport(String),
    #[error("node {0} is not reachable from the source")]
    Unreachable(NodeId),
    #[error("coalition member {0} is not reachable from the source")]
    UnreachableMember(NodeId),
    #[error("{count} agent nodes exceed the Shapley enumeration limit of {limit}")]
    TooManyNodes { count: usize, limit: usize },
    #[error("deviation space has {needed} profiles, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),
}

impl Error {
    /// Stable variant name, used on the CLI diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::CycleDetected(_) => "CycleDetected",
            Error::EdgeIntoSource(_) => "EdgeIntoSource",
            Error::SelfLoop(_) => "SelfLoop",
            Error::UnknownEndpoint(_) => "UnknownEndpoint",
            Error::DuplicateNode(_) => "DuplicateNode",
            Error::NoAgents => "NoAgents",
            Error::TooFewContractors(_) => "TooFewContractors",
            Error::WeightMapIncomplete { .. } => "WeightMapIncomplete",
            Error::UnknownEdge { .. } => "UnknownEdge",
            Error::WeightNotPositive { .. } => "WeightNotPositive",
            Error::UnknownNode(_) => "UnknownNode",
            Error::UnknownContractor(_) => "UnknownContractor",
            Error::InvalidReport(_) => "InvalidReport",
            Error::Unreachable(_) => "Unreachable",
            Error::UnreachableMember(_) => "UnreachableMember",
            Error::TooManyNodes { .. } => "TooManyNodes",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::InfeasibleParameters(_) => "InfeasibleParameters",
        }
    }

    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
