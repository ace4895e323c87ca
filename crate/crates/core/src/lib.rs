//! Cost sharing on directed acyclic graphs with private contractor costs
//! and connection-controlling nodes.
//!
//! Nodes of a DAG want to connect to a source. Several contractors each
//! report a cost for every edge; one is selected to build and is paid the
//! second-lowest spanning cost. That payment is then shared among the
//! connected nodes by one of three rules (see [`mechanisms`]). Nodes may
//! withhold outgoing edges and contractors may misreport costs, and
//! [`audit`] checks which properties each rule actually has.
//!
//! All arithmetic is exact ([`Cost`] is an arbitrary-precision rational).

pub mod algos;
pub mod audit;
pub mod cli;
pub mod coalition;
pub mod cost;
pub mod error;
pub mod exec;
pub mod graph;
pub mod mechanisms;

pub use audit::{audit_all, AuditConfig, AuditReport, DeviationGrid, Property, PropertyVerdict, Status};
pub use cost::Cost;
pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{
    induce, parse_instance, parse_overlay, serialize_instance, validate_instance, ContractorId, Edge,
    InducedGraph, Instance, NodeId, ReportProfile,
};
pub use mechanisms::{Mechanism, MechanismKind, Outcome};
