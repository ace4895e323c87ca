//! Line-oriented text formats for instances and report overlays.
//!
//! Instance files:
//!
//! ```text
//! dagshare v1
//! source s
//! node A
//! edge s A
//! contractor a
//! cost s A 3/2
//! ```
//!
//! Overlay files describe a report profile as a difference from truthful
//! reporting: `cut <node> <from> <to>` withdraws one of the node's edges and
//! `report <contractor> <from> <to> <value>` replaces one reported cost.
//! An optional `dagshare overlay v1` header is accepted. `#` starts a comment
//! in both formats.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::graph::{ContractorId, ContractorType, Dag, Edge, Instance, NodeId, ReportProfile};

const HEADER: &str = "dagshare v1";
const OVERLAY_HEADER: &str = "dagshare overlay v1";

struct Token<'a> {
    column: usize,
    text: &'a str,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    end_column: usize,
}

fn tokenize(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start: Option<usize> = None;
        let mut column = 0;
        for (col, ch) in content.chars().enumerate() {
            column = col + 1;
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(col),
                (true, Some(s)) => {
                    tokens.push((s, col));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((s, column));
        }
        if tokens.is_empty() {
            return None;
        }
        // Map char offsets back to byte slices.
        let offsets: Vec<usize> = content
            .char_indices()
            .map(|(b, _)| b)
            .chain(std::iter::once(content.len()))
            .collect();
        let tokens = tokens
            .into_iter()
            .map(|(s, e)| Token {
                column: s + 1,
                text: &content[offsets[s]..offsets[e]],
            })
            .collect();
        Some(Line {
            number: i + 1,
            tokens,
            end_column: column + 1,
        })
    })
}

impl<'a> Line<'a> {
    /// Checks the argument count and returns the arguments after the keyword.
    fn args(&self, expected: usize) -> Result<&[Token<'a>]> {
        let got = self.tokens.len() - 1;
        if got < expected {
            return Err(Error::syntax(
                self.number,
                self.end_column,
                format!(
                    "`{}` expects {expected} argument(s), found {got}",
                    self.tokens[0].text
                ),
            ));
        }
        if got > expected {
            let extra = &self.tokens[expected + 1];
            return Err(Error::syntax(
                self.number,
                extra.column,
                format!("unexpected token `{}`", extra.text),
            ));
        }
        Ok(&self.tokens[1..])
    }

    fn cost(&self, token: &Token<'_>) -> Result<Cost> {
        token
            .text
            .parse()
            .map_err(|e: crate::cost::ParseCostError| Error::syntax(self.number, token.column, e.to_string()))
    }
}

fn edge_of(from: &Token<'_>, to: &Token<'_>) -> Edge {
    Edge::new(from.text, to.text)
}

/// Parses an instance file. Only syntax is checked here; semantic problems
/// are left to [`validate_instance`](crate::graph::validate_instance).
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = tokenize(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::syntax(1, 1, format!("missing `{HEADER}` header")))?;
    let joined: Vec<&str> = header.tokens.iter().map(|t| t.text).collect();
    if joined.join(" ") != HEADER {
        return Err(Error::syntax(
            header.number,
            1,
            format!("expected `{HEADER}` header"),
        ));
    }

    let mut last_line = header.number;
    let mut source: Option<NodeId> = None;
    let mut agents = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut contractors: Vec<ContractorType> = Vec::new();
    let mut seen_contractors = BTreeSet::new();

    for line in lines {
        last_line = line.number;
        let keyword = &line.tokens[0];
        match keyword.text {
            "source" => {
                let args = line.args(1)?;
                if source.is_some() {
                    return Err(Error::syntax(line.number, keyword.column, "duplicate `source` line"));
                }
                source = Some(NodeId::new(args[0].text));
            }
            "node" => {
                let args = line.args(1)?;
                if !agents.insert(NodeId::new(args[0].text)) {
                    return Err(Error::syntax(
                        line.number,
                        args[0].column,
                        format!("node `{}` declared twice", args[0].text),
                    ));
                }
            }
            "edge" => {
                let args = line.args(2)?;
                if !edges.insert(edge_of(&args[0], &args[1])) {
                    return Err(Error::syntax(
                        line.number,
                        args[0].column,
                        "parallel edge: this node pair is already declared",
                    ));
                }
            }
            "contractor" => {
                let args = line.args(1)?;
                let id = ContractorId::new(args[0].text);
                if !seen_contractors.insert(id.clone()) {
                    return Err(Error::syntax(
                        line.number,
                        args[0].column,
                        format!("contractor `{id}` declared twice"),
                    ));
                }
                contractors.push(ContractorType {
                    owner: id,
                    weights: BTreeMap::new(),
                });
            }
            "cost" => {
                let args = line.args(3)?;
                let cost = line.cost(&args[2])?;
                let current = contractors.last_mut().ok_or_else(|| {
                    Error::syntax(line.number, keyword.column, "`cost` before any `contractor`")
                })?;
                let edge = edge_of(&args[0], &args[1]);
                if current.weights.insert(edge, cost).is_some() {
                    return Err(Error::syntax(
                        line.number,
                        args[0].column,
                        "duplicate cost for this edge",
                    ));
                }
            }
            other => {
                return Err(Error::syntax(
                    line.number,
                    keyword.column,
                    format!("unknown keyword `{other}`"),
                ));
            }
        }
    }

    let source = source.ok_or_else(|| Error::syntax(last_line + 1, 1, "missing `source` line"))?;
    Ok(Instance::new(Dag::new(source, agents, edges), contractors))
}

/// Canonical text form: sorted nodes, edges, contractors and costs, with
/// rationals in lowest terms.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let dag = instance.dag();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "source {}", dag.source());
    for node in dag.agents() {
        let _ = writeln!(out, "node {node}");
    }
    for edge in dag.edges() {
        let _ = writeln!(out, "edge {} {}", edge.from, edge.to);
    }
    for contractor in instance.contractors() {
        let _ = writeln!(out, "contractor {}", contractor.owner);
        for (edge, cost) in &contractor.weights {
            let _ = writeln!(out, "cost {} {} {cost}", edge.from, edge.to);
        }
    }
    out
}

/// Applies an overlay to truthful reporting. The result is validated
/// against the instance.
pub fn parse_overlay(instance: &Instance, text: &str) -> Result<ReportProfile> {
    let mut cuts: BTreeMap<NodeId, BTreeSet<Edge>> = BTreeMap::new();
    let mut overrides: Vec<(ContractorId, Edge, Cost, usize)> = Vec::new();

    for (position, line) in tokenize(text).enumerate() {
        let keyword = &line.tokens[0];
        if position == 0 && keyword.text == "dagshare" {
            let joined: Vec<&str> = line.tokens.iter().map(|t| t.text).collect();
            if joined.join(" ") != OVERLAY_HEADER {
                return Err(Error::syntax(
                    line.number,
                    1,
                    format!("expected `{OVERLAY_HEADER}` header"),
                ));
            }
            continue;
        }
        match keyword.text {
            "cut" => {
                let args = line.args(3)?;
                let node = NodeId::new(args[0].text);
                let edge = edge_of(&args[1], &args[2]);
                if edge.from != node {
                    return Err(Error::InvalidReport(format!(
                        "line {}: node {node} cannot cut {edge}, which it does not own",
                        line.number
                    )));
                }
                cuts.entry(node).or_default().insert(edge);
            }
            "report" => {
                let args = line.args(4)?;
                let cost = line.cost(&args[3])?;
                overrides.push((
                    ContractorId::new(args[0].text),
                    edge_of(&args[1], &args[2]),
                    cost,
                    line.number,
                ));
            }
            other => {
                return Err(Error::syntax(
                    line.number,
                    keyword.column,
                    format!("unknown keyword `{other}`"),
                ));
            }
        }
    }

    let mut reports = ReportProfile::truthful(instance);
    for (node, cut) in cuts {
        let truth = instance.node_type(&node)?;
        if let Some(missing) = cut.difference(&truth.outgoing).next() {
            return Err(Error::InvalidReport(format!(
                "node {node} cannot cut {missing}, which is not in its type"
            )));
        }
        let kept = truth.outgoing.difference(&cut).cloned().collect();
        reports = reports.with_node_report(&node, kept);
    }
    for (k, edge, cost, line) in overrides {
        let mut costs = reports.contractor_report(&k)?.clone();
        if !costs.contains_key(&edge) {
            return Err(Error::InvalidReport(format!(
                "line {line}: contractor {k} reports on {edge}, which is not a reported edge"
            )));
        }
        costs.insert(edge, cost);
        reports = reports.with_contractor_report(&k, costs);
    }
    reports.validate(instance)?;
    Ok(reports)
}

/// Writes `reports` as an overlay relative to truthful reporting.
pub fn serialize_overlay(instance: &Instance, reports: &ReportProfile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{OVERLAY_HEADER}");
    for node_type in instance.node_types() {
        let reported = reports.node_report(&node_type.owner);
        for edge in &node_type.outgoing {
            if !reported.is_some_and(|r| r.contains(edge)) {
                let _ = writeln!(out, "cut {} {} {}", node_type.owner, edge.from, edge.to);
            }
        }
    }
    for contractor in instance.contractors() {
        let Ok(costs) = reports.contractor_report(&contractor.owner) else {
            continue;
        };
        for (edge, cost) in costs {
            if contractor.weights.get(edge) != Some(cost) {
                let _ = writeln!(
                    out,
                    "report {} {} {} {cost}",
                    contractor.owner, edge.from, edge.to
                );
            }
        }
    }
    out
}
