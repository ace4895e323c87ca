//! Executable property checks for cost sharing mechanisms.
//!
//! Budget balance, positiveness, individual rationality, ranking and
//! symmetry are exact checks on one outcome. Truthfulness is a bounded
//! search: every unilateral edge withdrawal by a node, and a finite grid of
//! cost misreports by each contractor, is run through the mechanism and
//! compared against truthful reporting. A pass therefore means "no
//! violation found within budget", not a proof.
//!
//! Every failing verdict carries a [`Witness`] that [`replay`] can re-run to
//! reproduce the violation bit for bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::exec::map_ordered;
use crate::graph::{induce, serialize_overlay, ContractorId, Edge, Instance, NodeId, ReportProfile};
use crate::mechanisms::{contractor_utility, Mechanism, MechanismKind, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    NodeTruthfulness,
    ContractorTruthfulness,
    BudgetBalance,
    IndividualRationality,
    Positiveness,
    Ranking,
    Symmetry,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::NodeTruthfulness => "node-truthfulness",
            Property::ContractorTruthfulness => "contractor-truthfulness",
            Property::BudgetBalance => "budget-balance",
            Property::IndividualRationality => "individual-rationality",
            Property::Positiveness => "positiveness",
            Property::Ranking => "ranking",
            Property::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What went wrong, with the exact values involved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `node` lowers its share by withdrawing `cut`.
    NodeDeviation {
        node: NodeId,
        cut: Vec<Edge>,
        truthful_share: Cost,
        deviated_share: Cost,
    },
    /// `contractor` raises its utility by misreporting.
    ContractorDeviation {
        contractor: ContractorId,
        misreport: String,
        truthful_utility: Cost,
        deviated_utility: Cost,
    },
    BudgetImbalance {
        shares_total: Cost,
        paid_total: Cost,
    },
    NegativeShare {
        node: NodeId,
        share: Cost,
    },
    NegativeUtility {
        contractor: ContractorId,
        utility: Cost,
    },
    /// `cheaper` has strictly cheaper entering edges from every shared
    /// parent but does not pay strictly less.
    Ranking {
        cheaper: NodeId,
        dearer: NodeId,
        cheaper_share: Cost,
        dearer_share: Cost,
    },
    /// Equal entering costs from every shared parent, unequal shares.
    Symmetry {
        first: NodeId,
        second: NodeId,
        first_share: Cost,
        second_share: Cost,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeDeviation {
                node,
                cut,
                truthful_share,
                deviated_share,
            } => {
                let cut: Vec<String> = cut.iter().map(Edge::to_string).collect();
                write!(
                    f,
                    "{node} cuts {}: share {truthful_share} -> {deviated_share}",
                    cut.join(",")
                )
            }
            Violation::ContractorDeviation {
                contractor,
                misreport,
                truthful_utility,
                deviated_utility,
            } => write!(
                f,
                "{contractor} {misreport}: utility {truthful_utility} -> {deviated_utility}"
            ),
            Violation::BudgetImbalance {
                shares_total,
                paid_total,
            } => write!(f, "shares sum to {shares_total}, payments total {paid_total}"),
            Violation::NegativeShare { node, share } => write!(f, "{node} has share {share}"),
            Violation::NegativeUtility {
                contractor,
                utility,
            } => write!(f, "{contractor} has utility {utility}"),
            Violation::Ranking {
                cheaper,
                dearer,
                cheaper_share,
                dearer_share,
            } => write!(
                f,
                "{cheaper} has cheaper edges than {dearer} but pays {cheaper_share} >= {dearer_share}"
            ),
            Violation::Symmetry {
                first,
                second,
                first_share,
                second_share,
            } => write!(
                f,
                "{first} and {second} play the same role but pay {first_share} != {second_share}"
            ),
        }
    }
}

/// A replayable counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub violation: Violation,
    /// Profile under which the violating outcome arises. `None` only for
    /// checks run on a bare outcome.
    pub reports: Option<ReportProfile>,
    /// Profile to compare against, for deviation witnesses.
    pub baseline: Option<ReportProfile>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(Box<Witness>),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub property: Property,
    pub status: Status,
    pub note: String,
}

impl PropertyVerdict {
    fn pass(property: Property, note: impl Into<String>) -> Self {
        PropertyVerdict {
            property,
            status: Status::Pass,
            note: note.into(),
        }
    }

    fn fail(property: Property, witness: Witness, note: impl Into<String>) -> Self {
        PropertyVerdict {
            property,
            status: Status::Fail(Box::new(witness)),
            note: note.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Fail(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            Status::Fail(w) => Some(w),
            _ => None,
        }
    }

    fn with_reports(mut self, reports: &ReportProfile) -> Self {
        if let Status::Fail(w) = &mut self.status {
            if w.reports.is_none() {
                w.reports = Some(reports.clone());
            }
        }
        self
    }
}

/// Sum of shares equals the total paid to contractors, exactly.
pub fn check_budget_balance(outcome: &Outcome) -> PropertyVerdict {
    let shares_total = outcome.total_shares();
    let paid_total = outcome.total_paid();
    if shares_total == paid_total {
        PropertyVerdict::pass(Property::BudgetBalance, format!("shares sum to {paid_total}"))
    } else {
        PropertyVerdict::fail(
            Property::BudgetBalance,
            Witness {
                violation: Violation::BudgetImbalance {
                    shares_total,
                    paid_total,
                },
                reports: None,
                baseline: None,
            },
            "",
        )
    }
}

/// Every share is non-negative.
pub fn check_positiveness(outcome: &Outcome) -> PropertyVerdict {
    match outcome.shares.iter().find(|(_, x)| x.is_negative()) {
        None => PropertyVerdict::pass(Property::Positiveness, ""),
        Some((node, share)) => PropertyVerdict::fail(
            Property::Positiveness,
            Witness {
                violation: Violation::NegativeShare {
                    node: node.clone(),
                    share: share.clone(),
                },
                reports: None,
                baseline: None,
            },
            "",
        ),
    }
}

/// Every contractor's utility, measured with TRUE costs, is non-negative.
pub fn check_ir(instance: &Instance, reports: &ReportProfile, outcome: &Outcome) -> Result<PropertyVerdict> {
    for k in instance.contractor_ids() {
        let utility = contractor_utility(instance, outcome, k)?;
        if utility.is_negative() {
            return Ok(PropertyVerdict::fail(
                Property::IndividualRationality,
                Witness {
                    violation: Violation::NegativeUtility {
                        contractor: k.clone(),
                        utility,
                    },
                    reports: Some(reports.clone()),
                    baseline: None,
                },
                "",
            ));
        }
    }
    let winner = &outcome.selection.winner;
    let u = contractor_utility(instance, outcome, winner)?;
    Ok(PropertyVerdict::pass(
        Property::IndividualRationality,
        format!("winner {winner} utility {u}"),
    ))
}

/// Relation between two same-role nodes' entering costs from their shared
/// parents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairPremise {
    FirstCheaper,
    SecondCheaper,
    Equal,
}

/// Node pairs `(i, j)` with `parents(i) \ {j} = parents(j) \ {i}` (non-empty)
/// whose winner-reported costs from those parents are uniformly ordered.
pub fn same_role_pairs(
    instance: &Instance,
    reports: &ReportProfile,
    outcome: &Outcome,
) -> Result<Vec<(NodeId, NodeId, PairPremise)>> {
    let graph = induce(instance, reports, &outcome.selection.winner)?;
    let nodes: Vec<&NodeId> = outcome.shares.keys().collect();
    let mut pairs = Vec::new();
    for (a, first) in nodes.iter().enumerate() {
        for second in &nodes[a + 1..] {
            let (i, j) = (graph.index_of(first)?, graph.index_of(second)?);
            let pi: BTreeSet<usize> = graph.parent_indices(i).filter(|&p| p != j).collect();
            let pj: BTreeSet<usize> = graph.parent_indices(j).filter(|&p| p != i).collect();
            if pi != pj || pi.is_empty() {
                continue;
            }
            let cmp: Vec<std::cmp::Ordering> = pi
                .iter()
                .map(|&k| {
                    let ci = graph.weight(k, i).expect("parent edge");
                    let cj = graph.weight(k, j).expect("parent edge");
                    ci.cmp(cj)
                })
                .collect();
            let premise = if cmp.iter().all(|o| o.is_lt()) {
                PairPremise::FirstCheaper
            } else if cmp.iter().all(|o| o.is_gt()) {
                PairPremise::SecondCheaper
            } else if cmp.iter().all(|o| o.is_eq()) {
                PairPremise::Equal
            } else {
                continue;
            };
            pairs.push(((*first).clone(), (*second).clone(), premise));
        }
    }
    Ok(pairs)
}

/// Strictly cheaper entering edges from every shared parent implies a
/// strictly smaller share. Costs are the winner's reports.
pub fn check_ranking(instance: &Instance, reports: &ReportProfile, outcome: &Outcome) -> Result<PropertyVerdict> {
    let pairs = same_role_pairs(instance, reports, outcome)?;
    let mut checked = 0;
    for (first, second, premise) in pairs {
        let (cheaper, dearer) = match premise {
            PairPremise::FirstCheaper => (first, second),
            PairPremise::SecondCheaper => (second, first),
            PairPremise::Equal => continue,
        };
        checked += 1;
        let (xc, xd) = (&outcome.shares[&cheaper], &outcome.shares[&dearer]);
        if xc >= xd {
            return Ok(PropertyVerdict::fail(
                Property::Ranking,
                Witness {
                    violation: Violation::Ranking {
                        cheaper_share: xc.clone(),
                        dearer_share: xd.clone(),
                        cheaper,
                        dearer,
                    },
                    reports: Some(reports.clone()),
                    baseline: None,
                },
                "",
            ));
        }
    }
    Ok(PropertyVerdict::pass(Property::Ranking, vacuity_note(checked)))
}

/// Equal entering costs from every shared parent implies equal shares.
pub fn check_symmetry(instance: &Instance, reports: &ReportProfile, outcome: &Outcome) -> Result<PropertyVerdict> {
    let pairs = same_role_pairs(instance, reports, outcome)?;
    let mut checked = 0;
    for (first, second, premise) in pairs {
        if premise != PairPremise::Equal {
            continue;
        }
        checked += 1;
        let (x1, x2) = (&outcome.shares[&first], &outcome.shares[&second]);
        if x1 != x2 {
            return Ok(PropertyVerdict::fail(
                Property::Symmetry,
                Witness {
                    violation: Violation::Symmetry {
                        first_share: x1.clone(),
                        second_share: x2.clone(),
                        first,
                        second,
                    },
                    reports: Some(reports.clone()),
                    baseline: None,
                },
                "",
            ));
        }
    }
    Ok(PropertyVerdict::pass(Property::Symmetry, vacuity_note(checked)))
}

fn vacuity_note(checked: usize) -> String {
    if checked == 0 {
        "vacuous: no qualifying node pair".to_string()
    } else {
        format!("{checked} qualifying pair(s)")
    }
}

/// One unilateral edge withdrawal.
struct NodeDeviation {
    node: NodeId,
    cut: Vec<Edge>,
    reports: ReportProfile,
}

/// Every non-empty withdrawal by every agent, in enumeration order: agents
/// by id, then cut sets by bitmask over the agent's sorted outgoing edges.
fn node_deviations(instance: &Instance, budget: usize) -> Result<Vec<NodeDeviation>> {
    let truthful = ReportProfile::truthful(instance);
    let mut needed: usize = 0;
    for node in instance.dag().agents() {
        let degree = instance.dag().outgoing(node).len() as u32;
        let count = 1usize
            .checked_shl(degree)
            .filter(|_| degree < usize::BITS - 1)
            .map(|c| c - 1)
            .unwrap_or(usize::MAX);
        needed = needed.saturating_add(count);
    }
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut out = Vec::with_capacity(needed);
    for node in instance.dag().agents() {
        let outgoing: Vec<Edge> = instance.dag().outgoing(node).into_iter().collect();
        for mask in 1u64..(1u64 << outgoing.len()) {
            let in_cut = |b: usize| mask & (1 << b) != 0;
            let cut: Vec<Edge> = outgoing
                .iter()
                .enumerate()
                .filter(|(b, _)| in_cut(*b))
                .map(|(_, e)| e.clone())
                .collect();
            let kept: BTreeSet<Edge> = outgoing
                .iter()
                .enumerate()
                .filter(|(b, _)| !in_cut(*b))
                .map(|(_, e)| e.clone())
                .collect();
            out.push(NodeDeviation {
                node: node.clone(),
                cut,
                reports: truthful.with_node_report(node, kept),
            });
        }
    }
    Ok(out)
}

/// Searches every unilateral edge withdrawal by every agent (contractors
/// and other nodes truthful) for one that strictly lowers the deviator's
/// share. A deviation after which the deviator is no longer connected is
/// counted separately and never as a violation. A zero budget skips the
/// search; a budget below the deviation count is an error.
pub fn audit_node_truthfulness(instance: &Instance, mechanism: &Mechanism, budget: usize) -> Result<PropertyVerdict> {
    if budget == 0 {
        return Ok(PropertyVerdict {
            property: Property::NodeTruthfulness,
            status: Status::Skipped("empty deviation budget".to_string()),
            note: String::new(),
        });
    }
    let deviations = node_deviations(instance, budget)?;
    let truthful = ReportProfile::truthful(instance);
    let base = mechanism.run(instance, &truthful)?;
    let results = map_ordered(mechanism.execution, &deviations, |dev| {
        mechanism
            .run(instance, &dev.reports)
            .map(|o| o.share(&dev.node).cloned())
    });
    let mut excluded = 0usize;
    let mut not_connected = BTreeSet::new();
    for (dev, result) in deviations.iter().zip(results) {
        let Some(truthful_share) = base.share(&dev.node) else {
            not_connected.insert(dev.node.clone());
            continue;
        };
        let Some(deviated_share) = result? else {
            excluded += 1;
            continue;
        };
        if deviated_share < *truthful_share {
            return Ok(PropertyVerdict::fail(
                Property::NodeTruthfulness,
                Witness {
                    violation: Violation::NodeDeviation {
                        node: dev.node.clone(),
                        cut: dev.cut.clone(),
                        truthful_share: truthful_share.clone(),
                        deviated_share,
                    },
                    reports: Some(dev.reports.clone()),
                    baseline: Some(truthful),
                },
                format!("{} deviation(s) enumerated", deviations.len()),
            ));
        }
    }
    let mut note = format!(
        "no violation found within budget ({} deviation(s) enumerated)",
        deviations.len()
    );
    if excluded > 0 {
        let _ = write!(note, "; {excluded} self-disconnecting deviation(s) reported separately");
    }
    if !not_connected.is_empty() {
        let _ = write!(note, "; {} node(s) unconnected under truthful reporting", not_connected.len());
    }
    Ok(PropertyVerdict::pass(Property::NodeTruthfulness, note))
}

/// Finite set of contractor misreports: each factor applied to one edge at a
/// time, and to the whole cost vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationGrid {
    pub factors: Vec<Cost>,
    pub per_edge: bool,
    pub whole_vector: bool,
}

impl Default for DeviationGrid {
    fn default() -> Self {
        DeviationGrid {
            factors: vec![
                Cost::ratio(1, 2),
                Cost::ratio(9, 10),
                Cost::ratio(11, 10),
                Cost::integer(2),
            ],
            per_edge: true,
            whole_vector: true,
        }
    }
}

struct ContractorDeviation {
    contractor: ContractorId,
    misreport: String,
    reports: ReportProfile,
}

fn contractor_deviations(instance: &Instance, grid: &DeviationGrid) -> Vec<ContractorDeviation> {
    let truthful = ReportProfile::truthful(instance);
    let mut out = Vec::new();
    for contractor in instance.contractors() {
        let k = &contractor.owner;
        let truth = &contractor.weights;
        if grid.per_edge {
            for edge in truth.keys() {
                for factor in grid.factors.iter().filter(|f| f.is_positive()) {
                    let mut costs = truth.clone();
                    let scaled = &costs[edge] * factor;
                    costs.insert(edge.clone(), scaled);
                    out.push(ContractorDeviation {
                        contractor: k.clone(),
                        misreport: format!("reports {edge} x {factor}"),
                        reports: truthful.with_contractor_report(k, costs),
                    });
                }
            }
        }
        if grid.whole_vector {
            for factor in grid.factors.iter().filter(|f| f.is_positive()) {
                let costs: BTreeMap<Edge, Cost> =
                    truth.iter().map(|(e, c)| (e.clone(), c * factor)).collect();
                out.push(ContractorDeviation {
                    contractor: k.clone(),
                    misreport: format!("scales all costs x {factor}"),
                    reports: truthful.with_contractor_report(k, costs),
                });
            }
        }
    }
    out
}

/// Searches the grid of unilateral cost misreports (nodes truthful) for one
/// that strictly raises the misreporting contractor's true-cost utility.
pub fn audit_contractor_truthfulness(
    instance: &Instance,
    mechanism: &Mechanism,
    grid: &DeviationGrid,
) -> Result<PropertyVerdict> {
    let truthful = ReportProfile::truthful(instance);
    let base = mechanism.run(instance, &truthful)?;
    let deviations = contractor_deviations(instance, grid);
    let results = map_ordered(mechanism.execution, &deviations, |dev| {
        mechanism
            .run(instance, &dev.reports)
            .and_then(|o| contractor_utility(instance, &o, &dev.contractor))
    });
    for (dev, result) in deviations.iter().zip(results) {
        let truthful_utility = contractor_utility(instance, &base, &dev.contractor)?;
        let deviated_utility = result?;
        if deviated_utility > truthful_utility {
            return Ok(PropertyVerdict::fail(
                Property::ContractorTruthfulness,
                Witness {
                    violation: Violation::ContractorDeviation {
                        contractor: dev.contractor.clone(),
                        misreport: dev.misreport.clone(),
                        truthful_utility,
                        deviated_utility,
                    },
                    reports: Some(dev.reports.clone()),
                    baseline: Some(truthful),
                },
                format!("{} misreport(s) enumerated", deviations.len()),
            ));
        }
    }
    Ok(PropertyVerdict::pass(
        Property::ContractorTruthfulness,
        format!(
            "no violation found within budget ({} misreport(s) enumerated)",
            deviations.len()
        ),
    ))
}

/// Default node-deviation budget.
pub const DEFAULT_NODE_BUDGET: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditConfig {
    pub node_budget: usize,
    pub grid: DeviationGrid,
    /// Profile for the exact checks; truthful reporting when `None`.
    /// Truthfulness searches always deviate from truthful reporting.
    pub reports: Option<ReportProfile>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            grid: DeviationGrid::default(),
            reports: None,
        }
    }
}

/// All verdicts for one mechanism on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub mechanism: MechanismKind,
    pub outcome: Outcome,
    pub verdicts: Vec<PropertyVerdict>,
}

impl AuditReport {
    /// No verdict failed. Skipped verdicts do not count as failures.
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| !v.failed())
    }

    pub fn first_failure(&self) -> Option<&PropertyVerdict> {
        self.verdicts.iter().find(|v| v.failed())
    }

    pub fn verdict(&self, property: Property) -> Option<&PropertyVerdict> {
        self.verdicts.iter().find(|v| v.property == property)
    }

    pub fn to_text(&self, instance: &Instance) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "audit of mechanism {}", self.mechanism);
        for v in &self.verdicts {
            let status = match &v.status {
                Status::Pass => "PASS".to_string(),
                Status::Fail(_) => "FAIL".to_string(),
                Status::Skipped(why) => format!("SKIPPED ({why})"),
            };
            let _ = write!(out, "{:<26}{status}", v.property.name());
            if !v.note.is_empty() {
                let _ = write!(out, "  {}", v.note);
            }
            out.push('\n');
            if let Some(w) = v.witness() {
                let _ = writeln!(out, "  witness: {}", w.violation);
                if let Some(reports) = &w.reports {
                    for line in serialize_overlay(instance, reports).lines().skip(1) {
                        let _ = writeln!(out, "    {line}");
                    }
                }
            }
        }
        out
    }

    /// Key-sorted machine-readable summary.
    pub fn to_json(&self, instance: &Instance) -> Value {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| {
                let (status, reason) = match &v.status {
                    Status::Pass => ("pass", None),
                    Status::Fail(_) => ("fail", None),
                    Status::Skipped(why) => ("skipped", Some(why.clone())),
                };
                json!({
                    "property": v.property.name(),
                    "status": status,
                    "reason": reason,
                    "note": v.note,
                    "witness": v.witness().map(|w| json!({
                        "violation": w.violation.to_string(),
                        "overlay": w.reports.as_ref().map(|r| serialize_overlay(instance, r)),
                    })),
                })
            })
            .collect();
        json!({
            "mechanism": self.mechanism.name(),
            "passed": self.all_passed(),
            "verdicts": verdicts,
        })
    }
}

/// Runs every check and both truthfulness searches.
pub fn audit_all(instance: &Instance, mechanism: &Mechanism, config: &AuditConfig) -> Result<AuditReport> {
    let reports = config
        .reports
        .clone()
        .unwrap_or_else(|| ReportProfile::truthful(instance));
    let outcome = mechanism.run(instance, &reports)?;
    let verdicts = vec![
        audit_node_truthfulness(instance, mechanism, config.node_budget)?,
        audit_contractor_truthfulness(instance, mechanism, &config.grid)?,
        check_budget_balance(&outcome).with_reports(&reports),
        check_ir(instance, &reports, &outcome)?,
        check_positiveness(&outcome).with_reports(&reports),
        check_ranking(instance, &reports, &outcome)?,
        check_symmetry(instance, &reports, &outcome)?,
    ];
    Ok(AuditReport {
        mechanism: mechanism.kind,
        outcome,
        verdicts,
    })
}

/// Re-runs the mechanism on a witness and reports whether the recorded
/// violation reappears with exactly the recorded values.
pub fn replay(instance: &Instance, mechanism: &Mechanism, witness: &Witness) -> Result<bool> {
    let Some(reports) = &witness.reports else {
        return Ok(false);
    };
    let outcome = mechanism.run(instance, reports)?;
    let baseline = witness
        .baseline
        .as_ref()
        .map(|b| mechanism.run(instance, b))
        .transpose()?;
    Ok(match &witness.violation {
        Violation::NodeDeviation {
            node,
            truthful_share,
            deviated_share,
            ..
        } => {
            baseline.as_ref().and_then(|b| b.share(node)) == Some(truthful_share)
                && outcome.share(node) == Some(deviated_share)
                && deviated_share < truthful_share
        }
        Violation::ContractorDeviation {
            contractor,
            truthful_utility,
            deviated_utility,
            ..
        } => {
            let Some(b) = &baseline else { return Ok(false) };
            contractor_utility(instance, b, contractor)? == *truthful_utility
                && contractor_utility(instance, &outcome, contractor)? == *deviated_utility
                && deviated_utility > truthful_utility
        }
        Violation::BudgetImbalance {
            shares_total,
            paid_total,
        } => {
            outcome.total_shares() == *shares_total
                && outcome.total_paid() == *paid_total
                && shares_total != paid_total
        }
        Violation::NegativeShare { node, share } => {
            outcome.share(node) == Some(share) && share.is_negative()
        }
        Violation::NegativeUtility {
            contractor,
            utility,
        } => contractor_utility(instance, &outcome, contractor)? == *utility && utility.is_negative(),
        Violation::Ranking {
            cheaper,
            dearer,
            cheaper_share,
            dearer_share,
        } => {
            outcome.share(cheaper) == Some(cheaper_share)
                && outcome.share(dearer) == Some(dearer_share)
                && cheaper_share >= dearer_share
        }
        Violation::Symmetry {
            first,
            second,
            first_share,
            second_share,
        } => {
            outcome.share(first) == Some(first_share)
                && outcome.share(second) == Some(second_share)
                && first_share != second_share
        }
    })
}
