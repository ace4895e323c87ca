//! Command-line front end.
//!
//! Exit codes: 0 success, 1 semantic validation failure, 2 I/O or parse
//! failure, 3 audited property failure. Errors print their stable name on
//! stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::audit::{audit_all, AuditConfig, DeviationGrid, DEFAULT_NODE_BUDGET};
use crate::cost::Cost;
use crate::error::Error;
use crate::exec::Execution;
use crate::graph::{
    generate_instance, parse_instance, parse_overlay, serialize_instance, validate_instance, GeneratorParams, Instance,
    ReportProfile,
};
use crate::mechanisms::{Mechanism, MechanismKind, Outcome, ShareDetail, DEFAULT_TIE_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_PROPERTY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dagshare", version, about = "Cost sharing mechanisms on DAGs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mech {
    Shapley,
    Bird,
    ShortestPath,
}

impl From<Mech> for MechanismKind {
    fn from(m: Mech) -> Self {
        match m {
            Mech::Shapley => MechanismKind::Shapley,
            Mech::Bird => MechanismKind::Bird,
            Mech::ShortestPath => MechanismKind::ShortestPath,
        }
    }
}

/// Options shared by the commands that run a mechanism.
#[derive(clap::Args, Debug)]
pub struct RunConfig {
    /// Instance file.
    pub instance: PathBuf,
    /// Report overlay applied on top of truthful reporting.
    #[arg(long)]
    pub reports: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "shortest-path")]
    pub mech: Mech,
    /// Seed for breaking depth ties in the shortest-path rule.
    #[arg(long, env = "DAGSHARE_TIE_SEED", default_value_t = DEFAULT_TIE_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
    /// Evaluate everything on the calling thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a mechanism and print the outcome.
    Run(RunConfig),
    /// Check every property of a mechanism on an instance.
    Audit {
        #[command(flatten)]
        config: RunConfig,
        /// Maximum number of node deviations to enumerate; 0 skips the search.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: usize,
        /// Comma-separated contractor misreport factors.
        #[arg(long, value_delimiter = ',', default_value = "1/2,9/10,11/10,2")]
        grid: Vec<Cost>,
    },
    /// Write a random valid instance.
    Gen {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        contractors: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 1)]
        min_cost: u64,
        #[arg(long, default_value_t = 20)]
        max_cost: u64,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Trace the shortest-path rule node by node.
    Explain {
        instance: PathBuf,
        #[arg(long)]
        reports: Option<PathBuf>,
        #[arg(long, env = "DAGSHARE_TIE_SEED", default_value_t = DEFAULT_TIE_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Syntax { .. } => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load(instance: &Path, reports: Option<&Path>) -> Result<(Instance, ReportProfile), Failure> {
    let inst = parse_instance(&read(instance)?)?;
    validate_instance(&inst)?;
    let profile = match reports {
        Some(p) => parse_overlay(&inst, &read(p)?)?,
        None => ReportProfile::truthful(&inst),
    };
    Ok((inst, profile))
}

fn mechanism(config: &RunConfig) -> Mechanism {
    let execution = if config.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    Mechanism::new(config.mech.into())
        .with_tie_seed(config.seed)
        .with_execution(execution)
}

fn cost_map<'a, K: ToString + 'a>(items: impl IntoIterator<Item = (&'a K, &'a Cost)>) -> Value {
    Value::Object(
        items
            .into_iter()
            .map(|(k, c)| (k.to_string(), Value::String(c.to_string())))
            .collect::<Map<_, _>>(),
    )
}

/// Key-sorted machine form of an outcome.
pub fn outcome_json(outcome: &Outcome) -> Value {
    let detail = match &outcome.detail {
        ShareDetail::Shapley(phi) => json!({ "shapley": cost_map(&phi.values) }),
        ShareDetail::Bird(b) => json!({ "entering_costs": cost_map(&b.entering_costs) }),
        ShareDetail::ShortestPath(d) => json!({
            "order": d.order().iter().map(|n| n.to_string()).collect::<Vec<_>>(),
            "residual_costs": cost_map(d.steps.iter().map(|s| (&s.node, &s.residual_cost))),
            "total": d.total.to_string(),
        }),
    };
    let sel = &outcome.selection;
    json!({
        "mechanism": outcome.mechanism.name(),
        "winner": sel.winner.to_string(),
        "runner_up": sel.runner_up.to_string(),
        "arborescence_costs": cost_map(&sel.all_costs),
        "payments": cost_map(&outcome.payments),
        "selected_edges": outcome.selected_edges.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "shares": cost_map(&outcome.shares),
        "detail": detail,
        "diagnostics": outcome.diagnostics,
    })
}

pub fn outcome_text(outcome: &Outcome) -> String {
    let sel = &outcome.selection;
    let mut out = String::new();
    let _ = writeln!(out, "mechanism {}", outcome.mechanism);
    let _ = writeln!(
        out,
        "winner {} (arborescence cost {}), runner-up {} ({})",
        sel.winner, sel.winner_cost, sel.runner_up, sel.runner_up_cost
    );
    out.push_str("payments\n");
    for (k, p) in &outcome.payments {
        let _ = writeln!(out, "  {k} {p}");
    }
    out.push_str("selected edges\n");
    for e in &outcome.selected_edges {
        let _ = writeln!(out, "  {e}");
    }
    out.push_str("shares\n");
    for (n, x) in &outcome.shares {
        let _ = writeln!(out, "  {n} {x}");
    }
    out
}

fn render(format: Format, text: String, value: Value) -> String {
    match format {
        Format::Human => text,
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(&value).expect("json values always serialize");
            s.push('\n');
            s
        }
    }
}

fn warn_diagnostics(outcome: &Outcome, err: &mut dyn Write) {
    for d in &outcome.diagnostics {
        let _ = writeln!(err, "warning: {d}");
    }
}

fn cmd_run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let (inst, reports) = load(&config.instance, config.reports.as_deref())?;
    let outcome = mechanism(config).run(&inst, &reports)?;
    warn_diagnostics(&outcome, err);
    let _ = out.write_all(render(config.format, outcome_text(&outcome), outcome_json(&outcome)).as_bytes());
    Ok(EXIT_OK)
}

fn cmd_audit(
    config: &RunConfig,
    budget: usize,
    grid: &[Cost],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let (inst, reports) = load(&config.instance, config.reports.as_deref())?;
    let audit_config = AuditConfig {
        node_budget: budget,
        grid: DeviationGrid {
            factors: grid.to_vec(),
            ..DeviationGrid::default()
        },
        reports: Some(reports),
    };
    let report = audit_all(&inst, &mechanism(config), &audit_config)?;
    warn_diagnostics(&report.outcome, err);
    let _ = out.write_all(render(config.format, report.to_text(&inst), report.to_json(&inst)).as_bytes());
    match report.first_failure() {
        None => Ok(EXIT_OK),
        Some(v) => {
            let _ = writeln!(err, "property failed: {}", v.property);
            Ok(EXIT_PROPERTY)
        }
    }
}

fn cmd_explain(
    path: &Path,
    reports: Option<&Path>,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let (inst, reports) = load(path, reports)?;
    let outcome = Mechanism::shortest_path().with_tie_seed(seed).run(&inst, &reports)?;
    warn_diagnostics(&outcome, err);
    let ShareDetail::ShortestPath(d) = &outcome.detail else {
        unreachable!("shortest-path mechanism yields a path decomposition")
    };
    let mut text = String::new();
    let _ = writeln!(
        text,
        "winner {}; processing order {} (tie seed {seed})",
        outcome.selection.winner,
        d.order().iter().map(|n| n.as_str()).collect::<Vec<_>>().join(",")
    );
    let mut steps = Vec::new();
    for s in &d.steps {
        let zeroed: Vec<String> = s.newly_zeroed.iter().map(|e| e.to_string()).collect();
        let covered: Vec<&str> = s.covered_before.iter().map(|n| n.as_str()).collect();
        let path: Vec<&str> = s.path_nodes.iter().map(|n| n.as_str()).collect();
        let _ = writeln!(
            text,
            "d({})={} path {} zeroed [{}] covered before {{{}}}",
            s.node,
            s.residual_cost,
            path.join("->"),
            zeroed.join(","),
            covered.join(",")
        );
        steps.push(json!({
            "node": s.node.to_string(),
            "d": s.residual_cost.to_string(),
            "path": path,
            "zeroed": zeroed,
            "covered_before": covered,
        }));
    }
    let _ = writeln!(text, "B={}", d.total);
    let value = json!({
        "winner": outcome.selection.winner.to_string(),
        "tie_seed": seed,
        "steps": steps,
        "total": d.total.to_string(),
    });
    let _ = out.write_all(render(format, text, value).as_bytes());
    Ok(EXIT_OK)
}

fn cmd_gen(params: &GeneratorParams, output: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = serialize_instance(&generate_instance(params)?);
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(p.to_path_buf(), e))?,
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run(config) => cmd_run(config, out, err),
        Command::Audit { config, budget, grid } => cmd_audit(config, *budget, grid, out, err),
        Command::Explain {
            instance,
            reports,
            seed,
            format,
        } => cmd_explain(instance, reports.as_deref(), *seed, *format, out, err),
        Command::Gen {
            seed,
            nodes,
            contractors,
            density,
            min_cost,
            max_cost,
            output,
        } => cmd_gen(
            &GeneratorParams {
                seed: *seed,
                nodes: *nodes,
                contractors: *contractors,
                edge_density: *density,
                cost_range: (*min_cost, *max_cost),
            },
            output.as_deref(),
            out,
        ),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Io(path, e)) => {
            let _ = writeln!(err, "IoError: {}: {e}", path.display());
            EXIT_IO
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "{}: {e}", e.name());
            exit_code(&e)
        }
    }
}
