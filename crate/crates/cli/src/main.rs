//! `jorn5`: command-line access to the nilpotent Jordan algebra workbench.
//!
//! Subcommands inspect the catalog, compute invariant profiles of single
//! instances, run the staged verification pipeline, and emit the dominance
//! graph as DOT or JSON. Exit codes follow a CI-friendly contract:
//! 0 = everything confirmed, 1 = a verification mismatch, 2 = input or
//! parse error (unknown ids, malformed files, bad flags).

use clap::{Args, Parser, Subcommand, ValueEnum};
use jorn5_core::catalog::EntrySpec;
use jorn5_core::{
    assemble_graph, default_data_dir, invariant_profile, load_catalog, load_curves,
    parse_const_expr, parse_node_id, run_all, verify_all_curves, AlgebraId, Catalog, GraphError,
    InvariantProfile, RunConfig, Stage,
};
use std::collections::{BTreeMap, BTreeSet};
use std::error::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const CONFIRMED: u8 = 0;
const MISMATCH: u8 = 1;
const INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "jorn5",
    version,
    about = "Exact-arithmetic workbench for five-dimensional nilpotent Jordan algebras"
)]
struct Cli {
    /// Directory holding catalog.json and curves.json; defaults to the
    /// JORN5_DATA_DIR environment variable, then ./data.
    #[arg(long, global = true, value_name = "DIR")]
    data_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the algebra catalog.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Compute the invariant profile of one algebra instance and compare
    /// it with the recorded table values.
    Invariants(InvariantsArgs),
    /// Run verification stages over the shipped data.
    Verify(VerifyArgs),
    /// Assemble and print derived reports.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// One line per entry: label, dimension, parameters, role.
    List,
    /// The full JSON record of one entry.
    Show { label: String },
}

#[derive(Args)]
struct InvariantsArgs {
    /// Instance name, bare (J_21) or with bracketed parameter values
    /// (J_27[2,3]).
    id: String,
    /// Named parameter value, repeatable: --param eps=2 --param phi=3.
    #[arg(long = "param", value_name = "NAME=EXPR")]
    params: Vec<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Stages to run; `all` runs the whole pipeline in order.
    #[arg(required = true, value_name = "STAGE")]
    stages: Vec<StageArg>,
    /// Override a curve's free-parameter samples, repeatable:
    /// --samples g0=4:9:25.
    #[arg(long = "samples", value_name = "NAME=V1:V2")]
    samples: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StageArg {
    All,
    Identity,
    Invariants,
    Witnesses,
    Obstructions,
    Curves,
    Graph,
    Rigidity,
}

impl StageArg {
    fn stage(self) -> Option<Stage> {
        match self {
            StageArg::All => None,
            StageArg::Identity => Some(Stage::Identity),
            StageArg::Invariants => Some(Stage::Invariants),
            StageArg::Witnesses => Some(Stage::Witnesses),
            StageArg::Obstructions => Some(Stage::Obstructions),
            StageArg::Curves => Some(Stage::Curves),
            StageArg::Graph => Some(Stage::Graph),
            StageArg::Rigidity => Some(Stage::Rigidity),
        }
    }
}

#[derive(Subcommand)]
enum ReportCmd {
    /// Verify every curve, assemble the dominance graph, and print it.
    Graph(GraphArgs),
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, value_enum, default_value_t = Format::Dot)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Override a curve's free-parameter samples (see `verify`).
    #[arg(long = "samples", value_name = "NAME=V1:V2")]
    samples: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let data_dir = cli.data_dir.unwrap_or_else(default_data_dir);
    let outcome = match cli.command {
        Command::Catalog(cmd) => catalog_cmd(&data_dir, cmd),
        Command::Invariants(args) => invariants_cmd(&data_dir, &args),
        Command::Verify(args) => verify_cmd(&data_dir, &args),
        Command::Report(ReportCmd::Graph(args)) => graph_cmd(&data_dir, &args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

type CmdResult = Result<u8, Box<dyn Error>>;

fn load(data_dir: &Path) -> Result<Catalog, Box<dyn Error>> {
    Ok(load_catalog(&data_dir.join("catalog.json"))?)
}

fn catalog_cmd(data_dir: &Path, cmd: CatalogCmd) -> CmdResult {
    let cat = load(data_dir)?;
    match cmd {
        CatalogCmd::List => {
            for e in cat.entries() {
                println!("{}", entry_line(e));
            }
        }
        CatalogCmd::Show { label } => {
            let e = cat.entry(&label)?;
            println!("{}", serde_json::to_string_pretty(e)?);
        }
    }
    Ok(CONFIRMED)
}

fn entry_line(e: &EntrySpec) -> String {
    let mut line = format!("{:<12} dim {}", e.label, e.dim);
    if !e.params.is_empty() {
        let names: Vec<&str> = e.params.iter().map(|p| p.name.as_str()).collect();
        line.push_str(&format!("  params {}", names.join(",")));
    }
    if let Some(alias) = &e.alias_of {
        line.push_str(&format!("  alias of {}", alias.label));
    }
    if let Some(union) = &e.member_of {
        line.push_str(&format!("  member of {union}"));
    }
    if let Some(parts) = &e.sum_of {
        line.push_str(&format!("  sum of {}", parts.join(" + ")));
    }
    line
}

fn invariants_cmd(data_dir: &Path, args: &InvariantsArgs) -> CmdResult {
    let cat = load(data_dir)?;
    let id = resolve_id(&cat, &args.id, &args.params)?;
    let alg = cat.instantiate(&id)?;
    let p = invariant_profile(&alg)?;
    print_profile(&id, &p);

    let recorded = cat.expected_invariants(&id)?;
    let mismatches = recorded.mismatches(&p);
    if mismatches.is_empty() {
        println!("recorded values: match");
        Ok(CONFIRMED)
    } else {
        for m in &mismatches {
            println!("recorded values: {m}");
        }
        Ok(MISMATCH)
    }
}

fn print_profile(id: &AlgebraId, p: &InvariantProfile) {
    let join = |v: &[usize]| {
        v.iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("{id}");
    println!("  dim:           {}", p.dim);
    println!("  annihilator:   {}", p.ann_dim);
    println!("  center:        {}", p.center_dim);
    println!("  derivations:   {}", p.der_dim);
    println!("  orbit:         {}", p.orbit_dim);
    println!("  nilindex:      {}", p.nilindex);
    println!("  power dims:    {}", join(&p.power_dims));
    println!("  type:          {}", join(&p.nilpotency_type));
    println!("  jacobi:        {}", p.jacobi_dim);
    println!("  z2:            {}", p.z2_dim);
    println!("  b2:            {}", p.b2_dim);
    println!("  h2:            {}", p.h2_dim);
    println!("  associative:   {}", p.associative);
}

/// Builds the instance id from a bare or bracketed name plus any --param
/// overrides; named parameters follow the entry's declaration order.
fn resolve_id(cat: &Catalog, name: &str, params: &[String]) -> Result<AlgebraId, Box<dyn Error>> {
    let id = parse_node_id(cat, name)?;
    if params.is_empty() {
        return Ok(id);
    }
    if !id.params.is_empty() {
        return Err("give parameters either in brackets or with --param, not both".into());
    }
    let entry = cat.entry(&id.label)?;
    let mut by_name = BTreeMap::new();
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| format!("--param expects NAME=EXPR, got {p}"))?;
        by_name.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mut values = Vec::new();
    for spec in &entry.params {
        let v = by_name
            .remove(&spec.name)
            .ok_or_else(|| format!("missing --param {}", spec.name))?;
        values.push(parse_const_expr(&v, &BTreeMap::new())?);
    }
    if let Some(name) = by_name.into_keys().next() {
        return Err(format!("{} has no parameter named {name}", id.label).into());
    }
    Ok(AlgebraId::with_params(&id.label, values))
}

fn parse_samples(specs: &[String]) -> Result<BTreeMap<String, Vec<String>>, Box<dyn Error>> {
    let mut map = BTreeMap::new();
    for s in specs {
        let (name, values) = s
            .split_once('=')
            .ok_or_else(|| format!("--samples expects NAME=V1:V2, got {s}"))?;
        let values: Vec<String> = values.split(':').map(|v| v.trim().to_string()).collect();
        if values.iter().any(String::is_empty) {
            return Err(format!("--samples {s} has an empty value").into());
        }
        map.insert(name.trim().to_string(), values);
    }
    Ok(map)
}

fn verify_cmd(data_dir: &Path, args: &VerifyArgs) -> CmdResult {
    let mut cfg = RunConfig::new(data_dir);
    if !args.stages.contains(&StageArg::All) {
        let set: BTreeSet<Stage> = args.stages.iter().filter_map(|s| s.stage()).collect();
        cfg.stages = Some(set);
    }
    cfg.samples = parse_samples(&args.samples)?;

    let report = run_all(&cfg)?;
    for o in &report.outcomes {
        println!("{}: {} checks, {} failures", o.stage, o.checks, o.failures);
    }
    for d in &report.discrepancies {
        println!("  [{}] {}: {}", d.stage, d.subject, d.detail);
    }
    println!("{}", report.summary);
    Ok(if report.passed() { CONFIRMED } else { MISMATCH })
}

fn graph_cmd(data_dir: &Path, args: &GraphArgs) -> CmdResult {
    let cat = load(data_dir)?;
    let curves = load_curves(&data_dir.join("curves.json"), &cat)?;
    let samples = parse_samples(&args.samples)?;

    let built = verify_all_curves(&cat, &curves, &samples)
        .and_then(|reports| assemble_graph(&cat, &curves, &reports));
    let graph = match built {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(classify_graph_error(&e));
        }
    };

    let text = match args.format {
        Format::Dot => graph.emit_dot(),
        Format::Json => graph.emit_json(),
    };
    match &args.out {
        Some(path) => std::fs::write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(CONFIRMED)
}

/// A graph failure is a verification mismatch when the data loaded fine
/// but a check refuted it, and an input error when the files themselves
/// are unusable.
fn classify_graph_error(e: &GraphError) -> u8 {
    match e {
        GraphError::CurveFailed { .. }
        | GraphError::BlockedEdge { .. }
        | GraphError::UnionDimension { .. }
        | GraphError::RigidityUndecided { .. }
        | GraphError::Invariant(_) => MISMATCH,
        _ => INPUT_ERROR,
    }
}
