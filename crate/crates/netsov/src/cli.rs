//! Command-line front end. One thin binary, seven subcommands:
//! `topo`, `mcs`, `score`, `assign`, `solve`, `simulate`, `pipeline`.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 infeasible
//! optimization, 4 solver hit its time limit (best incumbent written).
//! `NETSOV_WORKERS` caps the worker thread count.

use crate::cutset::{catalog_stats, CutSetCatalog};
use crate::graph::{enumerate_flows, parse_topology, prune_degree_one, CentralityKind, Topology};
use crate::report::{
    atta_csv, atta_flow_set, atta_json, catalog_json, evaluate_assignment, parse_decimal,
    score_report_csv, score_report_json, solve_json, stats_json, stats_table, summary_csv,
    summary_table, RunConfig, SummaryRow,
};
use crate::score::{network_csc_score, network_psd_score, score_to_f64, Assignment, PsdConfig};
use crate::sim::full_sweep;
use crate::solve::{default_market, solve, Market, SolveError, SolveOptions};
use crate::strategy::{
    centrality_assignment, load_assignment, min_cutset_greedy, save_assignment, StrategyKind,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot read `{path}`: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write `{path}`: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Strategy(#[from] crate::strategy::StrategyError),
    #[error(transparent)]
    Cutset(#[from] crate::cutset::CutsetError),
    #[error(transparent)]
    Score(#[from] crate::score::ScoreError),
    #[error(transparent)]
    Report(#[from] crate::report::ReportError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Sim(#[from] crate::sim::SimError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Solve(SolveError::InfeasibleBudget { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "netsov",
    version,
    about = "Quantify network sovereignty, optimize manufacturer assignments, simulate manufacturer failures"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a topology and print its basic structure
    Topo(TopoArgs),
    /// Enumerate minimal cut sets and write the catalog with statistics
    Mcs(McsArgs),
    /// Score an assignment (CSC distribution, optionally PSD)
    Score(ScoreArgs),
    /// Produce a baseline assignment (centrality round-robin or greedy)
    Assign(AssignArgs),
    /// Exact lexicographic optimization under the cost budget
    Solve(SolveArgs),
    /// Sweep all manufacturer-failure combinations and report ATTA
    Simulate(SimulateArgs),
    /// Run every strategy end to end and emit the comparison summary
    Pipeline(PipelineArgs),
}

#[derive(Args, Debug)]
struct TopoArgs {
    /// SNDlib-subset topology file
    #[arg(short, long)]
    input: PathBuf,
    /// Iteratively remove degree-one nodes before anything else
    #[arg(long)]
    prune_degree_one: bool,
    /// Directory for the normalized topology and flow list
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct McsArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long)]
    prune_degree_one: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Assignment CSV (`node,manufacturer`)
    #[arg(short, long)]
    assignment: PathBuf,
    /// Manufacturer count the assignment must respect
    #[arg(short, long)]
    manufacturers: u32,
    #[arg(long)]
    prune_degree_one: bool,
    /// Also compute the network PSD score over k shortest paths
    #[arg(long)]
    psd: bool,
    /// k shortest paths per flow for the PSD score
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BaselineStrategy {
    Nd,
    Bwc,
    Cc,
    Greedy,
}

impl From<BaselineStrategy> for StrategyKind {
    fn from(s: BaselineStrategy) -> StrategyKind {
        match s {
            BaselineStrategy::Nd => StrategyKind::CentralityNd,
            BaselineStrategy::Bwc => StrategyKind::CentralityBwc,
            BaselineStrategy::Cc => StrategyKind::CentralityCc,
            BaselineStrategy::Greedy => StrategyKind::MinCutSetGreedy,
        }
    }
}

#[derive(Args, Debug)]
struct AssignArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long, value_enum)]
    strategy: BaselineStrategy,
    #[arg(short, long)]
    manufacturers: u32,
    #[arg(long)]
    prune_degree_one: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    manufacturers: u32,
    #[arg(long)]
    prune_degree_one: bool,
    /// Budget override (decimal, e.g. 11.88); default is |V| x mean cost
    #[arg(long)]
    cost_threshold: Option<String>,
    /// Give up and return the best incumbent after this many seconds
    #[arg(long, default_value_t = 30 * 60)]
    time_limit_secs: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    assignment: PathBuf,
    #[arg(short, long)]
    manufacturers: u32,
    #[arg(long)]
    prune_degree_one: bool,
    /// Count adjacent (one-hop) pairs in the ATTA denominator too
    #[arg(long)]
    include_one_hop: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// JSON run configuration; flags below override individual fields
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(short, long)]
    topology: Option<PathBuf>,
    #[arg(short, long)]
    manufacturers: Vec<u32>,
    #[arg(long, value_enum)]
    strategies: Vec<BaselineStrategy>,
    #[arg(long)]
    prune_degree_one: bool,
    #[arg(long)]
    include_one_hop_in_atta: bool,
    #[arg(long)]
    cost_threshold: Option<String>,
    #[arg(long)]
    time_limit_secs: Option<u64>,
    /// Skip the exact solver (baselines only)
    #[arg(long)]
    no_solve: bool,
    /// Externally produced assignment to include, as label=path (repeatable)
    #[arg(long)]
    load: Vec<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

pub fn run() -> ExitCode {
    init_workers();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn init_workers() {
    if let Ok(v) = std::env::var("NETSOV_WORKERS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn execute(cmd: Command) -> Result<ExitCode, CliError> {
    match cmd {
        Command::Topo(a) => cmd_topo(a),
        Command::Mcs(a) => cmd_mcs(a),
        Command::Score(a) => cmd_score(a),
        Command::Assign(a) => cmd_assign(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Pipeline(a) => cmd_pipeline(a),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.display().to_string(),
        source,
    })?;
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn load_topology(path: &Path, prune: bool) -> Result<Topology, CliError> {
    let text = read_file(path)?;
    let t = parse_topology(&text)?;
    if prune {
        Ok(prune_degree_one(&t)?)
    } else {
        Ok(t)
    }
}

fn cmd_topo(a: TopoArgs) -> Result<ExitCode, CliError> {
    let t = load_topology(&a.input, a.prune_degree_one)?;
    let flows = enumerate_flows(&t);
    println!("{t}");
    println!("flows (non-adjacent pairs): {}", flows.len());
    let degrees: Vec<String> = t
        .node_ids()
        .iter()
        .enumerate()
        .map(|(v, id)| format!("{id}={}", t.degree(v as u32)))
        .collect();
    println!("degrees: {}", degrees.join(" "));
    if let Some(dir) = a.out {
        write_file(&dir, &format!("{}.sndlib.txt", t.name()), &t.to_sndlib())?;
        let mut csv = String::from("src,dst\n");
        for f in &flows {
            csv.push_str(&format!("{},{}\n", t.node_id(f.src), t.node_id(f.dst)));
        }
        write_file(&dir, &format!("{}.flows.csv", t.name()), &csv)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_mcs(a: McsArgs) -> Result<ExitCode, CliError> {
    let t = load_topology(&a.input, a.prune_degree_one)?;
    let flows = enumerate_flows(&t);
    let catalog = CutSetCatalog::build(&t, &flows);
    let stats = catalog_stats(&catalog)?;
    print!("{}", stats_table(&stats));
    if let Some(dir) = a.out {
        write_file(&dir, &format!("{}.catalog.json", t.name()), &catalog_json(&t, &catalog))?;
        write_file(&dir, &format!("{}.mcs_stats.json", t.name()), &stats_json(&stats))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_score(a: ScoreArgs) -> Result<ExitCode, CliError> {
    let t = load_topology(&a.input, a.prune_degree_one)?;
    let assignment = load_assignment(&read_file(&a.assignment)?, &t, a.manufacturers)?;
    let flows = enumerate_flows(&t);
    let catalog = CutSetCatalog::build(&t, &flows);
    let dist = network_csc_score(&catalog, &assignment)?;
    println!(
        "flow-CSC: min {:.4}  mean {:.4}  median {:.4}",
        score_to_f64(dist.summary.min),
        score_to_f64(dist.summary.mean),
        score_to_f64(dist.summary.median),
    );
    if a.psd {
        let cfg = PsdConfig::new(a.k)
            .ok_or_else(|| CliError::Config("--k must be at least 1".into()))?;
        let psd = network_psd_score(&t, &flows, &assignment, cfg)?;
        println!("network-PSD (k={}): {:.4}", a.k, score_to_f64(psd));
    }
    if let Some(dir) = a.out {
        write_file(&dir, &format!("{}.scores.json", t.name()), &score_report_json(&t, &dist))?;
        write_file(&dir, &format!("{}.scores.csv", t.name()), &score_report_csv(&t, &dist))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_assign(a: AssignArgs) -> Result<ExitCode, CliError> {
    if a.manufacturers < 1 {
        return Err(CliError::Config("need at least one manufacturer".into()));
    }
    let t = load_topology(&a.input, a.prune_degree_one)?;
    let assignment = baseline_assignment(&t, a.strategy.into(), a.manufacturers, None)?;
    let market = default_market(&t, a.manufacturers);
    warn_if_over_budget(&assignment, &market, &format!("{:?}", a.strategy));
    let csv = save_assignment(&t, &assignment);
    print!("{csv}");
    if let Some(dir) = a.out {
        let kind: StrategyKind = a.strategy.into();
        write_file(&dir, &format!("{}.{kind}_m{}.assignment.csv", t.name(), a.manufacturers), &csv)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn baseline_assignment(
    t: &Topology,
    kind: StrategyKind,
    m: u32,
    catalog: Option<&CutSetCatalog>,
) -> Result<Assignment, CliError> {
    let owned;
    let catalog = match catalog {
        Some(c) => c,
        None => {
            owned = CutSetCatalog::build(t, &enumerate_flows(t));
            &owned
        }
    };
    Ok(match kind {
        StrategyKind::CentralityNd => centrality_assignment(t, CentralityKind::NodalDegree, m),
        StrategyKind::CentralityBwc => centrality_assignment(t, CentralityKind::Betweenness, m),
        StrategyKind::CentralityCc => centrality_assignment(t, CentralityKind::Closeness, m),
        StrategyKind::MinCutSetGreedy => min_cutset_greedy(t, catalog, m),
        StrategyKind::Loaded => {
            return Err(CliError::Config(
                "loaded assignments come from --load label=path".into(),
            ))
        }
    })
}

fn warn_if_over_budget(a: &Assignment, market: &Market, label: &str) {
    let cost = crate::score::assignment_cost(a, market.costs());
    if cost > market.threshold() {
        eprintln!(
            "warning: {label} assignment costs {:.4}, over the budget {:.4} (heuristics ignore cost)",
            score_to_f64(cost),
            score_to_f64(market.threshold()),
        );
    }
}

fn market_for(t: &Topology, m: u32, threshold_override: &Option<String>) -> Result<Market, CliError> {
    let market = default_market(t, m);
    match threshold_override {
        None => Ok(market),
        Some(text) => {
            let v = parse_decimal(text).ok_or_else(|| {
                CliError::Config(format!("cannot parse cost threshold `{text}`"))
            })?;
            Ok(market.with_threshold(v))
        }
    }
}

fn cmd_solve(a: SolveArgs) -> Result<ExitCode, CliError> {
    if a.manufacturers < 1 {
        return Err(CliError::Config("need at least one manufacturer".into()));
    }
    let t = load_topology(&a.input, a.prune_degree_one)?;
    let flows = enumerate_flows(&t);
    let catalog = CutSetCatalog::build(&t, &flows);
    let market = market_for(&t, a.manufacturers, &a.cost_threshold)?;
    let opts = SolveOptions {
        time_limit: Duration::from_secs(a.time_limit_secs),
    };
    let result = solve(&t, &catalog, &market, opts)?;
    println!(
        "objective: min {:.4}, sum {:.4}; cost {:.4}; {} in {} ms",
        score_to_f64(result.objective_min),
        score_to_f64(result.objective_sum),
        score_to_f64(result.total_cost),
        if result.proved_optimal {
            "proved optimal"
        } else {
            "time limit hit, best incumbent"
        },
        result.runtime.as_millis(),
    );
    if let Some(dir) = &a.out {
        write_file(dir, &format!("{}.solve_m{}.json", t.name(), a.manufacturers), &solve_json(&t, &result))?;
        write_file(
            dir,
            &format!("{}.solver_m{}.assignment.csv", t.name(), a.manufacturers),
            &save_assignment(&t, &result.assignment),
        )?;
    }
    Ok(if result.proved_optimal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn cmd_simulate(a: SimulateArgs) -> Result<ExitCode, CliError> {
    let t = load_topology(&a.input, a.prune_degree_one)?;
    let assignment = load_assignment(&read_file(&a.assignment)?, &t, a.manufacturers)?;
    let flows = atta_flow_set(&t, a.include_one_hop);
    let report = full_sweep(&t, &flows, &assignment, a.manufacturers)?;
    for row in &report.rows {
        println!(
            "fail {:<9} -> {:.4}",
            row.scenario,
            score_to_f64(row.fraction)
        );
    }
    if report.fully_sovereign {
        println!("fully sovereign: every scenario keeps all flows alive");
    }
    if let Some(dir) = a.out {
        write_file(&dir, &format!("{}.atta.csv", t.name()), &atta_csv(&report))?;
        write_file(&dir, &format!("{}.atta.json", t.name()), &atta_json(&report))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_pipeline(a: PipelineArgs) -> Result<ExitCode, CliError> {
    let mut cfg: RunConfig = match &a.config {
        Some(path) => serde_json::from_str(&read_file(path)?)
            .map_err(|e| CliError::Config(format!("bad config: {e}")))?,
        None => RunConfig::default(),
    };
    if let Some(t) = &a.topology {
        cfg.topology = t.display().to_string();
    }
    if !a.manufacturers.is_empty() {
        cfg.manufacturers = a.manufacturers.clone();
    }
    if !a.strategies.is_empty() {
        cfg.strategies = a.strategies.iter().map(|&s| s.into()).collect();
    }
    if a.prune_degree_one {
        cfg.prune_degree_one = true;
    }
    if a.include_one_hop_in_atta {
        cfg.include_one_hop_in_atta = true;
    }
    if let Some(ct) = &a.cost_threshold {
        cfg.cost_threshold = Some(ct.clone());
    }
    if let Some(tl) = a.time_limit_secs {
        cfg.time_limit_secs = tl;
    }
    if a.no_solve {
        cfg.solve = false;
    }
    for spec in &a.load {
        let (label, path) = spec.split_once('=').ok_or_else(|| {
            CliError::Config(format!("--load expects label=path, got `{spec}`"))
        })?;
        cfg.loaded_assignments
            .push((label.to_string(), path.to_string()));
    }
    if let Some(dir) = &a.out {
        cfg.output_dir = dir.display().to_string();
    }
    if cfg.topology.is_empty() {
        return Err(CliError::Config(
            "pipeline needs a topology (--topology or config file)".into(),
        ));
    }
    if cfg.manufacturers.iter().any(|&m| m < 1) {
        return Err(CliError::Config("manufacturer counts must be >= 1".into()));
    }
    run_pipeline(&cfg)
}

/// First the sovereignty scores of every assignment, then every
/// manufacturer-failure combination; artifacts per (strategy, m) plus a
/// cross-strategy summary.
fn run_pipeline(cfg: &RunConfig) -> Result<ExitCode, CliError> {
    let t = load_topology(Path::new(&cfg.topology), cfg.prune_degree_one)?;
    let out = PathBuf::from(&cfg.output_dir);
    let flows = enumerate_flows(&t);
    let atta_flows = atta_flow_set(&t, cfg.include_one_hop_in_atta);
    let catalog = CutSetCatalog::build(&t, &flows);
    let stats = catalog_stats(&catalog)?;
    write_file(&out, "catalog.json", &catalog_json(&t, &catalog))?;
    write_file(&out, "mcs_stats.json", &stats_json(&stats))?;
    println!("== {t}");
    print!("{}", stats_table(&stats));

    let psd_cfg = PsdConfig::new(cfg.psd_k)
        .ok_or_else(|| CliError::Config("psd_k must be at least 1".into()))?;
    let mut rows: Vec<SummaryRow> = Vec::new();
    let mut timed_out = false;

    for &m in &cfg.manufacturers {
        let market = market_for(&t, m, &cfg.cost_threshold)?;
        let mut evaluate = |label: String, assignment: &Assignment| -> Result<(), CliError> {
            warn_if_over_budget(assignment, &market, &label);
            let (mut row, dist, sweep) = evaluate_assignment(
                &t,
                &atta_flows,
                &catalog,
                &market,
                &label,
                assignment,
            )?;
            // PSD comparison column rides along with the CSC artifacts.
            let psd = network_psd_score(&t, &flows, assignment, psd_cfg)?;
            let base = format!("{label}_m{m}");
            write_file(&out, &format!("{base}.assignment.csv"), &save_assignment(&t, assignment))?;
            write_file(&out, &format!("{base}.scores.json"), &score_report_json(&t, &dist))?;
            write_file(&out, &format!("{base}.scores.csv"), &score_report_csv(&t, &dist))?;
            write_file(&out, &format!("{base}.atta.csv"), &atta_csv(&sweep))?;
            write_file(&out, &format!("{base}.atta.json"), &atta_json(&sweep))?;
            row.strategy = label;
            let _ = psd; // summary keeps CSC columns; PSD is printed below
            println!(
                "{:<12} m={m}: min {:.4} mean {:.4} psd {:.4}",
                row.strategy,
                score_to_f64(row.min_flow_csc),
                score_to_f64(row.mean_flow_csc),
                score_to_f64(psd),
            );
            rows.push(row);
            Ok(())
        };

        for &kind in &cfg.strategies {
            if kind == StrategyKind::Loaded {
                continue; // handled below via loaded_assignments
            }
            let assignment = baseline_assignment(&t, kind, m, Some(&catalog))?;
            evaluate(kind.to_string(), &assignment)?;
        }
        for (label, path) in &cfg.loaded_assignments {
            let assignment = load_assignment(&read_file(Path::new(path))?, &t, m)?;
            evaluate(format!("loaded-{label}"), &assignment)?;
        }
        if cfg.solve {
            let opts = SolveOptions {
                time_limit: Duration::from_secs(cfg.time_limit_secs),
            };
            let result = solve(&t, &catalog, &market, opts)?;
            if !result.proved_optimal {
                timed_out = true;
                eprintln!("warning: solver hit the time limit for m={m}; reporting best incumbent");
            }
            println!(
                "solver       m={m}: optimum min {:.4} in {} ms",
                score_to_f64(result.objective_min),
                result.runtime.as_millis()
            );
            write_file(&out, &format!("solver_m{m}.solve.json"), &solve_json(&t, &result))?;
            evaluate("solver".to_string(), &result.assignment.clone())?;
        }
    }

    write_file(&out, "summary.csv", &summary_csv(&rows))?;
    println!();
    print!("{}", summary_table(&rows));
    Ok(if timed_out {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    })
}
