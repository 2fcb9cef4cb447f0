use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use graphcov::graph::{find_greedy_trap, greedy_traps, trap_catalog};
use graphcov::sim::{
    derive_seed, execute_replications, execute_run, replicate, Algorithm, GeneratorSpec,
    GraphSource, Placement, Recipe, RunConfig, GRAPH_STREAM,
};
use graphcov::stability::{brute_force_max_coverage_with_budget, DEFAULT_ENUMERATION_BUDGET};
use graphcov::{Error, Graph, NeighborhoodTable};

/// `println!` that reports a closed stdout as an error instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        writeln!(std::io::stdout(), $($arg)*)?;
    }};
}

#[derive(Parser)]
#[command(
    name = "graphcov",
    version,
    about = "Multi-agent graph coverage simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    GenGraph(GenGraphArgs),
    /// Run CFCM or BLLL and write a per-tick CSV trace.
    Run(RunArgs),
    /// Run one of the built-in replication recipes.
    Replicate(ReplicateArgs),
    /// Exact maximum coverage, nu and greedy traps of small instances.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Star,
    Cycle,
    Complete,
    Rgg,
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long = "type", value_enum)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Connection radius for rgg.
    #[arg(long, required_if_eq("family", "rgg"))]
    radius: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Sensing range used for the reported nu.
    #[arg(long, default_value_t = 1)]
    delta: usize,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_with::<Algorithm>, default_value = "cfcm")]
    algorithm: Algorithm,
    /// Edge-list file or generator spec (path:5, star:5, cycle:12, complete:4, rgg:50:0.205).
    #[arg(long, value_parser = parse_with::<GraphSource>)]
    graph: GraphSource,
    #[arg(long)]
    agents: usize,
    /// `all-at`, `all-at:<node>` or a comma-separated profile.
    #[arg(long, value_parser = parse_with::<Placement>, default_value = "all-at:0")]
    initial: Placement,
    #[arg(long, default_value_t = 1)]
    delta: usize,
    #[arg(long, default_value_t = 0.015)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.5)]
    r: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trace: PathBuf,
    /// Summary window `START..=END` or `START:END`, inclusive.
    #[arg(long, value_parser = parse_window)]
    window: Option<RangeInclusive<u64>>,
    /// Coverage counted as on target in the summary.
    #[arg(long)]
    target: Option<usize>,
    /// Independent runs on parallel threads, each with a derived seed.
    #[arg(long, default_value_t = 1)]
    replications: usize,
}

#[derive(Args)]
struct ReplicateArgs {
    #[arg(value_parser = parse_with::<Recipe>)]
    recipe: Recipe,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trace: PathBuf,
    /// Also write the generated graph here.
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Edge-list file to analyze.
    #[arg(long, required_unless_present = "catalog")]
    graph: Option<PathBuf>,
    /// Search the trap catalog up to this many nodes instead.
    #[arg(long, conflicts_with = "graph")]
    catalog: Option<usize>,
    #[arg(long)]
    agents: usize,
    #[arg(long, default_value_t = 1)]
    delta: usize,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u128,
}

fn parse_with<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_window(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(':'))
        .ok_or_else(|| format!("bad window `{s}`"))?;
    let a: u64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad window start `{a}`"))?;
    let b: u64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad window end `{b}`"))?;
    if a > b {
        return Err(format!("empty window `{s}`"));
    }
    Ok(a..=b)
}

fn graph_stats(g: &Graph, delta: usize) -> String {
    let nu = g
        .nu(delta)
        .map_or("undefined".to_string(), |v| v.to_string());
    format!(
        "nodes={}\nedges={}\nconnected={}\nnu={nu}",
        g.node_count(),
        g.edge_count(),
        g.is_connected()
    )
}

fn gen_graph(args: GenGraphArgs) -> Result<()> {
    let spec = match args.family {
        Family::Path => GeneratorSpec::Path(args.n),
        Family::Star => GeneratorSpec::Star(args.n),
        Family::Cycle => GeneratorSpec::Cycle(args.n),
        Family::Complete => GeneratorSpec::Complete(args.n),
        Family::Rgg => GeneratorSpec::Rgg {
            n: args.n,
            radius: args.radius.context("--radius is required for rgg")?,
        },
    };
    let g = spec.generate(derive_seed(args.seed, GRAPH_STREAM))?;
    g.save(&args.out)?;
    out!("{}", graph_stats(&g, args.delta));
    out!("out={}", args.out.display());
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let config = RunConfig {
        algorithm: args.algorithm,
        graph: args.graph,
        agents: args.agents,
        initial: args.initial,
        delta: args.delta,
        epsilon: args.epsilon,
        r: args.r,
        steps: args.steps,
        seed: args.seed,
        trace_path: args.trace,
        window: args.window,
        target: args.target,
    };
    if args.replications == 1 {
        out!("{}", execute_run(&config)?);
        return Ok(());
    }
    for (i, summary) in execute_replications(&config, args.replications)?
        .iter()
        .enumerate()
    {
        out!("replication={i}\n{summary}\n");
    }
    Ok(())
}

fn replicate_cmd(args: ReplicateArgs) -> Result<()> {
    let report = replicate(args.recipe, args.seed, args.trace)?;
    if let Some(path) = args.graph_out {
        graphcov::sim::replication_graph(args.seed)?
            .graph
            .save(path)?;
    }
    out!("{report}");
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    if let Some(max_nodes) = args.catalog {
        let mut found = 0;
        for (name, g) in trap_catalog(max_nodes)? {
            let table = NeighborhoodTable::new(&g, args.delta);
            for profile in greedy_traps(&g, args.agents, args.delta)? {
                found += 1;
                let list: Vec<String> = profile.iter().map(|p| p.to_string()).collect();
                out!(
                    "trap graph={name} profile={} coverage={}",
                    list.join(","),
                    table.covered_count(&profile)
                );
            }
        }
        out!("traps={found}");
        if found > 0 {
            let best = find_greedy_trap(max_nodes, args.agents, args.delta)?;
            out!(
                "selected={} profile={} coverage={} optimum={} nu={}",
                best.name,
                best.profile,
                best.coverage,
                best.optimum,
                best.graph.nu(args.delta)?
            );
        }
        return Ok(());
    }
    let path = args.graph.expect("clap enforces --graph or --catalog");
    let g = Graph::load(&path)?.graph;
    let best = match brute_force_max_coverage_with_budget(&g, args.agents, args.delta, args.budget)
    {
        Err(e @ Error::BudgetExceeded { .. }) => {
            bail!("{e}; try a smaller graph or fewer agents")
        }
        other => other?,
    };
    out!("{}", graph_stats(&g, args.delta));
    out!("max_coverage={}", best.value);
    out!("maximizers={}", best.maximizers.len());
    if let Some(first) = best.maximizers.first() {
        let list: Vec<String> = first.iter().map(|p| p.to_string()).collect();
        out!("example_maximizer={}", list.join(","));
    }
    let table = NeighborhoodTable::new(&g, args.delta);
    let traps = greedy_traps(&g, args.agents, args.delta)?;
    out!("traps={}", traps.len());
    for profile in traps {
        let list: Vec<String> = profile.iter().map(|p| p.to_string()).collect();
        out!(
            "trap profile={} coverage={}",
            list.join(","),
            table.covered_count(&profile)
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = match cli.command {
        Command::GenGraph(args) => gen_graph(args),
        Command::Run(args) => run(args),
        Command::Replicate(args) => replicate_cmd(args),
        Command::Analyze(args) => analyze(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
