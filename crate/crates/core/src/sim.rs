//! Run configuration, seeding, and the replication recipes behind the
//! command-line front end.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blll::run_blll;
use crate::cfcm::run_cfcm;
use crate::error::{Error, Result};
use crate::game::ActionProfile;
use crate::graph::{complete, cycle, path, random_geometric, star, Graph, NodeId};
use crate::noise::NoiseParams;
use crate::stability::{
    brute_force_max_coverage, multiset_count, occupancy_statistics, Occupancy,
    DEFAULT_ENUMERATION_BUDGET,
};
use crate::table::NeighborhoodTable;
use crate::trace::{save_trace, TraceRecord};

/// Substream label for graph generation.
pub const GRAPH_STREAM: u64 = 1;
/// Substream label for the dynamics.
pub const DYNAMICS_STREAM: u64 = 2;
/// Replication `i` of a run uses stream `REPLICATION_STREAM + i`.
pub const REPLICATION_STREAM: u64 = 1 << 32;

/// A seed for the substream `label` of `seed`. Distinct labels give
/// decorrelated ChaCha streams.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(label);
    rng.next_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Cfcm,
    Blll,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cfcm" => Ok(Algorithm::Cfcm),
            "blll" => Ok(Algorithm::Blll),
            _ => Err(Error::input(format!(
                "unknown algorithm `{s}` (expected cfcm or blll)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Cfcm => "cfcm",
            Algorithm::Blll => "blll",
        })
    }
}

/// A named graph family with its size parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorSpec {
    Path(usize),
    Star(usize),
    Cycle(usize),
    Complete(usize),
    Rgg { n: usize, radius: f64 },
}

impl GeneratorSpec {
    /// Builds the graph. Only the random geometric family uses `seed`.
    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            GeneratorSpec::Path(n) => path(n),
            GeneratorSpec::Star(n) => star(n),
            GeneratorSpec::Cycle(n) => cycle(n),
            GeneratorSpec::Complete(n) => complete(n),
            GeneratorSpec::Rgg { n, radius } => random_geometric(n, radius, seed),
        }
    }
}

/// Accepts `path:5`, `star:5`, `cycle:12`, `complete:4` and `rgg:50:0.205`.
impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::input(format!("bad generator spec `{s}`"));
        let size = |k: usize| {
            parts
                .get(k)
                .and_then(|p| p.parse::<usize>().ok())
                .ok_or_else(bad)
        };
        let spec = match parts[0] {
            "path" => GeneratorSpec::Path(size(1)?),
            "star" => GeneratorSpec::Star(size(1)?),
            "cycle" => GeneratorSpec::Cycle(size(1)?),
            "complete" => GeneratorSpec::Complete(size(1)?),
            "rgg" => GeneratorSpec::Rgg {
                n: size(1)?,
                radius: parts.get(2).and_then(|p| p.parse().ok()).ok_or_else(bad)?,
            },
            _ => return Err(bad()),
        };
        let expected = if matches!(spec, GeneratorSpec::Rgg { .. }) {
            3
        } else {
            2
        };
        if parts.len() != expected {
            return Err(bad());
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Generator(GeneratorSpec),
}

impl GraphSource {
    /// Loads or generates the graph; generators draw from the graph
    /// substream of `seed`.
    pub fn resolve(&self, seed: u64) -> Result<Graph> {
        match self {
            GraphSource::File(path) => Graph::load(path).map(|loaded| loaded.graph),
            GraphSource::Generator(spec) => spec.generate(derive_seed(seed, GRAPH_STREAM)),
        }
    }
}

/// Anything that parses as a generator spec is one; everything else is a
/// file path.
impl FromStr for GraphSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let family = s.split(':').next().unwrap_or_default();
        if ["path", "star", "cycle", "complete", "rgg"].contains(&family) && s.contains(':') {
            s.parse().map(GraphSource::Generator)
        } else {
            Ok(GraphSource::File(PathBuf::from(s)))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Placement {
    AllAt(NodeId),
    Profile(Vec<NodeId>),
}

impl Default for Placement {
    fn default() -> Self {
        Placement::AllAt(0)
    }
}

/// Accepts `all-at`, `all-at:<node>` or a comma-separated node list.
impl FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::input(format!("bad initial placement `{s}`"));
        if s == "all-at" {
            return Ok(Placement::AllAt(0));
        }
        if let Some(node) = s.strip_prefix("all-at:") {
            return node.parse().map(Placement::AllAt).map_err(|_| bad());
        }
        s.split(',')
            .map(|p| p.trim().parse::<NodeId>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()
            .map(Placement::Profile)
    }
}

impl Placement {
    pub fn profile(&self, agents: usize, delta: usize) -> Result<ActionProfile> {
        match self {
            Placement::AllAt(node) => ActionProfile::all_at(*node, agents, delta),
            Placement::Profile(nodes) if nodes.len() == agents => {
                ActionProfile::new(nodes.clone(), delta)
            }
            Placement::Profile(nodes) => Err(Error::input(format!(
                "initial profile lists {} positions for {agents} agents",
                nodes.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub graph: GraphSource,
    pub agents: usize,
    pub initial: Placement,
    pub delta: usize,
    pub epsilon: f64,
    pub r: f64,
    pub steps: u64,
    pub seed: u64,
    pub trace_path: PathBuf,
    /// Summary window; the last quarter of the run when absent.
    pub window: Option<RangeInclusive<u64>>,
    /// Coverage counted as "at target"; the brute-force optimum when absent
    /// and affordable.
    pub target: Option<usize>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<NoiseParams> {
        if self.steps == 0 {
            return Err(Error::input("steps must be at least 1"));
        }
        if self.agents == 0 {
            return Err(Error::input("at least one agent is required"));
        }
        // BLLL only uses ε; any positive r satisfies the check.
        NoiseParams::new(self.epsilon, self.r)
    }

    pub fn summary_window(&self) -> RangeInclusive<u64> {
        self.window
            .clone()
            .unwrap_or_else(|| self.steps - self.steps / 4..=self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetSource {
    Supplied,
    BruteForce,
    /// Every node is covered by some profile the search found.
    FullCover,
}

impl fmt::Display for TargetSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetSource::Supplied => "supplied",
            TargetSource::BruteForce => "brute-force",
            TargetSource::FullCover => "full-cover",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub nodes: usize,
    pub edges: usize,
    pub nu: Option<usize>,
    pub steps: u64,
    pub window: RangeInclusive<u64>,
    pub occupancy: Occupancy,
    pub target: Option<(usize, TargetSource)>,
    pub final_positions: Vec<NodeId>,
    pub trace_path: PathBuf,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algorithm={}", self.algorithm)?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "nodes={}", self.nodes)?;
        writeln!(f, "edges={}", self.edges)?;
        match self.nu {
            Some(nu) => writeln!(f, "nu={nu}")?,
            None => writeln!(f, "nu=undefined")?,
        }
        writeln!(f, "steps={}", self.steps)?;
        writeln!(f, "window={}..={}", self.window.start(), self.window.end())?;
        writeln!(f, "window_ticks={}", self.occupancy.ticks)?;
        writeln!(f, "mean_covered={:.6}", self.occupancy.mean)?;
        match self.target {
            Some((t, source)) => {
                writeln!(f, "target={t} ({source})")?;
                writeln!(
                    f,
                    "fraction_at_target={:.6}",
                    self.occupancy.fraction_at_target
                )?;
            }
            None => writeln!(f, "target=unknown")?,
        }
        let finals: Vec<String> = self.final_positions.iter().map(|p| p.to_string()).collect();
        writeln!(f, "final_positions={}", finals.join(","))?;
        write!(f, "trace={}", self.trace_path.display())
    }
}

/// Runs one simulation, writes its trace, and summarizes the window.
pub fn execute_run(config: &RunConfig) -> Result<RunSummary> {
    let params = config.validate()?;
    let graph = config.graph.resolve(config.seed)?;
    let initial = config.initial.profile(config.agents, config.delta)?;
    run_on_graph(config, &graph, &initial, &params, None)
}

fn run_on_graph(
    config: &RunConfig,
    graph: &Graph,
    initial: &ActionProfile,
    params: &NoiseParams,
    known_target: Option<(usize, TargetSource)>,
) -> Result<RunSummary> {
    initial.validate(graph)?;
    let dynamics_seed = derive_seed(config.seed, DYNAMICS_STREAM);
    let trace = match config.algorithm {
        Algorithm::Cfcm => run_cfcm(graph, initial, params, config.steps, dynamics_seed)?,
        Algorithm::Blll => run_blll(graph, initial, params, config.steps, dynamics_seed)?,
    };
    save_trace(&trace, &config.trace_path)?;
    let target = match (config.target, known_target) {
        (Some(t), _) => Some((t, TargetSource::Supplied)),
        (None, Some(known)) => Some(known),
        (None, None) => optimum_if_affordable(graph, config.agents, config.delta)?,
    };
    summarize(config, graph, &trace, target)
}

fn optimum_if_affordable(
    graph: &Graph,
    agents: usize,
    delta: usize,
) -> Result<Option<(usize, TargetSource)>> {
    if multiset_count(graph.node_count(), agents) > DEFAULT_ENUMERATION_BUDGET {
        return Ok(
            full_cover(graph, agents, delta).map(|_| (graph.node_count(), TargetSource::FullCover))
        );
    }
    let best = brute_force_max_coverage(graph, agents, delta)?;
    Ok(Some((best.value, TargetSource::BruteForce)))
}

/// Summary statistics of a finished run's trace.
pub fn summarize(
    config: &RunConfig,
    graph: &Graph,
    trace: &[TraceRecord],
    target: Option<(usize, TargetSource)>,
) -> Result<RunSummary> {
    let window = config.summary_window();
    let occupancy =
        occupancy_statistics(trace, window.clone(), target.map_or(usize::MAX, |t| t.0))?;
    Ok(RunSummary {
        algorithm: config.algorithm,
        seed: config.seed,
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        nu: graph.nu(config.delta).ok(),
        steps: config.steps,
        window,
        occupancy,
        target,
        final_positions: trace
            .last()
            .map(|r| r.positions.clone())
            .unwrap_or_default(),
        trace_path: config.trace_path.clone(),
    })
}

/// Trace path of replication `index`: `run.csv` becomes `run.rep3.csv`.
pub fn replication_trace_path(base: &Path, index: usize) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}.rep{index}.{ext}"),
        None => format!("{stem}.rep{index}"),
    };
    base.with_file_name(name)
}

/// `k` independent runs on parallel threads. Replication `i` uses the seed
/// `derive_seed(seed, REPLICATION_STREAM + i)` and its own trace file. A
/// generated graph is drawn once from the base seed and shared.
pub fn execute_replications(config: &RunConfig, k: usize) -> Result<Vec<RunSummary>> {
    if k == 0 {
        return Err(Error::input("replications must be at least 1"));
    }
    let params = config.validate()?;
    let graph = config.graph.resolve(config.seed)?;
    let initial = config.initial.profile(config.agents, config.delta)?;
    initial.validate(&graph)?;
    let target = match config.target {
        Some(t) => Some((t, TargetSource::Supplied)),
        None => optimum_if_affordable(&graph, config.agents, config.delta)?,
    };
    let configs: Vec<RunConfig> = (0..k)
        .map(|i| RunConfig {
            seed: derive_seed(config.seed, REPLICATION_STREAM + i as u64),
            trace_path: replication_trace_path(&config.trace_path, i),
            ..config.clone()
        })
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| scope.spawn(|| run_on_graph(c, &graph, &initial, &params, target)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("replication thread panicked"))
            .collect()
    })
}

/// Greedy set cover of the nodes by δ-balls; returns the chosen centres when
/// at most `agents` balls cover everything.
pub fn full_cover(graph: &Graph, agents: usize, delta: usize) -> Option<Vec<NodeId>> {
    let table = NeighborhoodTable::new(graph, delta);
    let mut uncovered = fixedbitset::FixedBitSet::with_capacity(graph.node_count());
    uncovered.insert_range(..);
    let mut chosen = Vec::new();
    while !uncovered.is_clear() {
        if chosen.len() == agents {
            return None;
        }
        let best = graph.nodes().max_by_key(|&v| {
            (
                table.ball(v).intersection_count(&uncovered),
                std::cmp::Reverse(v),
            )
        })?;
        uncovered.difference_with(table.ball(best));
        chosen.push(best);
    }
    Some(chosen)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    /// CFCM, 200000 ticks, summary over 150000..=200000.
    CfcmFig5,
    /// BLLL, 10000 steps, summary over 7500..=10000.
    BlllFig7,
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cfcm-fig5" => Ok(Recipe::CfcmFig5),
            "blll-fig7" => Ok(Recipe::BlllFig7),
            _ => Err(Error::input(format!(
                "unknown recipe `{s}` (expected cfcm-fig5 or blll-fig7)"
            ))),
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Recipe::CfcmFig5 => "cfcm-fig5",
            Recipe::BlllFig7 => "blll-fig7",
        })
    }
}

pub const REPLICATION_NODES: usize = 50;
pub const REPLICATION_EDGES: usize = 78;
pub const REPLICATION_EDGE_TOLERANCE: usize = 10;
pub const REPLICATION_AGENTS: usize = 13;
/// Radii tried in turn, each with a fresh graph seed, until a graph lands in
/// the edge band and 13 agents can cover it.
pub const REPLICATION_RADII: [f64; 3] = [0.165, 0.16, 0.17];
pub const REPLICATION_ATTEMPTS: usize = 2000;

#[derive(Debug, Clone)]
pub struct ReplicationGraph {
    pub graph: Graph,
    pub radius: f64,
    pub graph_seed: u64,
    pub attempts: usize,
    /// A profile of [`REPLICATION_AGENTS`] nodes covering every node.
    pub cover: Vec<NodeId>,
}

/// A connected 50-node random geometric graph with 78 ± 10 edges that 13
/// agents with δ = 1 can cover completely.
pub fn replication_graph(seed: u64) -> Result<ReplicationGraph> {
    for attempt in 0..REPLICATION_ATTEMPTS {
        let radius = REPLICATION_RADII[attempt % REPLICATION_RADII.len()];
        let graph_seed = derive_seed(seed, GRAPH_STREAM + attempt as u64);
        let graph = match random_geometric(REPLICATION_NODES, radius, graph_seed) {
            Ok(g) => g,
            Err(Error::Generation(_)) => continue,
            Err(e) => return Err(e),
        };
        if graph.edge_count().abs_diff(REPLICATION_EDGES) > REPLICATION_EDGE_TOLERANCE {
            continue;
        }
        if let Some(mut cover) = full_cover(&graph, REPLICATION_AGENTS, 1) {
            cover.resize(REPLICATION_AGENTS, cover[0]);
            return Ok(ReplicationGraph {
                graph,
                radius,
                graph_seed,
                attempts: attempt + 1,
                cover,
            });
        }
    }
    Err(Error::Generation(format!(
        "no suitable replication graph in {REPLICATION_ATTEMPTS} attempts"
    )))
}

impl Recipe {
    pub fn config(&self, seed: u64, trace_path: PathBuf) -> RunConfig {
        let (algorithm, steps, window) = match self {
            Recipe::CfcmFig5 => (Algorithm::Cfcm, 200_000, 150_000..=200_000),
            Recipe::BlllFig7 => (Algorithm::Blll, 10_000, 7_500..=10_000),
        };
        RunConfig {
            algorithm,
            graph: GraphSource::Generator(GeneratorSpec::Rgg {
                n: REPLICATION_NODES,
                radius: REPLICATION_RADII[0],
            }),
            agents: REPLICATION_AGENTS,
            initial: Placement::AllAt(0),
            delta: 1,
            epsilon: 0.015,
            r: 1.5,
            steps,
            seed,
            trace_path,
            window: Some(window),
            target: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReplicationReport {
    pub recipe: Recipe,
    pub radius: f64,
    pub graph_seed: u64,
    pub summary: RunSummary,
}

impl fmt::Display for ReplicationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "recipe={}", self.recipe)?;
        writeln!(f, "radius={}", self.radius)?;
        writeln!(f, "graph_seed={}", self.graph_seed)?;
        write!(f, "{}", self.summary)
    }
}

/// Runs a replication recipe: builds the graph, places every agent on node
/// 0, runs the dynamics and summarizes the recipe's window. The target is
/// full coverage, which the graph is chosen to allow.
pub fn replicate(recipe: Recipe, seed: u64, trace_path: PathBuf) -> Result<ReplicationReport> {
    let config = recipe.config(seed, trace_path);
    let params = config.validate()?;
    let built = replication_graph(seed)?;
    let initial = config.initial.profile(config.agents, config.delta)?;
    let target = Some((built.graph.node_count(), TargetSource::FullCover));
    let summary = run_on_graph(&config, &built.graph, &initial, &params, target)?;
    Ok(ReplicationReport {
        recipe,
        radius: built.radius,
        graph_seed: built.graph_seed,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::load_trace;

    #[test]
    fn seeds_are_decorrelated() {
        assert_eq!(derive_seed(7, 1), derive_seed(7, 1));
        assert_ne!(derive_seed(7, 1), derive_seed(7, 2));
        assert_ne!(derive_seed(7, 1), derive_seed(8, 1));
    }

    #[test]
    fn parsing() {
        assert_eq!(
            "path:5".parse::<GeneratorSpec>().unwrap(),
            GeneratorSpec::Path(5)
        );
        assert_eq!(
            "rgg:50:0.205".parse::<GeneratorSpec>().unwrap(),
            GeneratorSpec::Rgg {
                n: 50,
                radius: 0.205
            }
        );
        assert!("rgg:50".parse::<GeneratorSpec>().is_err());
        assert!("path:5:1".parse::<GeneratorSpec>().is_err());
        assert_eq!(
            "graphs/p5.txt".parse::<GraphSource>().unwrap(),
            GraphSource::File("graphs/p5.txt".into())
        );
        assert_eq!("all-at".parse::<Placement>().unwrap(), Placement::AllAt(0));
        assert_eq!(
            "all-at:3".parse::<Placement>().unwrap(),
            Placement::AllAt(3)
        );
        assert_eq!(
            "1, 3".parse::<Placement>().unwrap(),
            Placement::Profile(vec![1, 3])
        );
        assert!("all-at:x".parse::<Placement>().is_err());
        assert!(Placement::Profile(vec![1]).profile(2, 1).is_err());
        assert_eq!("blll".parse::<Algorithm>().unwrap(), Algorithm::Blll);
        assert!("fig5".parse::<Recipe>().is_err());
    }

    #[test]
    fn replication_paths() {
        assert_eq!(
            replication_trace_path(Path::new("out/run.csv"), 3),
            PathBuf::from("out/run.rep3.csv")
        );
        assert_eq!(
            replication_trace_path(Path::new("run"), 0),
            PathBuf::from("run.rep0")
        );
    }

    #[test]
    fn full_cover_examples() {
        assert_eq!(full_cover(&star(5).unwrap(), 1, 1), Some(vec![0]));
        assert_eq!(full_cover(&path(5).unwrap(), 1, 1), None);
        let p9 = path(9).unwrap();
        let cover = full_cover(&p9, 3, 1).unwrap();
        let t = NeighborhoodTable::new(&p9, 1);
        assert_eq!(t.covered_count(&cover), 9);
    }

    fn config(dir: &Path) -> RunConfig {
        RunConfig {
            algorithm: Algorithm::Cfcm,
            graph: GraphSource::Generator(GeneratorSpec::Path(5)),
            agents: 2,
            initial: Placement::AllAt(0),
            delta: 1,
            epsilon: 0.015,
            r: 1.5,
            steps: 2000,
            seed: 3,
            trace_path: dir.join("run.csv"),
            window: None,
            target: None,
        }
    }

    #[test]
    fn run_summary_matches_written_trace() {
        let dir = std::env::temp_dir().join(format!("graphcov-sim-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let c = config(&dir);
        let summary = execute_run(&c).unwrap();
        assert_eq!(summary.window, 1500..=2000);
        assert_eq!(summary.target, Some((5, TargetSource::BruteForce)));
        let trace = load_trace(&c.trace_path).unwrap();
        assert_eq!(trace.len(), 2001);
        let again = occupancy_statistics(&trace, 1500..=2000, 5).unwrap();
        assert_eq!(again, summary.occupancy);

        let reps = execute_replications(&c, 3).unwrap();
        assert_eq!(reps.len(), 3);
        assert_ne!(reps[0].seed, reps[1].seed);
        for i in 0..reps.len() {
            assert_eq!(
                load_trace(replication_trace_path(&c.trace_path, i))
                    .unwrap()
                    .len(),
                2001
            );
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn rejects_bad_configs() {
        let dir = std::env::temp_dir();
        let mut c = config(&dir);
        c.steps = 0;
        assert!(execute_run(&c).is_err());
        let mut c = config(&dir);
        c.epsilon = 1.5;
        assert!(execute_run(&c).is_err());
        let mut c = config(&dir);
        c.initial = Placement::AllAt(9);
        assert!(execute_run(&c).is_err());
    }
}
