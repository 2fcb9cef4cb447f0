//! Binary log-linear learning over constrained action sets.
//!
//! This is the communication-assisted baseline: the updating agent evaluates
//! its exact utility for the current and the candidate node, which in
//! practice requires talking to agents up to 2δ away. One agent, drawn
//! uniformly, updates per step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::ActionProfile;
use crate::graph::{Graph, NodeId};
use crate::noise::NoiseParams;
use crate::table::NeighborhoodTable;
use crate::trace::TraceRecord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlllState {
    pub profile: ActionProfile,
    pub step: u64,
}

impl BlllState {
    pub fn new(profile: ActionProfile) -> Self {
        BlllState { profile, step: 0 }
    }
}

/// Probability that the updating agent moves from utility `current` to
/// `candidate`.
pub fn switch_probability(params: &NoiseParams, current: usize, candidate: usize) -> f64 {
    params.choice_probability(candidate, current)
}

/// Candidate `index` in the closed neighborhood `{v} ∪ adj(v)`, sorted.
pub(crate) fn closed_neighbor(g: &Graph, v: NodeId, index: usize) -> NodeId {
    let adj = g.neighbors(v);
    let below = adj.partition_point(|&w| w < v);
    match index.cmp(&below) {
        std::cmp::Ordering::Less => adj[index],
        std::cmp::Ordering::Equal => v,
        std::cmp::Ordering::Greater => adj[index - 1],
    }
}

fn check_table(table: &NeighborhoodTable<'_>, profile: &ActionProfile) -> Result<()> {
    if table.delta() != profile.delta() {
        return Err(Error::input(format!(
            "profile has δ={} but the neighborhood table was built for δ={}",
            profile.delta(),
            table.delta()
        )));
    }
    profile.validate(table.graph())
}

/// One BLLL update. The table must have been built with
/// [`NeighborhoodTable::connected`] or over a graph known to be connected.
pub fn blll_step<R: Rng + ?Sized>(
    state: &BlllState,
    table: &NeighborhoodTable<'_>,
    params: &NoiseParams,
    rng: &mut R,
) -> Result<BlllState> {
    check_table(table, &state.profile)?;
    let mut next = state.clone();
    advance(&mut next, table, params, rng);
    Ok(next)
}

fn advance<R: Rng + ?Sized>(
    state: &mut BlllState,
    table: &NeighborhoodTable<'_>,
    params: &NoiseParams,
    rng: &mut R,
) {
    let g = table.graph();
    let positions = state.profile.positions();
    let agent = rng.gen_range(0..positions.len());
    let current = positions[agent];
    let candidate = closed_neighbor(g, current, rng.gen_range(0..=g.degree(current)));
    let u_now = table.utility_at(positions, agent, current);
    let u_new = table.utility_at(positions, agent, candidate);
    if rng.gen::<f64>() < switch_probability(params, u_now, u_new) {
        state.profile = state.profile.with_position(agent, candidate);
    }
    state.step += 1;
}

/// Zero-noise best response: a uniformly drawn agent compares its current
/// node with a uniformly drawn constrained candidate and moves only when the
/// candidate is strictly better.
pub fn best_response_step<R: Rng + ?Sized>(
    state: &BlllState,
    table: &NeighborhoodTable<'_>,
    rng: &mut R,
) -> Result<BlllState> {
    check_table(table, &state.profile)?;
    let g = table.graph();
    let positions = state.profile.positions();
    let agent = rng.gen_range(0..positions.len());
    let current = positions[agent];
    let candidate = closed_neighbor(g, current, rng.gen_range(0..=g.degree(current)));
    let mut next = state.clone();
    if table.utility_at(positions, agent, candidate) > table.utility_at(positions, agent, current) {
        next.profile = next.profile.with_position(agent, candidate);
    }
    next.step += 1;
    Ok(next)
}

/// Runs BLLL for `steps` updates from `initial`, seeded deterministically.
/// The trace holds the initial record followed by one record per step.
pub fn run_blll(
    g: &Graph,
    initial: &ActionProfile,
    params: &NoiseParams,
    steps: u64,
    seed: u64,
) -> Result<Vec<TraceRecord>> {
    let table = NeighborhoodTable::connected(g, initial.delta())?;
    let mut state = BlllState::new(initial.clone());
    check_table(&table, &state.profile)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let record = |s: &BlllState| TraceRecord {
        tick: s.step,
        covered: table.covered_count(s.profile.positions()),
        positions: s.profile.positions().to_vec(),
    };
    let mut trace = Vec::with_capacity(steps as usize + 1);
    trace.push(record(&state));
    for _ in 0..steps {
        advance(&mut state, &table, params, &mut rng);
        trace.push(record(&state));
    }
    Ok(trace)
}
