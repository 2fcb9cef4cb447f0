//! Communication-free coverage maximization.
//!
//! A stationary agent occasionally (with probability `ε^r`) picks a
//! candidate node next to it and walks an experiment path covering both
//! candidates' δ-neighborhoods. At the last visit of each node on the walk it
//! senses only whether another agent is within δ of where it stands, and
//! credits that 0/1 sample to the estimate of every candidate whose
//! neighborhood contains the node. At the end of the walk it settles on one
//! candidate with log-linear odds in the two estimates.
//!
//! Agents never read each other's positions or utilities: the only input
//! from the rest of the system is the [`LocalView`] built at the start of
//! each tick.

mod path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use path::{experiment_path, is_valid_experiment_path};

use crate::blll::closed_neighbor;
use crate::error::{Error, Result};
use crate::game::ActionProfile;
use crate::graph::{Graph, InducedSubgraph, NodeId, NodeSet};
use crate::noise::NoiseParams;
use crate::table::NeighborhoodTable;
use crate::trace::TraceRecord;

/// Per-agent learning state: the walk being followed (a single node when
/// stationary), the position on it, and the two running estimates.
///
/// `index` is 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AgentState {
    pub sequence: Vec<NodeId>,
    pub index: usize,
    pub est1: usize,
    pub est2: usize,
}

impl AgentState {
    pub fn stationary(node: NodeId) -> Self {
        AgentState {
            sequence: vec![node],
            index: 0,
            est1: 0,
            est2: 0,
        }
    }

    /// A fresh experiment along `walk`, not yet advanced.
    pub fn experimenting(walk: Vec<NodeId>) -> Self {
        AgentState {
            sequence: walk,
            index: 0,
            est1: 0,
            est2: 0,
        }
    }

    pub fn is_stationary(&self) -> bool {
        self.sequence.len() == 1
    }

    /// Current node.
    pub fn position(&self) -> NodeId {
        self.sequence[self.index]
    }

    /// The node the experiment started from.
    pub fn first_candidate(&self) -> NodeId {
        self.sequence[0]
    }

    /// The node being compared against.
    pub fn second_candidate(&self) -> NodeId {
        self.sequence[self.sequence.len() - 1]
    }

    pub fn at_walk_end(&self) -> bool {
        self.index + 1 == self.sequence.len()
    }

    /// True when the current index is the final occurrence of the current
    /// node in the walk.
    pub fn is_last_visit(&self) -> bool {
        let here = self.position();
        !self.sequence[self.index + 1..].contains(&here)
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.sequence.is_empty() || self.index >= self.sequence.len() {
            return Err(Error::input("agent index outside its sequence"));
        }
        self.sequence.iter().try_for_each(|&v| g.check_node(v))?;
        if !self.sequence.windows(2).all(|w| g.has_edge(w[0], w[1])) {
            return Err(Error::input("agent sequence is not a walk"));
        }
        if self.is_stationary() && (self.est1 != 0 || self.est2 != 0) {
            return Err(Error::input("stationary agent with non-zero estimates"));
        }
        Ok(())
    }
}

/// The joint state of all agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlobalState {
    pub agents: Vec<AgentState>,
    pub step: u64,
}

impl GlobalState {
    /// All agents stationary at the profile's positions.
    pub fn from_profile(profile: &ActionProfile) -> Self {
        Self::stationary(profile.positions())
    }

    pub fn stationary(positions: &[NodeId]) -> Self {
        GlobalState {
            agents: positions
                .iter()
                .map(|&v| AgentState::stationary(v))
                .collect(),
            step: 0,
        }
    }

    pub fn positions(&self) -> Vec<NodeId> {
        self.agents.iter().map(AgentState::position).collect()
    }

    pub fn all_stationary(&self) -> bool {
        self.agents.iter().all(AgentState::is_stationary)
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.agents.is_empty() {
            return Err(Error::input("state without agents"));
        }
        self.agents.iter().try_for_each(|a| a.validate(g))
    }
}

/// What an agent senses from where it stands: its δ-neighborhood and whether
/// some other agent is inside it.
#[derive(Debug, Clone, Copy)]
pub struct LocalView<'t> {
    pub center: NodeId,
    pub delta: usize,
    pub visible: &'t [NodeId],
    pub occupied_within_delta: bool,
}

impl LocalView<'_> {
    /// The sampled partial utility at the center: 1 when nobody else covers
    /// it.
    pub fn partial_utility(&self) -> usize {
        usize::from(!self.occupied_within_delta)
    }

    pub fn visible_nodes(&self) -> NodeSet {
        self.visible.iter().copied().collect()
    }

    /// The subgraph the agent can sense.
    pub fn visible_subgraph(&self, g: &Graph) -> Result<InducedSubgraph> {
        g.induced_subgraph(&self.visible_nodes())
    }
}

/// Builds the view of `agent` given everyone's current positions.
pub fn local_view<'t>(
    table: &'t NeighborhoodTable<'_>,
    positions: &[NodeId],
    agent: usize,
) -> Result<LocalView<'t>> {
    if agent >= positions.len() {
        return Err(Error::InvalidAgent {
            index: agent,
            agent_count: positions.len(),
        });
    }
    positions
        .iter()
        .try_for_each(|&v| table.graph().check_node(v))?;
    Ok(view_unchecked(table, positions, agent))
}

fn view_unchecked<'t>(
    table: &'t NeighborhoodTable<'_>,
    positions: &[NodeId],
    agent: usize,
) -> LocalView<'t> {
    let center = positions[agent];
    LocalView {
        center,
        delta: table.delta(),
        visible: table.ball_members(center),
        occupied_within_delta: table.covered_by_other(positions, agent, center),
    }
}

/// Credits the sensed partial utility to the candidate estimates when the
/// agent stands on a node for the last time in its walk. Stationary agents
/// are returned unchanged.
pub fn observe(
    agent: &AgentState,
    view: &LocalView<'_>,
    table: &NeighborhoodTable<'_>,
) -> AgentState {
    let mut next = agent.clone();
    if agent.is_stationary() || !agent.is_last_visit() {
        return next;
    }
    let here = agent.position();
    let sample = view.partial_utility();
    if table.within(here, agent.first_candidate()) {
        next.est1 += sample;
    }
    if table.within(here, agent.second_candidate()) {
        next.est2 += sample;
    }
    next
}

/// One tick of a single agent. Reads nothing about the other agents beyond
/// `view`.
pub fn cfcm_agent_step<R: Rng + ?Sized>(
    agent: &AgentState,
    view: &LocalView<'_>,
    params: &NoiseParams,
    table: &NeighborhoodTable<'_>,
    rng: &mut R,
) -> AgentState {
    debug_assert_eq!(view.center, agent.position());
    let g = table.graph();

    if agent.is_stationary() {
        if rng.gen::<f64>() > params.start_probability() {
            return agent.clone();
        }
        let first = agent.first_candidate();
        let second = closed_neighbor(g, first, rng.gen_range(0..=g.degree(first)));
        let walk = experiment_path(g, first, second, table.delta())
            .expect("closed-neighborhood candidate always yields a walk");
        return AgentState::experimenting(walk);
    }

    let mut next = observe(agent, view, table);
    let (first, second) = (agent.first_candidate(), agent.second_candidate());
    if agent.at_walk_end() {
        let keep_first = params.choice_probability(next.est1, next.est2);
        let chosen = if rng.gen::<f64>() < keep_first {
            first
        } else {
            second
        };
        AgentState::stationary(chosen)
    } else {
        next.index += 1;
        next
    }
}

/// Advances every agent by one tick. Views are taken from the positions at
/// the start of the tick; random draws are consumed in agent order.
pub fn cfcm_step<R: Rng + ?Sized>(
    state: &GlobalState,
    table: &NeighborhoodTable<'_>,
    params: &NoiseParams,
    rng: &mut R,
) -> Result<GlobalState> {
    if !table.graph().is_connected() {
        return Err(Error::Disconnected);
    }
    state.validate(table.graph())?;
    Ok(advance(state, table, params, rng))
}

fn advance<R: Rng + ?Sized>(
    state: &GlobalState,
    table: &NeighborhoodTable<'_>,
    params: &NoiseParams,
    rng: &mut R,
) -> GlobalState {
    let positions = state.positions();
    let agents = state
        .agents
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let view = view_unchecked(table, &positions, i);
            cfcm_agent_step(a, &view, params, table, rng)
        })
        .collect();
    GlobalState {
        agents,
        step: state.step + 1,
    }
}

/// A running CFCM chain with its own seeded random stream.
#[derive(Debug, Clone)]
pub struct CfcmSimulation<'t, 'g> {
    table: &'t NeighborhoodTable<'g>,
    params: NoiseParams,
    rng: ChaCha8Rng,
    state: GlobalState,
}

impl<'t, 'g> CfcmSimulation<'t, 'g> {
    pub fn new(
        table: &'t NeighborhoodTable<'g>,
        initial: GlobalState,
        params: NoiseParams,
        seed: u64,
    ) -> Result<Self> {
        if !table.graph().is_connected() {
            return Err(Error::Disconnected);
        }
        initial.validate(table.graph())?;
        Ok(CfcmSimulation {
            table,
            params,
            rng: ChaCha8Rng::seed_from_u64(seed),
            state: initial,
        })
    }

    pub fn state(&self) -> &GlobalState {
        &self.state
    }

    pub fn step(&mut self) -> &GlobalState {
        self.state = advance(&self.state, self.table, &self.params, &mut self.rng);
        &self.state
    }

    pub fn record(&self) -> TraceRecord {
        let positions = self.state.positions();
        TraceRecord {
            tick: self.state.step,
            covered: self.table.covered_count(&positions),
            positions,
        }
    }
}

/// Runs CFCM for `steps` ticks with all agents initially stationary at the
/// profile's positions. Coverage in each record is measured at the agents'
/// current walking positions.
pub fn run_cfcm(
    g: &Graph,
    initial: &ActionProfile,
    params: &NoiseParams,
    steps: u64,
    seed: u64,
) -> Result<Vec<TraceRecord>> {
    initial.validate(g)?;
    let table = NeighborhoodTable::connected(g, initial.delta())?;
    let mut sim = CfcmSimulation::new(&table, GlobalState::from_profile(initial), *params, seed)?;
    let mut trace = Vec::with_capacity(steps as usize + 1);
    trace.push(sim.record());
    for _ in 0..steps {
        sim.step();
        trace.push(sim.record());
    }
    Ok(trace)
}

#[cfg(test)]
mod tests;
