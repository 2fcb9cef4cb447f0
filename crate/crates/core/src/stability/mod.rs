//! Resistance calculus for the chain induced by CFCM.
//!
//! For a feasible transition `x -> x⁺` every agent falls into one of four
//! groups: it stays stationary (`ss`), starts an experiment (`se`), keeps
//! walking (`ee`), or finishes and settles on its first or second candidate
//! (`es1` / `es2`). The transition probability is a product of per-agent
//! factors and its ε-exponent, the resistance, is `r` per starter plus the
//! estimated utility each finisher gives up.
//!
//! Feasibility is checked by rebuilding every agent's successor set from
//! `x` and looking the proposed successor up in it. A finisher's estimates
//! include the sample it takes on the final node of its walk, since that
//! sample is drawn in the same tick as the choice.

mod brute;
mod occupancy;

pub use brute::{
    brute_force_max_coverage, brute_force_max_coverage_with_budget, multiset_count, MaxCoverage,
    DEFAULT_ENUMERATION_BUDGET,
};
pub use occupancy::{occupancy_statistics, Occupancy};

use crate::cfcm::{experiment_path, local_view, observe, AgentState, GlobalState};
use crate::error::{Error, Result};
use crate::noise::NoiseParams;
use crate::table::NeighborhoodTable;

/// How a single agent's state changed over one tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentTransition {
    Stay,
    Start,
    Walk,
    SettleFirst,
    SettleSecond,
}

/// Agent indices grouped by [`AgentTransition`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransitionPartition {
    pub ss: Vec<usize>,
    pub se: Vec<usize>,
    pub ee: Vec<usize>,
    pub es1: Vec<usize>,
    pub es2: Vec<usize>,
}

impl TransitionPartition {
    fn push(&mut self, agent: usize, kind: AgentTransition) {
        match kind {
            AgentTransition::Stay => self.ss.push(agent),
            AgentTransition::Start => self.se.push(agent),
            AgentTransition::Walk => self.ee.push(agent),
            AgentTransition::SettleFirst => self.es1.push(agent),
            AgentTransition::SettleSecond => self.es2.push(agent),
        }
    }

    /// Finishers, `es1 ∪ es2`, in index order.
    pub fn es(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.es1.iter().chain(&self.es2).copied().collect();
        all.sort_unstable();
        all
    }

    /// Whether the five groups are disjoint and together hold `0..agents`.
    pub fn is_partition_of(&self, agents: usize) -> bool {
        let mut seen = vec![false; agents];
        for &i in self
            .ss
            .iter()
            .chain(&self.se)
            .chain(&self.ee)
            .chain(&self.es1)
            .chain(&self.es2)
        {
            if i >= agents || seen[i] {
                return false;
            }
            seen[i] = true;
        }
        seen.into_iter().all(|s| s)
    }
}

/// Resistance split into its integer parts: `starts · r + denied`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Resistance {
    pub starts: usize,
    pub denied: usize,
}

impl Resistance {
    pub fn value(&self, r: f64) -> f64 {
        r * self.starts as f64 + self.denied as f64
    }
}

impl std::ops::Add for Resistance {
    type Output = Resistance;

    fn add(self, rhs: Resistance) -> Resistance {
        Resistance {
            starts: self.starts + rhs.starts,
            denied: self.denied + rhs.denied,
        }
    }
}

/// One possible next state of a single agent.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentSuccessor {
    pub state: AgentState,
    pub kind: AgentTransition,
    pub probability: f64,
}

/// Every next state agent `agent` can reach from `x`, with probabilities.
/// Branches that produce identical states are merged.
pub fn agent_successors(
    table: &NeighborhoodTable<'_>,
    params: &NoiseParams,
    x: &GlobalState,
    agent: usize,
) -> Result<Vec<AgentSuccessor>> {
    let positions = x.positions();
    let view = local_view(table, &positions, agent)?;
    let current = &x.agents[agent];
    let g = table.graph();
    let mut out: Vec<AgentSuccessor> = Vec::new();
    let mut add = |state: AgentState, kind, probability: f64| {
        if let Some(s) = out.iter_mut().find(|s| s.state == state) {
            s.probability += probability;
        } else {
            out.push(AgentSuccessor {
                state,
                kind,
                probability,
            });
        }
    };

    if current.is_stationary() {
        let here = current.position();
        let start = params.start_probability();
        add(current.clone(), AgentTransition::Stay, 1.0 - start);
        let options = g.degree(here) + 1;
        for second in std::iter::once(here).chain(g.neighbors(here).iter().copied()) {
            let walk = experiment_path(g, here, second, table.delta())?;
            let kind = if walk.len() == 1 {
                AgentTransition::Stay
            } else {
                AgentTransition::Start
            };
            add(
                AgentState::experimenting(walk),
                kind,
                start / options as f64,
            );
        }
        return Ok(out);
    }

    let seen = observe(current, &view, table);
    if current.at_walk_end() {
        let keep = params.choice_probability(seen.est1, seen.est2);
        add(
            AgentState::stationary(current.first_candidate()),
            AgentTransition::SettleFirst,
            keep,
        );
        add(
            AgentState::stationary(current.second_candidate()),
            AgentTransition::SettleSecond,
            1.0 - keep,
        );
    } else {
        let mut next = seen;
        next.index += 1;
        add(next, AgentTransition::Walk, 1.0);
    }
    Ok(out)
}

fn check_pair(table: &NeighborhoodTable<'_>, x: &GlobalState, x_next: &GlobalState) -> Result<()> {
    x.validate(table.graph())?;
    x_next.validate(table.graph())?;
    if x.agents.len() != x_next.agents.len() {
        return Err(Error::input("states have different agent counts"));
    }
    Ok(())
}

/// Per-agent transition kinds, rejecting any agent whose proposed next state
/// is not among its successors.
fn transition_kinds(
    table: &NeighborhoodTable<'_>,
    params: &NoiseParams,
    x: &GlobalState,
    x_next: &GlobalState,
) -> Result<Vec<(AgentTransition, f64)>> {
    check_pair(table, x, x_next)?;
    (0..x.agents.len())
        .map(|i| {
            agent_successors(table, params, x, i)?
                .into_iter()
                .find(|s| s.state == x_next.agents[i])
                .map(|s| (s.kind, s.probability))
                .ok_or_else(|| Error::Infeasible {
                    agent: i,
                    reason: "next state is not a successor under CFCM".into(),
                })
        })
        .collect()
}

// Feasibility does not depend on ε or r, only the probabilities do.
fn reference_params() -> NoiseParams {
    NoiseParams::new(0.5, 1.0).expect("valid constants")
}

/// Groups the agents of a feasible transition.
pub fn classify_agents(
    table: &NeighborhoodTable<'_>,
    x: &GlobalState,
    x_next: &GlobalState,
) -> Result<TransitionPartition> {
    let kinds = transition_kinds(table, &reference_params(), x, x_next)?;
    let mut part = TransitionPartition::default();
    for (i, (kind, _)) in kinds.into_iter().enumerate() {
        part.push(i, kind);
    }
    Ok(part)
}

/// Estimated utility an agent gives up in moving from `agent` to `next`.
///
/// `agent` must carry the estimates the choice is made with, i.e. after the
/// sample on the walk's final node (see [`observe`]). Non-finishers deny
/// nothing.
pub fn denied_utility(agent: &AgentState, next: &AgentState) -> Result<usize> {
    let infeasible = |reason: &str| Error::Infeasible {
        agent: 0,
        reason: reason.into(),
    };
    match (agent.is_stationary(), next.is_stationary()) {
        (true, true) => {
            if agent.position() == next.position() {
                Ok(0)
            } else {
                Err(infeasible("a stationary agent cannot jump"))
            }
        }
        (true, false) => {
            if next.first_candidate() == agent.position() && next.index == 0 {
                Ok(0)
            } else {
                Err(infeasible(
                    "an experiment must start where the agent stands",
                ))
            }
        }
        (false, false) => {
            if next.sequence == agent.sequence && next.index == agent.index + 1 {
                Ok(0)
            } else {
                Err(infeasible(
                    "a walking agent must advance one step along its walk",
                ))
            }
        }
        (false, true) => {
            if !agent.at_walk_end() {
                return Err(infeasible("agent settled before finishing its walk"));
            }
            let best = agent.est1.max(agent.est2);
            let chosen = next.position();
            if chosen == agent.first_candidate() {
                Ok(best - agent.est1)
            } else if chosen == agent.second_candidate() {
                Ok(best - agent.est2)
            } else {
                Err(infeasible("settled on a node that was not a candidate"))
            }
        }
    }
}

/// Resistance of a feasible transition in integer parts.
pub fn resistance(
    table: &NeighborhoodTable<'_>,
    x: &GlobalState,
    x_next: &GlobalState,
) -> Result<Resistance> {
    let kinds = transition_kinds(table, &reference_params(), x, x_next)?;
    let positions = x.positions();
    let mut total = Resistance::default();
    for (i, (kind, _)) in kinds.into_iter().enumerate() {
        match kind {
            AgentTransition::Start => total.starts += 1,
            AgentTransition::SettleFirst | AgentTransition::SettleSecond => {
                let view = local_view(table, &positions, i)?;
                let seen = observe(&x.agents[i], &view, table);
                total.denied += denied_utility(&seen, &x_next.agents[i]).map_err(|e| match e {
                    Error::Infeasible { reason, .. } => Error::Infeasible { agent: i, reason },
                    other => other,
                })?;
            }
            AgentTransition::Stay | AgentTransition::Walk => {}
        }
    }
    Ok(total)
}

/// `r · |starters| + Σ denied utility`.
pub fn transition_resistance(
    table: &NeighborhoodTable<'_>,
    x: &GlobalState,
    x_next: &GlobalState,
    r: f64,
) -> Result<f64> {
    resistance(table, x, x_next).map(|res| res.value(r))
}

/// Probability of moving from `x` to `x_next` in one tick.
///
/// A starter whose walk is well formed but differs from the one the
/// deterministic builder produces has probability 0; any other mismatch is an
/// error.
pub fn transition_probability(
    table: &NeighborhoodTable<'_>,
    x: &GlobalState,
    x_next: &GlobalState,
    params: &NoiseParams,
) -> Result<f64> {
    check_pair(table, x, x_next)?;
    let mut probability = 1.0;
    for (i, proposed) in x_next.agents.iter().enumerate() {
        let succ = agent_successors(table, params, x, i)?;
        if let Some(s) = succ.iter().find(|s| &s.state == proposed) {
            probability *= s.probability;
            continue;
        }
        let current = &x.agents[i];
        let (here, target) = (current.position(), proposed.second_candidate());
        let well_formed_start = current.is_stationary()
            && !proposed.is_stationary()
            && proposed.index == 0
            && proposed.est1 == 0
            && proposed.est2 == 0
            && proposed.first_candidate() == here
            && (target == here || table.graph().has_edge(here, target));
        if well_formed_start {
            return Ok(0.0);
        }
        return Err(Error::Infeasible {
            agent: i,
            reason: "next state is not a successor under CFCM".into(),
        });
    }
    Ok(probability)
}

/// All successors of `x` with their probabilities.
pub fn successors(
    table: &NeighborhoodTable<'_>,
    x: &GlobalState,
    params: &NoiseParams,
) -> Result<Vec<(GlobalState, f64)>> {
    x.validate(table.graph())?;
    let per_agent = (0..x.agents.len())
        .map(|i| agent_successors(table, params, x, i))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![(
        GlobalState {
            agents: Vec::new(),
            step: x.step + 1,
        },
        1.0,
    )];
    for options in per_agent {
        out = out
            .into_iter()
            .flat_map(|(partial, p)| {
                options.iter().map(move |s| {
                    let mut next = partial.clone();
                    next.agents.push(s.state.clone());
                    (next, p * s.probability)
                })
            })
            .collect();
    }
    Ok(out)
}

/// Recurrent states of the noiseless chain: every agent stationary.
pub fn is_recurrent(x: &GlobalState) -> bool {
    x.all_stationary()
}

/// Total resistance along a unilateral experimentation path: all-stationary
/// endpoints, exactly one agent starting on the first transition and nobody
/// starting afterwards, and a single walking agent in between.
pub fn unilateral_path_resistance(
    table: &NeighborhoodTable<'_>,
    states: &[GlobalState],
    r: f64,
) -> Result<f64> {
    unilateral_resistance_parts(table, states).map(|res| res.value(r))
}

pub fn unilateral_resistance_parts(
    table: &NeighborhoodTable<'_>,
    states: &[GlobalState],
) -> Result<Resistance> {
    let bad = |msg: &str| {
        Err(Error::input(format!(
            "not a unilateral experimentation path: {msg}"
        )))
    };
    if states.len() < 2 {
        return bad("needs at least two states");
    }
    let (first, last) = (&states[0], &states[states.len() - 1]);
    if !is_recurrent(first) || !is_recurrent(last) {
        return bad("endpoints must be all-stationary");
    }
    for interior in &states[1..states.len() - 1] {
        let walking = interior
            .agents
            .iter()
            .filter(|a| !a.is_stationary())
            .count();
        if walking != 1 {
            return bad("interior states must have exactly one experimenting agent");
        }
    }
    let mut total = Resistance::default();
    for (p, pair) in states.windows(2).enumerate() {
        let part = classify_agents(table, &pair[0], &pair[1])?;
        let expected_starts = usize::from(p == 0);
        if part.se.len() != expected_starts {
            return bad("exactly one start, on the first transition only");
        }
        total = total + resistance(table, &pair[0], &pair[1])?;
    }
    Ok(total)
}
