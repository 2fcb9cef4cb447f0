//! The distributed graph coverage game.
//!
//! Every agent's action is a node. An agent covers its δ-neighborhood, the
//! potential is the number of covered nodes, and each agent's utility is the
//! number of nodes that only it covers (its marginal contribution), which
//! makes the game an exact potential game. Everything here is a pure
//! function of `(graph, profile)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodeSet};

/// Positions of all agents plus their common sensing range δ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionProfile {
    positions: Vec<NodeId>,
    delta: usize,
}

impl ActionProfile {
    pub fn new(positions: Vec<NodeId>, delta: usize) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::input("a profile needs at least one agent"));
        }
        Ok(ActionProfile { positions, delta })
    }

    /// `agents` agents stacked on one node.
    pub fn all_at(node: NodeId, agents: usize, delta: usize) -> Result<Self> {
        Self::new(vec![node; agents], delta)
    }

    /// Parses a comma-separated list such as `1,3`.
    pub fn parse(literal: &str, delta: usize) -> Result<Self> {
        let positions = literal
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<NodeId>()
                    .map_err(|_| Error::input(format!("bad node id `{s}` in profile `{literal}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(positions, delta)
    }

    pub fn positions(&self) -> &[NodeId] {
        &self.positions
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn agent_count(&self) -> usize {
        self.positions.len()
    }

    pub fn position(&self, agent: usize) -> NodeId {
        self.positions[agent]
    }

    /// The profile `(a'_i, a_{-i})`.
    pub fn with_position(&self, agent: usize, node: NodeId) -> Self {
        let mut next = self.clone();
        next.positions[agent] = node;
        next
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.positions.iter().try_for_each(|&v| g.check_node(v))
    }

    fn check_agent(&self, agent: usize) -> Result<()> {
        if agent < self.agent_count() {
            Ok(())
        } else {
            Err(Error::InvalidAgent {
                index: agent,
                agent_count: self.agent_count(),
            })
        }
    }

    /// Nodes covered by every agent except `agent`.
    fn others_cover(&self, g: &Graph, agent: usize) -> NodeSet {
        self.positions
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != agent)
            .flat_map(|(_, &a)| g.ball(a, self.delta))
            .collect()
    }
}

/// Displays as the comma-separated literal accepted by [`ActionProfile::parse`].
impl fmt::Display for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.positions.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for ActionProfile {
    type Err = Error;

    /// Parses with δ = 1; use [`ActionProfile::parse`] for other ranges.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 1)
    }
}

/// Union of the agents' δ-neighborhoods.
pub fn covered_set(g: &Graph, profile: &ActionProfile) -> Result<NodeSet> {
    profile.validate(g)?;
    Ok(profile
        .positions
        .iter()
        .flat_map(|&a| g.ball(a, profile.delta))
        .collect())
}

/// φ(a) = |V_c(a)|.
pub fn potential(g: &Graph, profile: &ActionProfile) -> Result<usize> {
    covered_set(g, profile).map(|s| s.len())
}

/// Number of nodes covered by `agent` and by no other agent.
pub fn utility(g: &Graph, agent: usize, profile: &ActionProfile) -> Result<usize> {
    profile.validate(g)?;
    profile.check_agent(agent)?;
    let others = profile.others_cover(g, agent);
    Ok(g.ball(profile.positions[agent], profile.delta)
        .into_iter()
        .filter(|&v| !others.contains(v))
        .count())
}

/// 1 when no agent other than `agent` is within δ of `node`, else 0. Only
/// the other agents' positions matter.
pub fn partial_utility(
    g: &Graph,
    agent: usize,
    node: NodeId,
    profile: &ActionProfile,
) -> Result<usize> {
    profile.validate(g)?;
    profile.check_agent(agent)?;
    let dist = g.distances_from(node)?;
    let covered_by_other = profile
        .positions
        .iter()
        .enumerate()
        .any(|(j, &a)| j != agent && dist[a].is_some_and(|d| d <= profile.delta));
    Ok(usize::from(!covered_by_other))
}

/// The one-step moves available from `node`: the node itself and its
/// neighbors.
pub fn constrained_actions(g: &Graph, node: NodeId) -> Result<NodeSet> {
    g.closed_neighborhood(node)
}
