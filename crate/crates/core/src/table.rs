use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// A graph together with memoized δ-neighborhoods, shared by the learning
/// dynamics so that per-tick coverage and sensing queries are bitset
/// operations instead of breadth-first searches.
#[derive(Debug, Clone)]
pub struct NeighborhoodTable<'g> {
    graph: &'g Graph,
    delta: usize,
    balls: Vec<FixedBitSet>,
    members: Vec<Vec<NodeId>>,
}

impl<'g> NeighborhoodTable<'g> {
    pub fn new(graph: &'g Graph, delta: usize) -> Self {
        let n = graph.node_count();
        let members: Vec<Vec<NodeId>> = graph.nodes().map(|v| graph.ball(v, delta)).collect();
        let balls = members
            .iter()
            .map(|m| {
                let mut bits = FixedBitSet::with_capacity(n);
                m.iter().for_each(|&w| bits.insert(w));
                bits
            })
            .collect();
        NeighborhoodTable {
            graph,
            delta,
            balls,
            members,
        }
    }

    /// Like [`NeighborhoodTable::new`] but rejects disconnected graphs.
    pub fn connected(graph: &'g Graph, delta: usize) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(Self::new(graph, delta))
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn ball(&self, v: NodeId) -> &FixedBitSet {
        &self.balls[v]
    }

    /// Members of N^δ_v in breadth-first order.
    pub fn ball_members(&self, v: NodeId) -> &[NodeId] {
        &self.members[v]
    }

    /// `d(v, w) <= δ`.
    pub fn within(&self, v: NodeId, w: NodeId) -> bool {
        self.balls[v].contains(w)
    }

    /// |V_c| for the given positions.
    pub fn covered_count(&self, positions: &[NodeId]) -> usize {
        let mut cover = FixedBitSet::with_capacity(self.node_count());
        for &a in positions {
            cover.union_with(&self.balls[a]);
        }
        cover.count_ones(..)
    }

    /// Whether some agent other than `agent` sits within δ of `node`.
    pub fn covered_by_other(&self, positions: &[NodeId], agent: usize, node: NodeId) -> bool {
        positions
            .iter()
            .enumerate()
            .any(|(j, &a)| j != agent && self.within(node, a))
    }

    /// Exact utility of `agent` when placed at `node` with the others fixed.
    pub fn utility_at(&self, positions: &[NodeId], agent: usize, node: NodeId) -> usize {
        let mut others = FixedBitSet::with_capacity(self.node_count());
        for (j, &a) in positions.iter().enumerate() {
            if j != agent {
                others.union_with(&self.balls[a]);
            }
        }
        self.balls[node].difference_count(&others)
    }
}
