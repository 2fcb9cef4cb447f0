//! Immutable undirected graphs and the hop-distance queries the coverage
//! game is built on.
//!
//! Nodes are dense integer ids in `0..node_count`. Adjacency lists are kept
//! sorted so that neighborhoods, edge listings and file output come out in a
//! canonical order.

mod generate;
mod io;
mod trap;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

pub use generate::{
    caterpillar, complete, cycle, double_star, path, random_geometric, star, RGG_RETRY_BUDGET,
};
pub use io::{read_edge_list, write_edge_list, LoadedGraph};
pub use trap::{
    find_greedy_trap, greedy_traps, is_isolated_local_max, is_local_max, trap_catalog, GreedyTrap,
};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// An undirected simple graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are collapsed; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if node_count == 0 {
            return Err(Error::input("a graph needs at least one node"));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= node_count {
                    return Err(Error::InvalidNode {
                        node: w,
                        node_count,
                    });
                }
            }
            if u == v {
                return Err(Error::input(format!("self-loop at node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: degree_sum / 2,
        })
    }

    /// A graph with `node_count` isolated nodes.
    pub fn empty(node_count: usize) -> Result<Self> {
        Self::from_edges(node_count, std::iter::empty())
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Sorted adjacency list of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node: v,
                node_count: self.node_count(),
            })
        }
    }

    /// Breadth-first hop counts from `source`; `None` marks unreachable nodes.
    pub fn distances_from(&self, source: NodeId) -> Result<Vec<Option<usize>>> {
        self.check_node(source)?;
        Ok(self.bfs(source, usize::MAX))
    }

    /// Length of a shortest path between `v` and `w`, or `None` when they lie
    /// in different components.
    pub fn distance(&self, v: NodeId, w: NodeId) -> Result<Option<usize>> {
        self.check_node(w)?;
        Ok(self.distances_from(v)?[w])
    }

    /// All nodes at most `delta` hops from `v`, including `v` itself.
    pub fn delta_neighborhood(&self, v: NodeId, delta: usize) -> Result<NodeSet> {
        self.check_node(v)?;
        Ok(self.ball(v, delta).into_iter().collect())
    }

    /// `v` together with its adjacent nodes.
    pub fn closed_neighborhood(&self, v: NodeId) -> Result<NodeSet> {
        self.delta_neighborhood(v, 1)
    }

    /// Nodes within `delta` hops of `v`, in breadth-first order. `v` must be
    /// valid.
    pub(crate) fn ball(&self, v: NodeId, delta: usize) -> Vec<NodeId> {
        let dist = self.bfs(v, delta);
        let mut order: Vec<(usize, NodeId)> = dist
            .iter()
            .enumerate()
            .filter_map(|(w, d)| d.map(|d| (d, w)))
            .collect();
        order.sort_unstable();
        order.into_iter().map(|(_, w)| w).collect()
    }

    fn bfs(&self, source: NodeId, limit: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or_default();
            if du >= limit {
                continue;
            }
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0, usize::MAX).iter().all(Option::is_some)
    }

    /// Largest finite eccentricity, or `None` for a disconnected graph.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in self.nodes() {
            for d in self.bfs(v, usize::MAX) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// The largest one-sided difference `|N^δ_v \ N^δ_w|` over all edges,
    /// taken over both orientations of every edge.
    pub fn nu(&self, delta: usize) -> Result<usize> {
        if self.edge_count == 0 {
            return Err(Error::input("nu is undefined for a graph without edges"));
        }
        let balls: Vec<BTreeSet<NodeId>> = self
            .nodes()
            .map(|v| self.ball(v, delta).into_iter().collect())
            .collect();
        Ok(self
            .edges()
            .flat_map(|(u, v)| [(u, v), (v, u)])
            .map(|(u, v)| balls[u].difference(&balls[v]).count())
            .max()
            .unwrap_or(0))
    }

    /// The subgraph induced on `nodes`, relabelled densely in ascending order
    /// of the original ids.
    pub fn induced_subgraph(&self, nodes: &NodeSet) -> Result<InducedSubgraph> {
        for v in nodes.iter() {
            self.check_node(v)?;
        }
        let original: Vec<NodeId> = nodes.iter().collect();
        if original.is_empty() {
            return Err(Error::input("induced subgraph of an empty node set"));
        }
        let mut local = vec![None; self.node_count()];
        for (new, &old) in original.iter().enumerate() {
            local[old] = Some(new);
        }
        let edges = self
            .edges()
            .filter_map(|(u, v)| Some((local[u]?, local[v]?)))
            .collect::<Vec<_>>();
        Ok(InducedSubgraph {
            graph: Graph::from_edges(original.len(), edges)?,
            original,
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("node_count", &self.node_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A subgraph plus the map back to the ids of the parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `original[local_id]` is the parent-graph id.
    pub original: Vec<NodeId>,
}

impl InducedSubgraph {
    pub fn local_id(&self, original: NodeId) -> Option<NodeId> {
        self.original.binary_search(&original).ok()
    }
}

/// An ordered set of node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NodeSet(BTreeSet<NodeId>);

impl NodeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        self.0.insert(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<T: IntoIterator<Item = NodeId>>(iter: T) -> Self {
        NodeSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[NodeId; N]> for NodeSet {
    fn from(nodes: [NodeId; N]) -> Self {
        nodes.into_iter().collect()
    }
}

impl IntoIterator for NodeSet {
    type Item = NodeId;
    type IntoIter = std::collections::btree_set::IntoIter<NodeId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> Graph {
        path(5).unwrap()
    }

    fn s4() -> Graph {
        star(5).unwrap()
    }

    #[test]
    fn distances() {
        let g = p5();
        assert_eq!(g.distance(0, 4).unwrap(), Some(4));
        for v in g.nodes() {
            assert_eq!(g.distance(v, v).unwrap(), Some(0));
        }
        assert_eq!(s4().distance(1, 2).unwrap(), Some(2));
        assert!(matches!(g.distance(0, 5), Err(Error::InvalidNode { .. })));
    }

    #[test]
    fn unreachable_is_none() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.distance(0, 3).unwrap(), None);
        assert!(!g.is_connected());
        assert_eq!(g.diameter(), None);
    }

    #[test]
    fn neighborhoods() {
        let g = p5();
        assert_eq!(
            g.delta_neighborhood(2, 1).unwrap(),
            NodeSet::from([1, 2, 3])
        );
        assert_eq!(
            g.delta_neighborhood(0, 2).unwrap(),
            NodeSet::from([0, 1, 2])
        );
        for v in g.nodes() {
            assert_eq!(g.delta_neighborhood(v, 0).unwrap(), NodeSet::from([v]));
        }
        assert!(g.delta_neighborhood(7, 1).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(p5().is_connected());
        assert!(Graph::empty(1).unwrap().is_connected());
        assert!(!Graph::from_edges(4, [(0, 1), (2, 3)])
            .unwrap()
            .is_connected());
    }

    #[test]
    fn nu_values() {
        // P5: edge (1,2) gives N1 \ N2 = {0}.
        assert_eq!(p5().nu(1).unwrap(), 1);
        // S4: edge (0,1) gives N0 \ N1 = {2,3,4}.
        assert_eq!(s4().nu(1).unwrap(), 3);
        assert!(Graph::empty(3).unwrap().nu(1).is_err());
    }

    #[test]
    fn induced() {
        let g = p5();
        let sub = g.induced_subgraph(&NodeSet::from([1, 2, 3])).unwrap();
        assert_eq!(sub.graph.node_count(), 3);
        assert_eq!(sub.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(sub.original, vec![1, 2, 3]);

        let all: NodeSet = g.nodes().collect();
        let copy = g.induced_subgraph(&all).unwrap();
        assert_eq!(copy.graph, g);
        assert_eq!(copy.original, (0..5).collect::<Vec<_>>());

        let leaves = s4().induced_subgraph(&NodeSet::from([1, 2])).unwrap();
        assert_eq!(leaves.graph.node_count(), 2);
        assert_eq!(leaves.graph.edge_count(), 0);

        assert!(g.induced_subgraph(&NodeSet::from([1, 9])).is_err());
    }

    #[test]
    fn construction_rules() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0]);
    }
}
