use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, NodeId};
use crate::error::{Error, Result};

/// Number of point sets drawn by [`random_geometric`] before giving up on
/// connectivity.
pub const RGG_RETRY_BUDGET: usize = 100;

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::input("a cycle needs at least 3 nodes"));
    }
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Star on `n` nodes: hub 0 joined to leaves `1..n`.
pub fn star(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (1..n).map(|v| (0, v)))
}

pub fn complete(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Two adjacent hubs 0 and 1 carrying `left` and `right` leaves respectively.
pub fn double_star(left: usize, right: usize) -> Result<Graph> {
    let n = 2 + left + right;
    let edges = std::iter::once((0, 1))
        .chain((0..left).map(|k| (0, 2 + k)))
        .chain((0..right).map(|k| (1, 2 + left + k)));
    Graph::from_edges(n, edges)
}

/// A spine path `0 - 1 - ... - (pendants.len()-1)` where spine node `s`
/// carries `pendants[s]` leaves. Leaves are numbered after the spine.
pub fn caterpillar(pendants: &[usize]) -> Result<Graph> {
    let spine = pendants.len();
    let mut edges: Vec<(NodeId, NodeId)> = (1..spine).map(|v| (v - 1, v)).collect();
    let mut next = spine;
    for (s, &count) in pendants.iter().enumerate() {
        for _ in 0..count {
            edges.push((s, next));
            next += 1;
        }
    }
    Graph::from_edges(next, edges)
}

/// Connected random geometric graph: `n` points uniform in the unit square,
/// joined when their Euclidean distance is at most `radius`. Point sets are
/// redrawn until the graph is connected, at most [`RGG_RETRY_BUDGET`] times.
/// Coordinates are discarded.
pub fn random_geometric(n: usize, radius: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::input("random geometric graph needs n >= 1"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::input(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r2 = radius * radius;
    for _ in 0..RGG_RETRY_BUDGET {
        let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let dx = points[u].0 - points[v].0;
                let dy = points[u].1 - points[v].1;
                if dx * dx + dy * dy <= r2 {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no connected graph with n={n}, radius={radius} after {RGG_RETRY_BUDGET} draws"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        let s = star(5).unwrap();
        assert_eq!(s.edge_count(), 4);
        assert_eq!(s.degree(0), 4);
        let ds = double_star(2, 3).unwrap();
        assert_eq!(ds.node_count(), 7);
        assert_eq!(ds.edge_count(), 6);
        let c = caterpillar(&[0, 2, 0, 1]).unwrap();
        assert_eq!(c.node_count(), 7);
        assert!(c.has_edge(1, 4) && c.has_edge(1, 5) && c.has_edge(3, 6));
        assert_eq!(cycle(12).unwrap().edge_count(), 12);
        assert_eq!(complete(4).unwrap().edge_count(), 6);
    }

    #[test]
    fn rgg_single_node() {
        let g = random_geometric(1, 0.1, 3).unwrap();
        assert_eq!(g.node_count(), 1);
        assert!(g.is_connected());
    }

    #[test]
    fn rgg_is_deterministic_and_connected() {
        let a = random_geometric(50, 0.2, 7).unwrap();
        let b = random_geometric(50, 0.2, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.is_connected());
    }

    #[test]
    fn rgg_gives_up_when_radius_is_tiny() {
        assert!(matches!(
            random_geometric(30, 1e-4, 1),
            Err(Error::Generation(_))
        ));
        assert!(random_geometric(5, 0.0, 1).is_err());
    }
}
