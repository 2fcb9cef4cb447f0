use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Builds the walk an agent follows to compare `first` with `second`.
///
/// The walk starts at `first`, ends at `second`, moves along edges only, and
/// visits every node of `N^δ_first ∪ N^δ_second`. It is a depth-first tour of
/// the breadth-first tree of that union rooted at `first`, with the subtree
/// under `second` toured last and the final climb back to the root omitted.
/// The walk therefore has at most `2(|union| - 1) + 1` entries and the
/// construction is deterministic.
pub fn experiment_path(
    g: &Graph,
    first: NodeId,
    second: NodeId,
    delta: usize,
) -> Result<Vec<NodeId>> {
    g.check_node(first)?;
    g.check_node(second)?;
    if first != second && !g.has_edge(first, second) {
        return Err(Error::input(format!(
            "experiment target {second} is not in the closed neighborhood of {first}"
        )));
    }

    let n = g.node_count();
    let mut in_union = vec![false; n];
    for v in g
        .ball(first, delta)
        .into_iter()
        .chain(g.ball(second, delta))
    {
        in_union[v] = true;
    }

    // Breadth-first tree restricted to the union. Neighbors are scanned in
    // ascending order, so children lists come out sorted.
    let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([first]);
    seen[first] = true;
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if in_union[w] && !seen[w] {
                seen[w] = true;
                children[u].push(w);
                queue.push_back(w);
            }
        }
    }
    debug_assert!(
        (0..n).all(|v| !in_union[v] || seen[v]),
        "union of adjacent neighborhoods must induce a connected subgraph"
    );

    let mut walk = vec![first];
    for &c in children[first].iter().filter(|&&c| c != second) {
        tour(&children, c, first, &mut walk);
    }
    if second != first {
        // `second` is adjacent to the root, hence a child of it.
        walk.push(second);
        for &c in &children[second] {
            tour(&children, c, second, &mut walk);
        }
    }
    Ok(walk)
}

/// Appends a closed depth-first tour that steps into `node` and returns to
/// `parent`.
fn tour(children: &[Vec<NodeId>], node: NodeId, parent: NodeId, walk: &mut Vec<NodeId>) {
    // Explicit stack: (node, parent, next child index).
    let mut stack = vec![(node, parent, 0usize)];
    walk.push(node);
    while let Some(top) = stack.last_mut() {
        let (u, p, k) = *top;
        if let Some(&c) = children[u].get(k) {
            top.2 += 1;
            walk.push(c);
            stack.push((c, u, 0));
        } else {
            stack.pop();
            walk.push(p);
        }
    }
}

/// Checks the defining properties of an experiment walk: endpoints,
/// adjacency of consecutive entries, and coverage of both neighborhoods.
pub fn is_valid_experiment_path(
    g: &Graph,
    walk: &[NodeId],
    first: NodeId,
    second: NodeId,
    delta: usize,
) -> bool {
    if walk.first() != Some(&first) || walk.last() != Some(&second) {
        return false;
    }
    if walk.iter().any(|&v| v >= g.node_count()) {
        return false;
    }
    if !walk.windows(2).all(|w| g.has_edge(w[0], w[1])) {
        return false;
    }
    g.ball(first, delta)
        .into_iter()
        .chain(g.ball(second, delta))
        .all(|v| walk.contains(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{path, random_geometric, star};
    use proptest::prelude::*;

    #[test]
    fn trivial_walk() {
        let g = path(5).unwrap();
        assert_eq!(experiment_path(&g, 2, 2, 0).unwrap(), vec![2]);
        assert_eq!(experiment_path(&g, 2, 3, 0).unwrap(), vec![2, 3]);
    }

    #[test]
    fn p5_and_star() {
        let g = path(5).unwrap();
        let w = experiment_path(&g, 2, 3, 1).unwrap();
        assert!(is_valid_experiment_path(&g, &w, 2, 3, 1));
        assert_eq!(w, vec![2, 1, 2, 3, 4, 3]);

        let s = star(5).unwrap();
        let w = experiment_path(&s, 0, 1, 1).unwrap();
        assert!(is_valid_experiment_path(&s, &w, 0, 1, 1));
        assert!(w.len() <= 2 * 4 + 1);
        let w = experiment_path(&s, 0, 0, 1).unwrap();
        assert!(is_valid_experiment_path(&s, &w, 0, 0, 1));
        assert_eq!(w.len(), 9);
    }

    #[test]
    fn rejects_distant_target() {
        let g = path(5).unwrap();
        assert!(experiment_path(&g, 0, 2, 1).is_err());
        assert!(experiment_path(&g, 0, 9, 1).is_err());
    }

    proptest! {
        #[test]
        fn walks_are_valid(n in 2usize..25, seed in any::<u64>(), delta in 0usize..3, pick in any::<prop::sample::Index>()) {
            let g = random_geometric(n, 0.4, seed).unwrap();
            let first = pick.index(n);
            for second in std::iter::once(first).chain(g.neighbors(first).iter().copied()) {
                let w = experiment_path(&g, first, second, delta).unwrap();
                prop_assert!(is_valid_experiment_path(&g, &w, first, second, delta));
                let union = g.delta_neighborhood(first, delta).unwrap()
                    .union(&g.delta_neighborhood(second, delta).unwrap());
                prop_assert!(w.len() <= 2 * (union.len() - 1) + 1);
                prop_assert!(w.iter().all(|&v| union.contains(v)));
            }
        }
    }
}
