use super::{caterpillar, double_star, path, star, Graph, NodeId};
use crate::error::{Error, Result};
use crate::game::ActionProfile;
use crate::stability::brute_force_max_coverage;
use crate::table::NeighborhoodTable;

/// A profile that greedy single-agent moves cannot leave although it covers
/// fewer nodes than the optimum.
#[derive(Debug, Clone)]
pub struct GreedyTrap {
    /// Catalog name of the graph, e.g. `double-star(3,2)`.
    pub name: String,
    pub graph: Graph,
    pub profile: ActionProfile,
    pub coverage: usize,
    pub optimum: usize,
    /// Every move away from the profile strictly lowers coverage, rather
    /// than merely never raising it.
    pub isolated: bool,
}

/// The fixed search catalog: every path, star, double star and caterpillar
/// (spine of at least 3 nodes, any pendant counts) with `2..=max_nodes`
/// nodes, in that order and by increasing size within a family.
pub fn trap_catalog(max_nodes: usize) -> Result<Vec<(String, Graph)>> {
    let mut out = Vec::new();
    for n in 2..=max_nodes {
        out.push((format!("path({n})"), path(n)?));
    }
    for n in 3..=max_nodes {
        out.push((format!("star({n})"), star(n)?));
    }
    for n in 4..=max_nodes {
        for right in 1..=(n - 2) / 2 {
            let left = n - 2 - right;
            out.push((
                format!("double-star({left},{right})"),
                double_star(left, right)?,
            ));
        }
    }
    for n in 4..=max_nodes {
        for spine in 3..n {
            for pendants in compositions(n - spine, spine) {
                if pendants.iter().all(|&p| p == 0) {
                    continue;
                }
                let name = format!(
                    "caterpillar({})",
                    pendants
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                out.push((name, caterpillar(&pendants)?));
            }
        }
    }
    Ok(out)
}

/// All ways to write `total` as an ordered sum of `parts` non-negative terms.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Whether no single-agent move within its closed neighborhood strictly
/// raises coverage.
pub fn is_local_max(table: &NeighborhoodTable<'_>, positions: &[NodeId]) -> bool {
    best_single_move(table, positions) <= table.covered_count(positions)
}

/// Whether every move to a different node strictly lowers coverage.
pub fn is_isolated_local_max(table: &NeighborhoodTable<'_>, positions: &[NodeId]) -> bool {
    let here = table.covered_count(positions);
    let g = table.graph();
    let mut moved = positions.to_vec();
    (0..positions.len()).all(|i| {
        g.neighbors(positions[i]).iter().all(|&w| {
            moved[i] = w;
            let lower = table.covered_count(&moved) < here;
            moved[i] = positions[i];
            lower
        })
    })
}

fn best_single_move(table: &NeighborhoodTable<'_>, positions: &[NodeId]) -> usize {
    let g = table.graph();
    let mut moved = positions.to_vec();
    let mut best = 0;
    for i in 0..positions.len() {
        for &w in g.neighbors(positions[i]) {
            moved[i] = w;
            best = best.max(table.covered_count(&moved));
        }
        moved[i] = positions[i];
    }
    best
}

/// Local maxima of coverage on `g` that fall below the optimum, as
/// non-decreasing position lists.
pub fn greedy_traps(g: &Graph, m: usize, delta: usize) -> Result<Vec<Vec<NodeId>>> {
    let best = brute_force_max_coverage(g, m, delta)?.value;
    let table = NeighborhoodTable::new(g, delta);
    let n = g.node_count();
    let mut out = Vec::new();
    let mut profile = vec![0; m];
    loop {
        if table.covered_count(&profile) < best && is_local_max(&table, &profile) {
            out.push(profile.clone());
        }
        let Some(k) = (0..m).rev().find(|&k| profile[k] + 1 < n) else {
            break;
        };
        let v = profile[k] + 1;
        profile[k..].iter_mut().for_each(|p| *p = v);
    }
    Ok(out)
}

type TrapKey = (usize, usize, std::cmp::Reverse<usize>);

/// Searches the catalog for a greedy trap. Among all traps found, returns
/// the one on the graph with the smallest `ν`, then fewest nodes, then the
/// largest coverage gap, then catalog order.
pub fn find_greedy_trap(max_nodes: usize, m: usize, delta: usize) -> Result<GreedyTrap> {
    if m == 0 {
        return Err(Error::input("at least one agent is required"));
    }
    let mut best: Option<(TrapKey, GreedyTrap)> = None;
    for (name, graph) in trap_catalog(max_nodes)? {
        let traps = greedy_traps(&graph, m, delta)?;
        if traps.is_empty() {
            continue;
        }
        let optimum = brute_force_max_coverage(&graph, m, delta)?.value;
        let table = NeighborhoodTable::new(&graph, delta);
        let nu = graph.nu(delta)?;
        for positions in traps {
            let coverage = table.covered_count(&positions);
            let key = (
                nu,
                graph.node_count(),
                std::cmp::Reverse(optimum - coverage),
            );
            if best.as_ref().is_some_and(|(k, _)| *k <= key) {
                continue;
            }
            let profile = ActionProfile::new(positions.clone(), delta)?;
            best = Some((
                key,
                GreedyTrap {
                    name: name.clone(),
                    graph: graph.clone(),
                    profile,
                    coverage,
                    optimum,
                    isolated: is_isolated_local_max(&table, &positions),
                },
            ));
        }
    }
    best.map(|(_, trap)| trap).ok_or_else(|| {
        Error::SearchFailed(format!(
            "no greedy trap for {m} agents with delta {delta} on catalog graphs up to {max_nodes} nodes"
        ))
    })
}
