use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::table::NeighborhoodTable;

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCoverage {
    pub value: usize,
    /// Maximizing profiles as non-decreasing position lists; every agent
    /// permutation of one of these is also a maximizer.
    pub maximizers: Vec<Vec<NodeId>>,
}

/// Number of size-`m` multisets over `n` nodes, `C(n + m - 1, m)`, saturating.
pub fn multiset_count(n: usize, m: usize) -> u128 {
    let mut acc: u128 = 1;
    for k in 1..=m as u128 {
        acc = match acc.checked_mul(n as u128 + k - 1) {
            Some(v) => v / k,
            None => return u128::MAX,
        };
    }
    acc
}

pub fn brute_force_max_coverage(g: &Graph, m: usize, delta: usize) -> Result<MaxCoverage> {
    brute_force_max_coverage_with_budget(g, m, delta, DEFAULT_ENUMERATION_BUDGET)
}

/// Exact maximum coverage by enumerating every profile up to agent
/// permutation. Refuses instances with more than `budget` profiles.
pub fn brute_force_max_coverage_with_budget(
    g: &Graph,
    m: usize,
    delta: usize,
    budget: u128,
) -> Result<MaxCoverage> {
    if m == 0 {
        return Err(Error::input("at least one agent is required"));
    }
    let n = g.node_count();
    let required = multiset_count(n, m);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let table = NeighborhoodTable::new(g, delta);
    let mut best = MaxCoverage {
        value: 0,
        maximizers: Vec::new(),
    };
    let mut profile = vec![0; m];
    loop {
        let value = table.covered_count(&profile);
        if value > best.value {
            best.value = value;
            best.maximizers.clear();
        }
        if value == best.value {
            best.maximizers.push(profile.clone());
        }
        // Next non-decreasing tuple.
        let Some(k) = (0..m).rev().find(|&k| profile[k] + 1 < n) else {
            break;
        };
        let v = profile[k] + 1;
        profile[k..].iter_mut().for_each(|p| *p = v);
    }
    Ok(best)
}
