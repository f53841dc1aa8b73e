//! Recursive disk solver: reduce a strongly appearing configuration, solve
//! the smaller instance, lift. Small or configuration-free instances go to
//! the oracle, as does any instance whose reduction refuses to colour.

use crate::catalog::{find_appearances, Strength};
use crate::graph::EmbeddedGraph;
use crate::reducer::reduce;

use super::lift::lift_coloring;
use super::{check_precoloring, oracle_extend, ColorError, Coloring};

/// Instances with at most this many vertices go straight to the oracle.
pub const DEFAULT_THRESHOLD: usize = 18;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub reductions: usize,
    pub lifts: usize,
    pub oracle_calls: usize,
    /// Reduced instances that refused the precolouring, so the parent had
    /// to be settled by the oracle.
    pub fallbacks: usize,
}

/// Extends `phi` to `g` if possible.
pub fn solve_disk(g: &EmbeddedGraph, phi: &Coloring) -> Result<Option<Coloring>, ColorError> {
    let mut stats = SolverStats::default();
    solve_disk_with(g, phi, DEFAULT_THRESHOLD, &mut stats)
}

pub fn solve_disk_with(
    g: &EmbeddedGraph,
    phi: &Coloring,
    threshold: usize,
    stats: &mut SolverStats,
) -> Result<Option<Coloring>, ColorError> {
    check_precoloring(g, phi)?;
    if g.n() > threshold {
        for a in find_appearances(g, Strength::Strong) {
            let Ok(res) = reduce(g, &a, Some(phi)) else { continue };
            stats.reductions += 1;
            let mut psi = Coloring::empty(res.graph.n());
            for v in res.graph.ring_vertices() {
                if let Some(c) = phi.get(res.old_of_new[v]) {
                    psi.set(v, c);
                }
            }
            match solve_disk_with(&res.graph, &psi, threshold, stats)? {
                Some(col) => {
                    let lifted = lift_coloring(g, &a, &res, &col).unwrap_or_else(|e| panic!("{e}"));
                    stats.lifts += 1;
                    return Ok(Some(lifted));
                }
                None => {
                    stats.fallbacks += 1;
                    break;
                }
            }
        }
    }
    stats.oracle_calls += 1;
    oracle_extend(g, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorer::ring_precolorings;
    use crate::harness::fixtures;

    #[test]
    fn bare_cycle_returns_the_precolouring() {
        let g = fixtures::cycle(5);
        let phi = Coloring::from_pairs(5, &[(0, 1), (1, 2), (2, 1), (3, 2), (4, 3)]);
        assert_eq!(solve_disk(&g, &phi).unwrap(), Some(phi));
    }

    #[test]
    fn reduces_when_above_threshold() {
        let g = fixtures::prism_internal_spoke();
        let mut reduced = 0;
        for phi in ring_precolorings(&g) {
            let mut stats = SolverStats::default();
            let got = solve_disk_with(&g, &phi, 0, &mut stats).unwrap();
            let want = oracle_extend(&g, &phi).unwrap();
            assert_eq!(got.is_some(), want.is_some());
            if let Some(c) = got {
                assert!(c.is_proper(&g) && c.extends(&g, &phi));
            }
            reduced += stats.lifts;
        }
        assert!(reduced > 0);
    }
}
