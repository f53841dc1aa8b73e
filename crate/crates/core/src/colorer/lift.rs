//! Carrying a colouring of the reduced graph back to the host.
//!
//! Vertices that survive the reduction keep the colour of their image, so
//! identified vertices share a colour and the new edge separates its ends.
//! The deleted vertices are then completed by an exhaustive search confined
//! to them; the reducibility of every catalogue configuration guarantees a
//! completion exists, so a failure is a catalogue bug.

use thiserror::Error;

use crate::catalog::Appearance;
use crate::graph::{EmbeddedGraph, VertexId};
use crate::reducer::ReductionResult;

use super::{search, Coloring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error("lift case analysis exhausted: {0}")]
    LiftCaseExhausted(String),
    #[error("the reduced colouring is not proper at {0}-{1}")]
    ImproperInput(VertexId, VertexId),
    #[error("reduced colouring has {0} entries, the reduced graph {1} vertices")]
    SizeMismatch(usize, usize),
}

/// Extends a proper colouring of the reduced graph to `g`, agreeing with it
/// on every vertex that was not deleted.
pub fn lift_coloring(
    g: &EmbeddedGraph,
    a: &Appearance,
    res: &ReductionResult,
    coloring: &Coloring,
) -> Result<Coloring, LiftError> {
    let gp = &res.graph;
    if coloring.len() != gp.n() {
        return Err(LiftError::SizeMismatch(coloring.len(), gp.n()));
    }
    if let Some(&(u, v)) =
        gp.edges().iter().find(|&&(u, v)| coloring.get(u).is_some() && coloring.get(u) == coloring.get(v))
    {
        return Err(LiftError::ImproperInput(u, v));
    }
    let mut domain = vec![0b111u8; g.n()];
    for v in 0..g.n() {
        if let Some(w) = res.new_of_old[v] {
            let c = coloring
                .get(w)
                .ok_or_else(|| LiftError::LiftCaseExhausted(format!("reduced vertex {w} is uncoloured")))?;
            domain[v] = 1 << (c - 1);
        }
    }
    let adj: Vec<Vec<VertexId>> = (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect();
    let colours = search(&adj, domain).ok_or_else(|| {
        let fixed: Vec<String> = res
            .deleted
            .iter()
            .flat_map(|&d| g.neighbors(d).iter().copied())
            .filter_map(|u| res.new_of_old[u].and_then(|w| coloring.get(w)).map(|c| format!("{u}={c}")))
            .collect();
        LiftError::LiftCaseExhausted(format!(
            "{} at {:?}: no completion of {:?} with {}",
            a.config,
            a.map,
            res.deleted,
            fixed.join(",")
        ))
    })?;
    Ok(Coloring(colours.into_iter().map(Some).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{canonical_host, find_appearances_of, Strength};
    use crate::colorer::{oracle_extend, ring_precolorings};
    use crate::reducer::reduce;

    #[test]
    fn lift_extends_every_reduced_colouring_on_small_hosts() {
        for c in crate::catalog::catalog() {
            let g = canonical_host(c);
            let a = find_appearances_of(&g, c, Strength::Strong).into_iter().next().unwrap();
            let phis = ring_precolorings(&g);
            let mut lifted = 0;
            for phi in phis.iter().step_by(37) {
                let Ok(res) = reduce(&g, &a, Some(phi)) else { continue };
                let mut psi = Coloring::empty(res.graph.n());
                for v in res.graph.ring_vertices() {
                    psi.set(v, phi.get(res.old_of_new[v]).unwrap());
                }
                let Some(col) = oracle_extend(&res.graph, &psi).unwrap() else { continue };
                let out = lift_coloring(&g, &a, &res, &col).unwrap_or_else(|e| panic!("{}: {e}", c.id));
                assert!(out.is_proper(&g) && out.extends(&g, phi), "{}", c.id);
                lifted += 1;
            }
            assert!(lifted > 0, "{}", c.id);
        }
    }

    #[test]
    fn improper_input_is_refused() {
        let g = crate::harness::fixtures::prism_internal_spoke();
        let a = crate::catalog::find_appearances(&g, Strength::Strong).into_iter().next().unwrap();
        let res = reduce(&g, &a, None).unwrap();
        let (u, v) = res.graph.edges()[0];
        let mut col = Coloring::empty(res.graph.n());
        for w in 0..res.graph.n() {
            col.set(w, 1);
        }
        assert_eq!(lift_coloring(&g, &a, &res, &col), Err(LiftError::ImproperInput(u, v)));
    }
}
