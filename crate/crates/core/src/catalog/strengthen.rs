//! Turning an appearance into a strong one, or recognising the two wheels
//! where no strong appearance exists.

use thiserror::Error;

use crate::graph::{EmbeddedGraph, VertexId};
use crate::invariants::{check_invariant, is_well_behaved, Invariant};

use super::matcher::{find_appearances, touched_by, verify, Appearance, Strength};
use super::ConfigId;

/// A disk whose ring has length `2s` around an `s`-cycle of cubic internal
/// vertices, each with one ring neighbour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wheel {
    pub s: usize,
    pub ring: Vec<VertexId>,
    pub cycle: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strengthened {
    Strong(Appearance),
    ExceptionalWheel(Wheel),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrengthenError {
    #[error("precondition {0} fails")]
    PreconditionFailed(String),
    #[error("no strong appearance and the graph is not an exceptional wheel")]
    NoStrongAppearance,
}

/// Recognises the wheel outcome.
pub fn exceptional_wheel(g: &EmbeddedGraph) -> Option<Wheel> {
    if g.rings().len() != 1 || !g.rings()[0].is_facial() {
        return None;
    }
    let ring = g.rings()[0].vertices.clone();
    let s = ring.len() / 2;
    if !ring.len().is_multiple_of(2) || !matches!(s, 5 | 7) {
        return None;
    }
    let inner: Vec<VertexId> = (0..g.n()).filter(|&v| g.is_internal_vertex(v)).collect();
    if inner.len() != s {
        return None;
    }
    let shape_ok = inner.iter().all(|&v| {
        let ring_nbrs = g.neighbors(v).iter().filter(|&&u| g.is_ring_vertex(u)).count();
        g.degree(v) == 3 && ring_nbrs == 1
    });
    if !shape_ok {
        return None;
    }
    // walk the inner cycle
    let mut cycle = vec![inner[0]];
    let mut prev = None;
    let mut cur = inner[0];
    loop {
        let next = g.neighbors(cur).iter().copied().find(|&u| {
            g.is_internal_vertex(u) && Some(u) != prev && (cycle.len() < 2 || u != cycle[cycle.len() - 2])
        })?;
        if next == inner[0] {
            break;
        }
        if cycle.contains(&next) {
            return None;
        }
        cycle.push(next);
        prev = Some(cur);
        cur = next;
    }
    (cycle.len() == s && g.is_cycle(&cycle)).then_some(Wheel { s, ring, cycle })
}

fn preference(id: ConfigId) -> usize {
    use ConfigId::*;
    match id {
        R1 => 0,
        R6p => 1,
        R7p => 2,
        R7pp => 3,
        R7ppp => 4,
        R7pppp => 5,
        _ => 6,
    }
}

/// Starting from an appearance that no short cycle touches, returns a strong
/// appearance (the same one relabelled when possible), or the wheel.
pub fn strengthen(g: &EmbeddedGraph, a: &Appearance) -> Result<Strengthened, StrengthenError> {
    if a.strong {
        return Ok(Strengthened::Strong(a.clone()));
    }
    for inv in [Invariant::I0, Invariant::I2, Invariant::I8] {
        if !check_invariant(g, inv).holds() {
            return Err(StrengthenError::PreconditionFailed(inv.to_string()));
        }
    }
    if !is_well_behaved(g).holds() {
        return Err(StrengthenError::PreconditionFailed("well-behaved".into()));
    }
    if verify(g, a, Strength::Appears).is_err() {
        return Err(StrengthenError::PreconditionFailed("appearance".into()));
    }
    let short = g.cycles_up_to(4);
    if short.iter().any(|c| touched_by(g, a, &c.edges().collect::<Vec<_>>())) {
        return Err(StrengthenError::PreconditionFailed("no short cycle touches the configuration".into()));
    }
    let mut strong = find_appearances(g, Strength::Strong);
    let mut faces = a.faces.clone();
    faces.sort_unstable();
    strong.sort_by_key(|b| {
        let mut fb = b.faces.clone();
        fb.sort_unstable();
        (!(b.config == a.config && fb == faces), preference(b.config), b.config)
    });
    if let Some(b) = strong.into_iter().next() {
        return Ok(Strengthened::Strong(b));
    }
    exceptional_wheel(g).map(Strengthened::ExceptionalWheel).ok_or(StrengthenError::NoStrongAppearance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures;

    #[test]
    fn prism_is_the_five_wheel() {
        let g = fixtures::prism();
        let a = find_appearances(&g, Strength::Appears).into_iter().next().unwrap();
        match strengthen(&g, &a).unwrap() {
            Strengthened::ExceptionalWheel(w) => {
                assert_eq!(w.s, 5);
                assert_eq!(w.ring.len(), 10);
                assert_eq!(w.cycle.len(), 5);
            }
            other => panic!("expected the wheel, got {other:?}"),
        }
    }

    #[test]
    fn strong_input_is_kept() {
        let g = fixtures::prism_internal_spoke();
        let a = find_appearances(&g, Strength::Strong).into_iter().next().unwrap();
        assert_eq!(strengthen(&g, &a).unwrap(), Strengthened::Strong(a));
    }

    #[test]
    fn internal_spoke_relabels() {
        let g = fixtures::prism_internal_spoke();
        let weak_only: Vec<_> = find_appearances(&g, Strength::Appears).into_iter().filter(|a| !a.strong).collect();
        assert!(!weak_only.is_empty());
        for a in weak_only {
            match strengthen(&g, &a) {
                Ok(Strengthened::Strong(b)) => assert!(b.strong),
                Ok(other) => panic!("unexpected {other:?}"),
                Err(StrengthenError::PreconditionFailed(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}
