//! Short cycles of the reduced graph and where they come from.

use std::collections::{BTreeMap, BTreeSet};

use crate::catalog::touched_by;
use crate::graph::{CuffClass, Cycle, EdgeId, EmbeddedGraph, VertexId};
use crate::invariants::{check_invariant, Invariant};

use super::expansion::ExpansionError;
use super::ReductionResult;

/// Host cycles that lift `c_prime`: every edge is replaced by its host edge,
/// a squashed edge by any edge of its bunch. The new edge has no lift.
pub fn lift_cycle(res: &ReductionResult, c_prime: &Cycle) -> BTreeSet<Cycle> {
    let mut choices: Vec<Vec<EdgeId>> = Vec::new();
    for (u, v) in c_prime.edges() {
        if res.is_squashed(u, v) {
            choices.push(res.bunch(u, v).to_vec());
        } else {
            match res.origin(u, v) {
                Some(e) => choices.push(vec![e]),
                None => return BTreeSet::new(),
            }
        }
    }
    let host_edges = |g_edges: &[EdgeId]| -> Option<Cycle> { cycle_of_edges(res, g_edges) };
    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let es: Vec<EdgeId> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        if let Some(c) = host_edges(&es) {
            out.insert(c);
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return out;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// The host edges, if they form one cycle.
fn cycle_of_edges(res: &ReductionResult, es: &[EdgeId]) -> Option<Cycle> {
    let ends = &res.host_edges;
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &e in es {
        let (u, v) = ends[e];
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    if adj.len() != es.len() || adj.values().any(|n| n.len() != 2) {
        return None;
    }
    let start = *adj.keys().next()?;
    let mut walk = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    while cur != start {
        walk.push(cur);
        let nb = &adj[&cur];
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    (walk.len() == es.len()).then(|| Cycle::new(walk))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShortCycleOutcome {
    Lifted(BTreeSet<Cycle>),
    /// No lift; the reduced cycle is not contractible and the host cycle
    /// touches the configuration and is at most three longer.
    Witness(Cycle),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortCycleReport {
    pub cycles: Vec<(Cycle, ShortCycleOutcome)>,
}

impl ShortCycleReport {
    pub fn is_clean(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// Checks every cycle of length at most four of the reduced graph against
/// the dichotomy: a lift exists, or the cycle is not contractible and a
/// non-contractible host cycle touching the configuration, at most three
/// longer and through its ring vertices, exists.
pub fn verify_short_cycle_lemma(g: &EmbeddedGraph, res: &ReductionResult) -> Result<ShortCycleReport, ExpansionError> {
    if !res.appearance.strong {
        return Err(ExpansionError::Precondition("the appearance is not strong".into()));
    }
    for inv in [Invariant::I0, Invariant::I3, Invariant::I8, Invariant::I9] {
        if !check_invariant(g, inv).holds() {
            return Err(ExpansionError::Precondition(format!("{inv} fails")));
        }
    }
    let gp = &res.graph;
    let short = gp.cycles_up_to(4);
    let mut host_cycles: Option<Vec<Cycle>> = None;
    let mut out = Vec::new();
    for cp in short {
        let lifts = lift_cycle(res, &cp);
        if !lifts.is_empty() {
            out.push((cp, ShortCycleOutcome::Lifted(lifts)));
            continue;
        }
        let violated = |why: &str| ExpansionError::LemmaViolated(format!("cycle {:?}: {why}", cp.vertices()));
        if gp.surrounds_cuff(cp.vertices()) == Some(CuffClass::Contractible) {
            return Err(violated("contractible without a lift"));
        }
        let cands = host_cycles.get_or_insert_with(|| g.cycles_up_to(7));
        let ring_vs: Vec<VertexId> =
            cp.vertices().iter().filter(|&&v| gp.is_ring_vertex(v)).map(|&v| res.old_of_new[v]).collect();
        let witness = cands.iter().find(|c| {
            c.len() <= cp.len() + 3
                && ring_vs.iter().all(|&v| c.contains(v))
                && g.surrounds_cuff(c.vertices()) != Some(CuffClass::Contractible)
                && touched_by(g, &res.appearance, &c.edges().collect::<Vec<_>>())
                && six_ring_condition(g, res, &cp, c)
        });
        match witness {
            Some(c) => out.push((cp, ShortCycleOutcome::Witness(c.clone()))),
            None => return Err(violated("no witness")),
        }
    }
    Ok(ShortCycleReport { cycles: out })
}

/// For a triangle off the rings whose vertices see three pairwise
/// non-adjacent vertices of a six-ring, the host cycle must have two edges to
/// non-adjacent ring vertices outside it.
fn six_ring_condition(g: &EmbeddedGraph, res: &ReductionResult, cp: &Cycle, c: &Cycle) -> bool {
    let gp = &res.graph;
    if cp.len() != 3 || cp.vertices().iter().any(|&v| gp.is_ring_vertex(v)) {
        return true;
    }
    for ring in gp.rings().iter().filter(|r| r.is_facial() && r.len() == 6) {
        let rs: BTreeSet<VertexId> = ring.vertices.iter().copied().collect();
        let pick: Vec<Vec<VertexId>> = cp
            .vertices()
            .iter()
            .map(|&v| gp.neighbors(v).iter().copied().filter(|u| rs.contains(u)).collect())
            .collect();
        let applies = pick[0].iter().any(|&a| {
            pick[1].iter().any(|&b| {
                pick[2].iter().any(|&d| {
                    a != b && b != d && a != d && !gp.adjacent(a, b) && !gp.adjacent(b, d) && !gp.adjacent(a, d)
                })
            })
        });
        if !applies {
            continue;
        }
        let host_ring: BTreeSet<VertexId> = ring.vertices.iter().map(|&v| res.old_of_new[v]).collect();
        let edges: Vec<(VertexId, VertexId)> = c
            .vertices()
            .iter()
            .filter(|v| !host_ring.contains(v))
            .flat_map(|&x| {
                g.neighbors(x).iter().filter(|r| host_ring.contains(r) && !c.contains(**r)).map(move |&r| (x, r))
            })
            .collect();
        let ok = edges.iter().any(|&(x, r)| edges.iter().any(|&(y, s)| x != y && r != s && !g.adjacent(r, s)));
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{find_appearances, Strength};
    use crate::harness::fixtures;
    use crate::reducer::reduce;

    #[test]
    fn untouched_cycle_lifts_to_itself() {
        let g = fixtures::prism_internal_spoke();
        let a = find_appearances(&g, Strength::Strong).into_iter().next().unwrap();
        let res = reduce(&g, &a, None).unwrap();
        let ring: Vec<VertexId> = res.graph.rings()[0].vertices.clone();
        let cp = Cycle::new(ring.clone());
        let lifts = lift_cycle(&res, &cp);
        let host: Vec<VertexId> = ring.iter().map(|&v| res.old_of_new[v]).collect();
        assert_eq!(lifts, BTreeSet::from([Cycle::new(host)]));
    }

    #[test]
    fn new_edge_has_no_lift() {
        let g = fixtures::prism_internal_spoke();
        let a = find_appearances(&g, Strength::Strong).into_iter().next().unwrap();
        let res = reduce(&g, &a, None).unwrap();
        let (x, y) = res.new_edge.unwrap();
        let through = res
            .graph
            .cycles_up_to(res.graph.n())
            .into_iter()
            .find(|c| c.edges().any(|(u, v)| (u.min(v), u.max(v)) == (x, y)));
        if let Some(c) = through {
            assert!(lift_cycle(&res, &c).is_empty());
        }
    }
}
