//! Colouring: the exhaustive extension oracle, the two small extension
//! claims, criticality certificates and critical-subgraph extraction. The
//! configuration-driven lift and the recursive disk solver live in
//! [`lift`] and [`solver`].

pub mod lift;
pub mod solver;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{EdgeId, EmbeddedGraph, RingKind, VertexId};

pub use lift::{lift_coloring, LiftError};
pub use solver::{solve_disk, solve_disk_with, SolverStats};

pub type Color = u8;

/// A partial 3-colouring, colours `1..=3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring(Vec<Option<Color>>);

impl Coloring {
    pub fn empty(n: usize) -> Self {
        Coloring(vec![None; n])
    }

    pub fn from_pairs(n: usize, pairs: &[(VertexId, Color)]) -> Self {
        let mut c = Self::empty(n);
        for &(v, col) in pairs {
            c.set(v, col);
        }
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: VertexId) -> Option<Color> {
        self.0.get(v).copied().flatten()
    }

    pub fn set(&mut self, v: VertexId, c: Color) {
        debug_assert!((1..=3).contains(&c));
        self.0[v] = Some(c);
    }

    pub fn clear(&mut self, v: VertexId) {
        self.0[v] = None;
    }

    pub fn colored(&self) -> impl Iterator<Item = (VertexId, Color)> + '_ {
        self.0.iter().enumerate().filter_map(|(v, c)| c.map(|c| (v, c)))
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.0
    }

    /// Restriction to the ring vertices of `g`.
    pub fn restrict_to_rings(&self, g: &EmbeddedGraph) -> Coloring {
        let mut out = Coloring::empty(g.n());
        for v in g.ring_vertices() {
            if let Some(c) = self.get(v) {
                out.set(v, c);
            }
        }
        out
    }

    /// No edge of `g` joins two vertices of the same colour.
    pub fn is_proper(&self, g: &EmbeddedGraph) -> bool {
        g.edges().iter().all(|&(u, v)| match (self.get(u), self.get(v)) {
            (Some(a), Some(b)) => a != b,
            _ => true,
        })
    }

    /// Whether this total colouring of `g` extends the ring precolouring
    /// `phi`: equal on ordinary rings, different on weak vertex rings.
    pub fn extends(&self, g: &EmbeddedGraph, phi: &Coloring) -> bool {
        (0..g.n()).all(|v| self.get(v).is_some())
            && self.is_proper(g)
            && g.rings().iter().all(|r| {
                r.vertices.iter().all(|&v| match (r.kind, phi.get(v)) {
                    (RingKind::WeakVertex, Some(c)) => self.get(v) != Some(c),
                    (_, Some(c)) => self.get(v) == Some(c),
                    (_, None) => true,
                })
            })
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.colored().map(|(v, c)| format!("{v}={c}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColorError {
    #[error("precolouring gives adjacent ring vertices {0} and {1} the same colour")]
    ImproperPrecoloring(VertexId, VertexId),
    #[error("ring vertex {0} is not precoloured")]
    MissingRingColor(VertexId),
}

fn check_precoloring(g: &EmbeddedGraph, phi: &Coloring) -> Result<(), ColorError> {
    for r in g.rings() {
        for &v in &r.vertices {
            if phi.get(v).is_none() {
                return Err(ColorError::MissingRingColor(v));
            }
        }
    }
    for &(u, v) in g.edges() {
        let strong = |x: VertexId| g.ring_of(x).is_some_and(|r| g.rings()[r].kind != RingKind::WeakVertex);
        if g.is_ring_edge(u, v) && strong(u) && strong(v) && phi.get(u) == phi.get(v) {
            return Err(ColorError::ImproperPrecoloring(u, v));
        }
    }
    Ok(())
}

/// Backtracking search over an adjacency list. `domain[v]` is a bitmask of
/// allowed colours (bit `c - 1`). Vertices are tried in index order and
/// colours in increasing order, with forward checking and propagation of
/// forced vertices, so the first solution is the lexicographically least.
pub(crate) fn search(adj: &[Vec<VertexId>], domain: Vec<u8>) -> Option<Vec<Color>> {
    fn assign(adj: &[Vec<VertexId>], dom: &mut [u8], v: VertexId, c: Color) -> bool {
        let bit = 1u8 << (c - 1);
        dom[v] = bit;
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            let bx = dom[x];
            for &y in &adj[x] {
                if dom[y] & bx != 0 {
                    dom[y] &= !bx;
                    match dom[y].count_ones() {
                        0 => return false,
                        1 => stack.push(y),
                        _ => {}
                    }
                }
            }
        }
        true
    }
    fn rec(adj: &[Vec<VertexId>], dom: &mut Vec<u8>, from: usize) -> bool {
        let Some(v) = (from..dom.len()).find(|&v| dom[v].count_ones() > 1) else {
            return true;
        };
        for c in 1..=3u8 {
            if dom[v] & (1 << (c - 1)) == 0 {
                continue;
            }
            let mut next = dom.clone();
            if assign(adj, &mut next, v, c) && rec(adj, &mut next, v + 1) {
                *dom = next;
                return true;
            }
        }
        false
    }
    let mut dom = domain;
    if dom.contains(&0) {
        return None;
    }
    // propagate the initially forced vertices
    let forced: Vec<VertexId> = (0..dom.len()).filter(|&v| dom[v].count_ones() == 1).collect();
    for v in forced {
        let c = dom[v].trailing_zeros() as u8 + 1;
        if !assign(adj, &mut dom, v, c) {
            return None;
        }
    }
    if !rec(adj, &mut dom, 0) {
        return None;
    }
    Some(dom.iter().map(|&d| d.trailing_zeros() as u8 + 1).collect())
}

fn adjacency(g: &EmbeddedGraph, skip: Option<(VertexId, VertexId)>) -> Vec<Vec<VertexId>> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().copied().filter(|&u| skip != Some((v.min(u), v.max(u)))).collect())
        .collect()
}

fn domains(g: &EmbeddedGraph, phi: &Coloring) -> Vec<u8> {
    let mut dom = vec![0b111u8; g.n()];
    for r in g.rings() {
        for &v in &r.vertices {
            if let Some(c) = phi.get(v) {
                let bit = 1u8 << (c - 1);
                dom[v] = if r.kind == RingKind::WeakVertex { 0b111 & !bit } else { bit };
            }
        }
    }
    dom
}

fn extend_raw(g: &EmbeddedGraph, phi: &Coloring, skip: Option<(VertexId, VertexId)>) -> Option<Coloring> {
    let adj = adjacency(g, skip);
    search(&adj, domains(g, phi)).map(|cs| Coloring(cs.into_iter().map(Some).collect()))
}

/// Exhaustive precolouring extension: the lexicographically first proper
/// 3-colouring of `g` extending `phi`, or `None` when there is none.
pub fn oracle_extend(g: &EmbeddedGraph, phi: &Coloring) -> Result<Option<Coloring>, ColorError> {
    check_precoloring(g, phi)?;
    Ok(extend_raw(g, phi, None))
}

/// The first extension of a pair of adjacent cubic vertices `u1`, `u2`
/// whose other neighbours are coloured `w1, w2` and `w3, w4`.
pub fn extend_adjacent_pair(w: [Color; 4]) -> Option<(Color, Color)> {
    (1..=3)
        .flat_map(|a| (1..=3).map(move |b| (a, b)))
        .find(|&(a, b)| a != b && a != w[0] && a != w[1] && b != w[2] && b != w[3])
}

/// The obstruction of the adjacent-pair claim.
pub fn adjacent_pair_blocked(w: [Color; 4]) -> bool {
    (w[0] == w[2] && w[1] == w[3] && w[0] != w[1]) || (w[0] == w[3] && w[1] == w[2] && w[0] != w[1])
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathListError {
    #[error("a path needs at least two vertices")]
    TooShort,
    #[error("all lists are equal")]
    AllListsEqual,
    #[error("list {0} does not have two distinct colours in 1..=3")]
    BadList(usize),
}

/// Three list colourings of a path that pairwise differ at an end, given
/// lists of size two that are not all equal.
pub fn color_path_lists(lists: &[[Color; 2]]) -> Result<[Vec<Color>; 3], PathListError> {
    if lists.len() < 2 {
        return Err(PathListError::TooShort);
    }
    for (i, l) in lists.iter().enumerate() {
        if l[0] == l[1] || !l.iter().all(|c| (1..=3).contains(c)) {
            return Err(PathListError::BadList(i));
        }
    }
    let norm = |l: &[Color; 2]| (l[0].min(l[1]), l[0].max(l[1]));
    if lists.iter().all(|l| norm(l) == norm(&lists[0])) {
        return Err(PathListError::AllListsEqual);
    }
    let mut found: BTreeMap<(Color, Color), Vec<Color>> = BTreeMap::new();
    let k = lists.len();
    let mut cur = vec![0u8; k];
    fn rec(i: usize, lists: &[[Color; 2]], cur: &mut Vec<Color>, found: &mut BTreeMap<(Color, Color), Vec<Color>>) {
        if i == lists.len() {
            found.entry((cur[0], cur[lists.len() - 1])).or_insert_with(|| cur.clone());
            return;
        }
        for &c in &lists[i] {
            if i > 0 && cur[i - 1] == c {
                continue;
            }
            cur[i] = c;
            rec(i + 1, lists, cur, found);
        }
    }
    rec(0, lists, &mut cur, &mut found);
    let picks: Vec<Vec<Color>> = found.into_values().take(3).collect();
    match <[Vec<Color>; 3]>::try_from(picks) {
        Ok(a) => Ok(a),
        Err(_) => unreachable!("a path with two distinct lists has three end-distinct colourings"),
    }
}

/// All proper colourings of the rings of `g`, in lexicographic order. A weak
/// vertex ring gets each of the three colours (as its forbidden colour).
pub fn ring_precolorings(g: &EmbeddedGraph) -> Vec<Coloring> {
    let ring_vs: Vec<VertexId> = g.ring_vertices().into_iter().collect();
    let strong = |x: VertexId| g.ring_of(x).is_some_and(|r| g.rings()[r].kind != RingKind::WeakVertex);
    let mut out = Vec::new();
    let mut cur = Coloring::empty(g.n());
    fn rec(
        i: usize,
        vs: &[VertexId],
        g: &EmbeddedGraph,
        strong: &dyn Fn(VertexId) -> bool,
        cur: &mut Coloring,
        out: &mut Vec<Coloring>,
    ) {
        if i == vs.len() {
            out.push(cur.clone());
            return;
        }
        let v = vs[i];
        for c in 1..=3 {
            let clash =
                strong(v) && g.neighbors(v).iter().any(|&u| g.is_ring_edge(u, v) && strong(u) && cur.get(u) == Some(c));
            if clash {
                continue;
            }
            cur.set(v, c);
            rec(i + 1, vs, g, strong, cur, out);
            cur.clear(v);
        }
    }
    rec(0, &ring_vs, g, &strong, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriticalityVerdict {
    RCritical,
    PhiCritical(Coloring),
    Neither,
}

/// A verdict together with, for every non-ring edge, a precolouring that
/// extends once the edge is removed but not before.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalityCertificate {
    pub verdict: CriticalityVerdict,
    pub witnesses: Vec<(EdgeId, Coloring)>,
}

impl CriticalityCertificate {
    /// Re-checks every witness with the oracle.
    pub fn verify(&self, g: &EmbeddedGraph) -> bool {
        self.witnesses.iter().all(|(e, phi)| {
            let (u, v) = g.edges()[*e];
            extend_raw(g, phi, None).is_none() && extend_raw(g, phi, Some((u, v))).is_some()
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriticalityError {
    #[error("rings have {0} vertices, above the sweep limit {1}")]
    TooLarge(usize, usize),
}

/// Decides whether `g` is critical with respect to its rings by sweeping
/// all ring precolourings. Deleting edges one at a time suffices, since
/// extendability is monotone under taking subgraphs.
pub fn is_r_critical(g: &EmbeddedGraph, limit: usize) -> Result<CriticalityCertificate, CriticalityError> {
    let ring_count = g.ring_vertices().len();
    if ring_count > limit {
        return Err(CriticalityError::TooLarge(ring_count, limit));
    }
    let neither = CriticalityCertificate { verdict: CriticalityVerdict::Neither, witnesses: Vec::new() };
    let free_edges: Vec<EdgeId> = (0..g.num_edges())
        .filter(|&e| {
            let (u, v) = g.edges()[e];
            !g.is_ring_edge(u, v)
        })
        .collect();
    let isolated_internal = (0..g.n()).any(|v| g.is_internal_vertex(v) && g.degree(v) == 0);
    if free_edges.is_empty() || isolated_internal {
        return Ok(neither);
    }
    let bad: Vec<Coloring> =
        ring_precolorings(g).into_par_iter().filter(|phi| extend_raw(g, phi, None).is_none()).collect();
    let witnesses: Vec<Option<(EdgeId, Coloring)>> = free_edges
        .par_iter()
        .map(|&e| {
            let (u, v) = g.edges()[e];
            bad.iter().find(|phi| extend_raw(g, phi, Some((u, v))).is_some()).map(|phi| (e, phi.clone()))
        })
        .collect();
    if witnesses.iter().any(Option::is_none) {
        return Ok(neither);
    }
    Ok(CriticalityCertificate {
        verdict: CriticalityVerdict::RCritical,
        witnesses: witnesses.into_iter().flatten().collect(),
    })
}

/// Whether `g` is critical for the single precolouring `phi`.
pub fn is_phi_critical(g: &EmbeddedGraph, phi: &Coloring) -> Result<CriticalityCertificate, ColorError> {
    check_precoloring(g, phi)?;
    let neither = CriticalityCertificate { verdict: CriticalityVerdict::Neither, witnesses: Vec::new() };
    if extend_raw(g, phi, None).is_some() || (0..g.n()).any(|v| g.is_internal_vertex(v) && g.degree(v) == 0) {
        return Ok(neither);
    }
    let mut witnesses = Vec::new();
    for e in 0..g.num_edges() {
        let (u, v) = g.edges()[e];
        if g.is_ring_edge(u, v) {
            continue;
        }
        if extend_raw(g, phi, Some((u, v))).is_none() {
            return Ok(neither);
        }
        witnesses.push((e, phi.clone()));
    }
    if witnesses.is_empty() {
        return Ok(neither);
    }
    Ok(CriticalityCertificate { verdict: CriticalityVerdict::PhiCritical(phi.clone()), witnesses })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("the precolouring extends to the whole graph")]
    PrecoloringExtends,
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error("critical subgraph has {0} vertices, above the bound {1}")]
    SizeBound(usize, usize),
}

/// A critical subgraph for `phi`, found by deleting edges greedily in
/// descending edge order. Returns the subgraph, the original id of each of
/// its vertices and `phi` carried over.
pub fn extract_critical(
    g: &EmbeddedGraph,
    phi: &Coloring,
) -> Result<(EmbeddedGraph, Vec<VertexId>, Coloring), ExtractError> {
    check_precoloring(g, phi)?;
    if extend_raw(g, phi, None).is_some() {
        return Err(ExtractError::PrecoloringExtends);
    }
    let mut alive = vec![true; g.num_edges()];
    let mut adj = adjacency(g, None);
    for e in (0..g.num_edges()).rev() {
        let (u, v) = g.edges()[e];
        if g.is_ring_edge(u, v) {
            continue;
        }
        adj[u].retain(|&x| x != v);
        adj[v].retain(|&x| x != u);
        if search(&adj, domains(g, phi)).is_some() {
            adj[u].push(v);
            adj[v].push(u);
        } else {
            alive[e] = false;
        }
    }
    let sub =
        g.edge_subgraph(&|u, v| alive[g.edge_id(u, v).expect("edge")]).expect("edge subgraph of a valid embedding");
    let keep: Vec<VertexId> = (0..g.n()).filter(|&v| g.is_ring_vertex(v) || sub.degree(v) > 0).collect();
    let (h, ids) = sub.induced(&keep).expect("induced subgraph");
    let mut psi = Coloring::empty(h.n());
    for (i, &v) in ids.iter().enumerate() {
        if let Some(c) = phi.get(v) {
            if g.is_ring_vertex(v) {
                psi.set(i, c);
            }
        }
    }
    let bound = 1715 * g.ring_vertices().len();
    if h.n() > bound {
        return Err(ExtractError::SizeBound(h.n(), bound));
    }
    Ok((h, ids, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures;

    #[test]
    fn bare_cycle_extends_to_itself() {
        let g = fixtures::cycle(5);
        let phi = Coloring::from_pairs(5, &[(0, 1), (1, 2), (2, 1), (3, 2), (4, 3)]);
        assert_eq!(oracle_extend(&g, &phi).unwrap(), Some(phi));
    }

    #[test]
    fn chord_blocks_equal_ends() {
        let g = fixtures::c8_chord();
        let phi = Coloring::from_pairs(8, &[(0, 1), (1, 2), (2, 3), (3, 2), (4, 1), (5, 2), (6, 3), (7, 2)]);
        assert_eq!(oracle_extend(&g, &phi).unwrap(), None);
    }

    #[test]
    fn e2_centre_sees_three_colours() {
        let g = fixtures::e2(9);
        let cols = [1, 2, 1, 2, 1, 2, 3, 1, 2];
        let pairs: Vec<_> = cols.iter().enumerate().map(|(v, &c)| (v, c)).collect();
        let phi = Coloring::from_pairs(10, &pairs);
        assert_eq!(oracle_extend(&g, &phi).unwrap(), None);
    }

    #[test]
    fn improper_precoloring_rejected() {
        let g = fixtures::cycle(5);
        let phi = Coloring::from_pairs(5, &[(0, 1), (1, 1), (2, 2), (3, 1), (4, 2)]);
        assert!(matches!(oracle_extend(&g, &phi), Err(ColorError::ImproperPrecoloring(..))));
    }

    #[test]
    fn adjacent_pair_claim() {
        // second obstruction pattern: w1 = w4 differs from w2 = w3
        assert_eq!(extend_adjacent_pair([1, 2, 2, 1]), None);
        assert!(extend_adjacent_pair([1, 2, 3, 1]).is_some());
        assert_eq!(extend_adjacent_pair([1, 2, 1, 2]), None);
        assert_eq!(extend_adjacent_pair([1, 1, 1, 1]), Some((2, 3)));
        for w in 0..81u32 {
            let w = [(w % 3) as u8 + 1, (w / 3 % 3) as u8 + 1, (w / 9 % 3) as u8 + 1, (w / 27) as u8 + 1];
            assert_eq!(extend_adjacent_pair(w).is_none(), adjacent_pair_blocked(w), "{w:?}");
        }
    }

    #[test]
    fn path_lists() {
        let [a, b, c] = color_path_lists(&[[1, 2], [1, 3]]).unwrap();
        let ends: std::collections::BTreeSet<_> = [&a, &b, &c].iter().map(|p| (p[0], p[1])).collect();
        assert_eq!(ends.len(), 3);
        assert_eq!(color_path_lists(&[[1, 2]]), Err(PathListError::TooShort));
        assert_eq!(color_path_lists(&[[1, 2], [2, 1], [1, 2]]), Err(PathListError::AllListsEqual));
    }

    #[test]
    fn criticality_small_cases() {
        let c = is_r_critical(&fixtures::c8_chord(), 12).unwrap();
        assert_eq!(c.verdict, CriticalityVerdict::RCritical);
        assert!(c.verify(&fixtures::c8_chord()));
        assert_eq!(is_r_critical(&fixtures::cycle(9), 12).unwrap().verdict, CriticalityVerdict::Neither);
        assert_eq!(is_r_critical(&fixtures::e2(9), 12).unwrap().verdict, CriticalityVerdict::RCritical);
        assert!(matches!(is_r_critical(&fixtures::cycle(13), 12), Err(CriticalityError::TooLarge(13, 12))));
    }

    #[test]
    fn extraction_drops_gadget() {
        let g = fixtures::c8_chord();
        let phi = Coloring::from_pairs(8, &[(0, 1), (1, 2), (2, 3), (3, 2), (4, 1), (5, 2), (6, 3), (7, 2)]);
        let (h, _, _) = extract_critical(&g, &phi).unwrap();
        assert_eq!(h.num_edges(), 9);
        let g = fixtures::c8_chord_with_gadget();
        let mut pairs = vec![(0, 1), (1, 2), (2, 3), (3, 2), (4, 1), (5, 2), (6, 3), (7, 2)];
        pairs.truncate(8);
        let phi = Coloring::from_pairs(g.n(), &pairs);
        let (h, ids, psi) = extract_critical(&g, &phi).unwrap();
        assert_eq!(h.n(), 8);
        assert_eq!(ids, (0..8).collect::<Vec<_>>());
        assert_eq!(is_phi_critical(&h, &psi).unwrap().verdict, CriticalityVerdict::PhiCritical(psi.clone()));
    }
}
