//! Structural predicates on graphs with rings: the conditions (I0)..(I9),
//! allowable paths, internal 2-cuts, face classes, exceptional disks and the
//! small-ring characterisation of critical disks.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::colorer::{self, CriticalityVerdict};
use crate::graph::{Cycle, EmbeddedGraph, FaceId, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Invariant {
    I0,
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    I7,
    I8,
    I9,
}

impl Invariant {
    pub const ALL: [Invariant; 10] = [
        Invariant::I0,
        Invariant::I1,
        Invariant::I2,
        Invariant::I3,
        Invariant::I4,
        Invariant::I5,
        Invariant::I6,
        Invariant::I7,
        Invariant::I8,
        Invariant::I9,
    ];
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
    Path(Vec<VertexId>),
    Cycle(Vec<VertexId>),
    /// A cycle of degree-3 vertices and an outside edge seeing it twice.
    CycleWithEdge(Vec<VertexId>, VertexId, VertexId),
    Face(FaceId),
    Pair(VertexId, VertexId),
    Rings(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    fn from_witness(w: Option<Witness>) -> Self {
        w.map_or(Verdict::Holds, Verdict::Fails)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub entries: Vec<(Invariant, Verdict)>,
}

impl InvariantReport {
    pub fn holds(&self, which: Invariant) -> bool {
        self.entries.iter().any(|(i, v)| *i == which && v.holds())
    }

    pub fn all_hold(&self, which: &[Invariant]) -> bool {
        which.iter().all(|&i| self.holds(i))
    }
}

pub fn check_all(g: &EmbeddedGraph) -> InvariantReport {
    InvariantReport { entries: Invariant::ALL.iter().map(|&i| (i, check_invariant(g, i))).collect() }
}

pub fn check_invariant(g: &EmbeddedGraph, which: Invariant) -> Verdict {
    let w = match which {
        Invariant::I0 => (0..g.n()).find(|&v| g.is_internal_vertex(v) && g.degree(v) < 3).map(Witness::Vertex),
        Invariant::I1 => cubic_internal_cycles(g)
            .into_iter()
            .find(|c| c.len() % 2 == 0)
            .map(|c| Witness::Cycle(c.vertices().to_vec())),
        Invariant::I2 => i2_witness(g),
        Invariant::I3 => {
            g.internal_faces().find(|&f| !is_closed_2cell(g, f) || g.face_length(f) < 5).map(Witness::Face)
        }
        Invariant::I4 => short_ring_path(g).map(Witness::Path),
        Invariant::I5 => {
            g.edges().iter().find(|&&(u, v)| g.degree(u) == 2 && g.degree(v) == 2).map(|&(u, v)| Witness::Edge(u, v))
        }
        Invariant::I6 => {
            let applies = (g.rings().len() == 1) || g.internal_faces().any(|f| is_omnipresent(g, f));
            if applies {
                has_internal_2cut(g).map(|(u, v)| Witness::Pair(u, v))
            } else {
                None
            }
        }
        Invariant::I7 => close_rings(g).map(|(a, b)| Witness::Rings(a, b)),
        // every cycle separates the sphere
        Invariant::I8 => None,
        Invariant::I9 => i9_witness(g).map(|c| Witness::Cycle(c.vertices().to_vec())),
    };
    Verdict::from_witness(w)
}

fn is_cubic_internal(g: &EmbeddedGraph, v: VertexId) -> bool {
    g.is_internal_vertex(v) && g.degree(v) == 3
}

/// All cycles made of internal vertices of degree three.
fn cubic_internal_cycles(g: &EmbeddedGraph) -> Vec<Cycle> {
    let keep: Vec<VertexId> = (0..g.n()).filter(|&v| is_cubic_internal(g, v)).collect();
    if keep.len() < 3 {
        return Vec::new();
    }
    let sub = g.edge_subgraph_without_rings(&|u, v| is_cubic_internal(g, u) && is_cubic_internal(g, v));
    match sub {
        Ok(s) => s.cycles_up_to(keep.len()),
        Err(_) => Vec::new(),
    }
}

fn i2_witness(g: &EmbeddedGraph) -> Option<Witness> {
    for c in cubic_internal_cycles(g) {
        let on: BTreeSet<_> = c.vertices().iter().copied().collect();
        let sees = |x: VertexId| !on.contains(&x) && g.neighbors(x).iter().any(|y| on.contains(y));
        for &(u, v) in g.edges() {
            if sees(u) && sees(v) {
                return Some(Witness::CycleWithEdge(c.vertices().to_vec(), u, v));
            }
        }
    }
    None
}

/// A path of length one or two joining ring vertices and not inside the rings.
fn short_ring_path(g: &EmbeddedGraph) -> Option<Vec<VertexId>> {
    for &(u, v) in g.edges() {
        if g.is_ring_vertex(u) && g.is_ring_vertex(v) && !g.is_ring_edge(u, v) {
            return Some(vec![u, v]);
        }
    }
    for x in 0..g.n() {
        let nb = g.neighbors(x);
        for (i, &u) in nb.iter().enumerate() {
            for &v in &nb[i + 1..] {
                if g.is_ring_vertex(u) && g.is_ring_vertex(v) && !(g.is_ring_edge(u, x) && g.is_ring_edge(x, v)) {
                    return Some(vec![u, x, v]);
                }
            }
        }
    }
    None
}

fn close_rings(g: &EmbeddedGraph) -> Option<(usize, usize)> {
    let rings = g.rings();
    for a in 0..rings.len() {
        for b in a + 1..rings.len() {
            let d = rings[a]
                .vertices
                .iter()
                .flat_map(|&u| {
                    let dist = g.bfs(u);
                    rings[b].vertices.iter().filter_map(move |&v| dist[v]).collect::<Vec<_>>()
                })
                .min();
            if matches!(d, Some(d) if d < 4) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Sides of a cycle that are open disks avoiding the rings. With
/// `in_surface` the disk must also avoid every cuff patch.
fn clean_sides(g: &EmbeddedGraph, c: &[VertexId], in_surface: bool) -> Vec<(BTreeSet<FaceId>, BTreeSet<VertexId>)> {
    let Some(s) = g.cycle_sides(c) else { return Vec::new() };
    [(s.left_faces, s.left_vertices), (s.right_faces, s.right_vertices)]
        .into_iter()
        .filter(|(fs, vs)| {
            if vs.iter().any(|&v| g.is_ring_vertex(v)) {
                return false;
            }
            if in_surface {
                !fs.iter().any(|&f| g.is_ring_face(f) || g.is_cuff_face(f))
            } else {
                fs.len() == 1 || !fs.iter().any(|&f| g.is_ring_face(f))
            }
        })
        .collect()
}

fn edges_inside(g: &EmbeddedGraph, fs: &BTreeSet<FaceId>) -> Vec<(VertexId, VertexId)> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| {
            let (a, b) = g.edge_faces(u, v).expect("edge");
            fs.contains(&a) && fs.contains(&b)
        })
        .collect()
}

fn i9_witness(g: &EmbeddedGraph) -> Option<Cycle> {
    for c in g.cycles_up_to(9) {
        for (fs, vs) in clean_sides(g, c.vertices(), false) {
            let ok = match fs.len() {
                1 => true,
                // a 5-face and the rest, cut by a single chord
                2 => vs.is_empty() && fs.iter().any(|&f| g.face_length(f) == 5),
                3 => {
                    c.len() == 9
                        && vs.len() == 1
                        && fs.iter().all(|&f| g.face_length(f) == 5)
                        && vs.iter().all(|&v| g.degree(v) == 3)
                }
                _ => false,
            };
            if !ok {
                return Some(c);
            }
        }
    }
    None
}

// ----- faces -----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceClass {
    Closed2Cell,
    Open2CellOnly,
    Omnipresent,
    Other,
}

/// On the sphere a face is an open disk exactly when it has one boundary walk.
pub fn is_open_2cell(g: &EmbeddedGraph, f: FaceId) -> bool {
    g.face(f).walks.len() == 1
}

pub fn is_closed_2cell(g: &EmbeddedGraph, f: FaceId) -> bool {
    if !is_open_2cell(g, f) {
        return false;
    }
    let walk = g.face_cycle(f);
    let distinct: BTreeSet<_> = walk.iter().collect();
    walk.len() >= 3 && distinct.len() == walk.len()
}

/// Not an open disk, and every boundary walk is a vertex ring or a cycle
/// cutting off a closed disk with exactly one ring away from the face.
pub fn is_omnipresent(g: &EmbeddedGraph, f: FaceId) -> bool {
    if is_open_2cell(g, f) {
        return false;
    }
    g.face_walks(f).iter().all(|walk| {
        if walk.len() == 1 {
            return g.is_vertex_ring(walk[0]);
        }
        let distinct: BTreeSet<_> = walk.iter().collect();
        if distinct.len() != walk.len() || walk.len() < 3 {
            return false;
        }
        let Some(sides) = g.cycle_sides(walk) else { return false };
        let (fs, inner) = if sides.left_faces.contains(&f) {
            (sides.right_faces, sides.right_vertices)
        } else {
            (sides.left_faces, sides.left_vertices)
        };
        let closed: BTreeSet<VertexId> = inner.iter().copied().chain(walk.iter().copied()).collect();
        let count = g
            .rings()
            .iter()
            .filter(|r| if r.is_facial() { fs.contains(&r.face) } else { closed.contains(&r.vertices[0]) })
            .count();
        count == 1
    })
}

pub fn classify_face(g: &EmbeddedGraph, f: FaceId) -> FaceClass {
    if is_closed_2cell(g, f) {
        FaceClass::Closed2Cell
    } else if is_open_2cell(g, f) {
        FaceClass::Open2CellOnly
    } else if is_omnipresent(g, f) {
        FaceClass::Omnipresent
    } else {
        FaceClass::Other
    }
}

// ----- allowable paths -----

/// Whether `p` (ends in rings, interior off the rings) is allowable.
pub fn is_allowable(g: &EmbeddedGraph, p: &[VertexId]) -> bool {
    let len = p.len().saturating_sub(1);
    if !(3..=4).contains(&len) {
        return false;
    }
    let (u, v) = (p[0], p[len]);
    let (Some(ru), Some(rv)) = (g.ring_of(u), g.ring_of(v)) else { return false };
    if ru != rv || !g.rings()[ru].is_facial() || u == v {
        return false;
    }
    let ring = &g.rings()[ru].vertices;
    let k = ring.len();
    let iu = ring.iter().position(|&x| x == u).expect("on ring");
    let iv = ring.iter().position(|&x| x == v).expect("on ring");
    let arcs = [
        (0..=(iv + k - iu) % k).map(|j| ring[(iu + j) % k]).collect::<Vec<_>>(),
        (0..=(iu + k - iv) % k).map(|j| ring[(iv + j) % k]).rev().collect::<Vec<_>>(),
    ];
    for q in arcs {
        // q runs u .. v; the cycle is p followed by q reversed
        let mut cyc: Vec<VertexId> = p.to_vec();
        cyc.extend(q.iter().rev().skip(1).take(q.len().saturating_sub(2)));
        if cyc.len() > 8 || !g.is_cycle(&cyc) {
            continue;
        }
        for (fs, _) in clean_sides(g, &cyc, true) {
            let ok = if len == 3 {
                cyc.len() == 5 && fs.len() == 1
            } else {
                let inside = edges_inside(g, &fs);
                match inside.as_slice() {
                    [] => true,
                    [(a, b)] => {
                        let qlen = q.len() - 1;
                        qlen % 2 == 0 && {
                            let (pm, qm) = (p[2], q[qlen / 2]);
                            (*a == pm && *b == qm) || (*a == qm && *b == pm)
                        }
                    }
                    _ => false,
                }
            };
            if ok {
                return true;
            }
        }
    }
    false
}

/// Paths of length 1..=4 between ring vertices with interior off the rings.
pub fn ring_paths(g: &EmbeddedGraph, max_len: usize) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    for s in 0..g.n() {
        if !g.is_ring_vertex(s) {
            continue;
        }
        let mut path = vec![s];
        ring_paths_from(g, max_len, &mut path, &mut out);
    }
    // each path found from both ends; keep one orientation
    out.retain(|p| p[0] < p[p.len() - 1]);
    out.sort();
    out
}

fn ring_paths_from(g: &EmbeddedGraph, max_len: usize, path: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
    let v = *path.last().expect("non-empty");
    for &u in g.neighbors(v) {
        if path.contains(&u) {
            continue;
        }
        if g.is_ring_vertex(u) {
            if !(path.len() == 1 && g.is_ring_edge(v, u)) {
                let mut p = path.clone();
                p.push(u);
                out.push(p);
            }
        } else if path.len() < max_len {
            path.push(u);
            ring_paths_from(g, max_len, path, out);
            path.pop();
        }
    }
}

/// Every ring-to-ring path of length at most four is allowable; the first
/// offending path is the witness.
pub fn is_well_behaved(g: &EmbeddedGraph) -> Verdict {
    Verdict::from_witness(ring_paths(g, 4).into_iter().find(|p| !is_allowable(g, p)).map(Witness::Path))
}

/// Two vertices whose removal leaves a ring-free part.
pub fn has_internal_2cut(g: &EmbeddedGraph) -> Option<(VertexId, VertexId)> {
    let n = g.n();
    for u in 0..n {
        for v in u + 1..n {
            let mut seen = vec![false; n];
            seen[u] = true;
            seen[v] = true;
            let mut parts: Vec<(bool, usize)> = Vec::new();
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let mut ring = false;
                let mut size = 0;
                let mut q = VecDeque::from([s]);
                seen[s] = true;
                while let Some(x) = q.pop_front() {
                    size += 1;
                    ring |= g.is_ring_vertex(x);
                    for &y in g.neighbors(x) {
                        if !seen[y] {
                            seen[y] = true;
                            q.push_back(y);
                        }
                    }
                }
                parts.push((ring, size));
            }
            if parts.len() >= 2 && parts.iter().any(|(r, _)| !r) {
                return Some((u, v));
            }
        }
    }
    None
}

// ----- exceptional disks -----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exceptional {
    E0,
    E1,
    E2,
    E3,
    E4,
    E5,
    None,
}

impl Exceptional {
    pub fn very_exceptional(self) -> bool {
        matches!(self, Exceptional::E0 | Exceptional::E1 | Exceptional::E2 | Exceptional::E3)
    }

    pub fn is_exceptional(self) -> bool {
        self != Exceptional::None
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("expected exactly one facial ring")]
    MultipleRings,
}

pub fn classify_exceptional(g: &EmbeddedGraph) -> Result<Exceptional, ClassifyError> {
    if g.rings().len() != 1 || !g.rings()[0].is_facial() {
        return Err(ClassifyError::MultipleRings);
    }
    let l = g.rings()[0].len();
    let internal: Vec<VertexId> = (0..g.n()).filter(|&v| g.is_internal_vertex(v)).collect();
    let mut lens: Vec<usize> = g.internal_faces().map(|f| g.face_length(f)).collect();
    lens.sort_unstable();
    let sorted = |mut v: Vec<usize>| {
        v.sort_unstable();
        v
    };
    let all_cubic = internal.iter().all(|&v| g.degree(v) == 3);
    let extra_edges = g.num_edges() as i64 - l as i64;
    if internal.is_empty() && extra_edges == 0 {
        return Ok(Exceptional::E0);
    }
    if l >= 8 && extra_edges == 1 {
        return Ok(Exceptional::E1);
    }
    if l >= 9 && internal.len() == 1 && all_cubic && l >= 4 && lens == sorted(vec![5, 5, l - 4]) {
        return Ok(Exceptional::E2);
    }
    if l >= 11 && internal.len() == 1 && all_cubic && lens == sorted(vec![5, 6, l - 5]) {
        return Ok(Exceptional::E3);
    }
    if l >= 10
        && internal.len() == 2
        && all_cubic
        && g.adjacent(internal[0], internal[1])
        && lens == sorted(vec![5, 5, 5, l - 5])
    {
        return Ok(Exceptional::E4);
    }
    if l >= 10 && internal.len() == 5 && all_cubic && lens == sorted(vec![5, 5, 5, 5, 5, l - 5]) {
        let set: BTreeSet<_> = internal.iter().copied().collect();
        let facial_pentagon =
            g.internal_faces().any(|f| g.face_length(f) == 5 && is_closed_2cell(g, f) && g.face_vertex_set(f) == set);
        if facial_pentagon {
            return Ok(Exceptional::E5);
        }
    }
    Ok(Exceptional::None)
}

// ----- small critical disks -----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaneCharClause {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneChar {
    Clauses(Vec<PlaneCharClause>),
    NonCritical,
    NotApplicable(String),
}

/// Which clauses of the characterisation of critical disks with a short
/// induced ring the graph satisfies.
pub fn planechar_case(g: &EmbeddedGraph) -> PlaneChar {
    let na = |s: &str| PlaneChar::NotApplicable(s.to_string());
    if g.rings().len() != 1 || !g.rings()[0].is_facial() || g.num_components() != 1 {
        return na("needs exactly one facial ring");
    }
    let ring = g.rings()[0].vertices.clone();
    let l = ring.len();
    if l > 12 {
        return na("ring longer than 12");
    }
    if ring.iter().any(|&u| ring.iter().any(|&v| u < v && g.adjacent(u, v) && !g.is_ring_edge(u, v))) {
        return na("ring not induced");
    }
    if matches!(g.girth(), Some(k) if k < 5) {
        return na("girth below 5");
    }
    match colorer::is_r_critical(g, 12) {
        Ok(c) if c.verdict == CriticalityVerdict::RCritical => {}
        Ok(_) => return PlaneChar::NonCritical,
        Err(e) => return PlaneChar::NotApplicable(e.to_string()),
    }
    PlaneChar::Clauses(planechar_clauses(g))
}

/// The clauses that hold, without checking criticality.
pub fn planechar_clauses(g: &EmbeddedGraph) -> Vec<PlaneCharClause> {
    let ring = g.rings()[0].vertices.clone();
    let l = ring.len();
    let inner: Vec<VertexId> = (0..g.n()).filter(|&v| g.is_internal_vertex(v)).collect();
    let mut out = Vec::new();
    let (inner_g, _) = g.induced(&inner).expect("induced subgraph builds");
    let connected = !inner.is_empty() && inner_g.is_connected();
    let e = inner_g.num_edges();
    if l >= 9 && connected && e + 1 == inner.len() && inner.len() + 8 <= l {
        out.push(PlaneCharClause::A);
    }
    if l >= 10 && connected && e == inner.len() && inner.len() + 5 <= l && inner_g.girth() == Some(5) {
        out.push(PlaneCharClause::B);
    }
    if l == 12 {
        let ok = |parity: usize| {
            ring.iter().enumerate().filter(|(i, _)| i % 2 == parity).all(|(_, &v)| {
                g.degree(v) == 2
                    && g.internal_faces()
                        .any(|f| g.face_length(f) == 5 && is_closed_2cell(g, f) && g.face_vertex_set(f).contains(&v))
            })
        };
        if ok(0) || ok(1) {
            out.push(PlaneCharClause::C);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures;

    #[test]
    fn c5_basics() {
        let g = fixtures::cycle(5);
        assert!(check_invariant(&g, Invariant::I0).holds());
        assert!(matches!(check_invariant(&g, Invariant::I5), Verdict::Fails(Witness::Edge(0, 1))));
        assert!(is_well_behaved(&g).holds());
        assert_eq!(has_internal_2cut(&g), None);
        assert_eq!(classify_exceptional(&g), Ok(Exceptional::E0));
    }

    #[test]
    fn prism_invariants() {
        let g = fixtures::prism();
        assert!(check_invariant(&g, Invariant::I1).holds());
        assert!(check_invariant(&g, Invariant::I2).holds());
        assert!(check_invariant(&g, Invariant::I3).holds());
        assert!(is_well_behaved(&g).holds());
        assert_eq!(has_internal_2cut(&g), None);
        assert_eq!(classify_exceptional(&g), Ok(Exceptional::E5));
        let inner = g.internal_faces().find(|&f| g.face_vertex_set(f).iter().all(|&v| v >= 10)).unwrap();
        assert_eq!(classify_face(&g, inner), FaceClass::Closed2Cell);
    }

    #[test]
    fn chord_is_not_allowable() {
        let g = fixtures::c8_chord();
        assert!(!is_allowable(&g, &[0, 4]));
        assert!(matches!(is_well_behaved(&g), Verdict::Fails(Witness::Path(p)) if p == vec![0, 4]));
        assert_eq!(classify_exceptional(&g), Ok(Exceptional::E1));
        assert_eq!(planechar_case(&g), PlaneChar::NotApplicable("ring not induced".into()));
    }

    #[test]
    fn e2_classes() {
        let g = fixtures::e2(9);
        assert_eq!(classify_exceptional(&g), Ok(Exceptional::E2));
        assert_eq!(planechar_case(&g), PlaneChar::Clauses(vec![PlaneCharClause::A]));
        assert_eq!(planechar_case(&fixtures::cycle(9)), PlaneChar::NonCritical);
    }

    #[test]
    fn annulus_face_is_omnipresent() {
        let g = fixtures::annulus(5, 6);
        let f = g.internal_faces().next().unwrap();
        assert_eq!(classify_face(&g, f), FaceClass::Omnipresent);
    }

    #[test]
    fn pendant_path_gives_2cut() {
        let g = fixtures::prism_with_ear();
        assert!(has_internal_2cut(&g).is_some());
    }

    #[test]
    fn cut_vertex_face_is_open_only() {
        let g = fixtures::two_pentagons_at_vertex();
        let f = g.internal_faces().find(|&f| g.face_length(f) == 10).unwrap();
        assert_eq!(classify_face(&g, f), FaceClass::Open2CellOnly);
    }

    #[test]
    fn length_three_path_closing_a_face_is_allowable() {
        let g = fixtures::c7_with_handle();
        assert!(is_allowable(&g, &[0, 7, 8, 2]));
        assert!(!is_allowable(&g, &[0, 7, 8]));
    }
}
