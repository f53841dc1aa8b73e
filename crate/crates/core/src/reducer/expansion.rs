//! Pulling a face of a subgraph of the reduced graph back into the host:
//! the host subgraph standing for its boundary, the host faces it turns
//! into, the graphs drawn inside them, elasticity and contribution.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::catalog::ConfigId;
use crate::graph::{EdgeId, EmbeddedGraph, FaceId, RingDecl, VertexId};
use crate::invariants::{
    check_invariant, classify_exceptional, classify_face, is_well_behaved, Exceptional, FaceClass, Invariant,
};
use crate::weights::{Ext, WeightFunction, Q};

use super::ReductionResult;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("pulled-back boundary is not the union of its faces: {0}")]
    Condition1Violated(String),
    #[error("face {0} is neither closed 2-cell nor omnipresent, or its expansion is unusual")]
    UnclassifiedFace(FaceId),
    #[error("boundary walk matches no rewriting rule: {0}")]
    WalkUnmatched(String),
    #[error("lemma violated: {0}")]
    LemmaViolated(String),
    #[error("precondition fails: {0}")]
    Precondition(String),
    #[error("expansion of face {0} cannot be drawn")]
    Degenerate(FaceId),
    #[error("face weight needs s({0})")]
    WeightUndefined(i64),
}

/// One graph of the expansion: everything drawn inside one face of the
/// pulled-back boundary, cut open along that face's boundary walks.
#[derive(Debug, Clone)]
pub struct ExpansionMember {
    pub graph: EmbeddedGraph,
    /// Host vertex behind each vertex; boundary vertices may repeat.
    pub origin: Vec<VertexId>,
    /// Host faces inside.
    pub host_faces: BTreeSet<FaceId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmniShape {
    /// Two ring components carry more than their ring.
    TwoNontrivial,
    /// At most one does; its class as a plane graph with one ring.
    Single(Exceptional),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceKind {
    Closed2Cell {
        /// Class of each member.
        classes: Vec<Exceptional>,
        /// A path through two inner vertices splitting the single member
        /// into two parts with at least two vertices each.
        split_path: bool,
        /// Two members, both bare cycles, one of length five.
        two_cycles_one_five: bool,
    },
    Omnipresent(OmniShape),
}

#[derive(Debug, Clone)]
pub struct ExpansionRecord {
    pub face: FaceId,
    pub face_length: usize,
    /// Pulled-back boundary walks as host vertex sequences.
    pub walks: Vec<Vec<VertexId>>,
    pub j_vertices: BTreeSet<VertexId>,
    pub j_edges: BTreeSet<EdgeId>,
    /// Boundary walks of each face of the pulled-back boundary that stands for the face.
    pub s_faces: Vec<Vec<Vec<VertexId>>>,
    pub s_lengths: Vec<usize>,
    pub members: Vec<ExpansionMember>,
    pub elasticity: usize,
    pub uses_replacement_path: bool,
    pub kind: Option<FaceKind>,
}

/// A subgraph of the reduced graph containing its rings, with its own
/// vertex ids.
#[derive(Debug, Clone)]
pub struct ReducedSubgraph {
    pub graph: EmbeddedGraph,
    /// Reduced-graph vertex behind each vertex.
    pub to_reduced: Vec<VertexId>,
}

impl ReducedSubgraph {
    /// The reduced graph itself.
    pub fn whole(res: &ReductionResult) -> Self {
        ReducedSubgraph { graph: res.graph.clone(), to_reduced: (0..res.graph.n()).collect() }
    }

    /// Peels internal vertices of degree below three until none is left.
    pub fn core(res: &ReductionResult) -> Self {
        let gp = &res.graph;
        let mut alive = vec![true; gp.n()];
        loop {
            let low = (0..gp.n()).find(|&v| {
                alive[v] && gp.is_internal_vertex(v) && gp.neighbors(v).iter().filter(|&&u| alive[u]).count() < 3
            });
            match low {
                Some(v) => alive[v] = false,
                None => break,
            }
        }
        let keep: Vec<VertexId> = (0..gp.n()).filter(|&v| alive[v]).collect();
        let (graph, to_reduced) = gp.induced(&keep).expect("induced subgraph of a plane graph");
        ReducedSubgraph { graph, to_reduced }
    }

    /// Wraps a subgraph given with the reduced id of each vertex, such as a
    /// critical subgraph from the colourer.
    pub fn new(graph: EmbeddedGraph, to_reduced: Vec<VertexId>) -> Self {
        ReducedSubgraph { graph, to_reduced }
    }

    fn local(&self, v: VertexId) -> Option<VertexId> {
        self.to_reduced.iter().position(|&x| x == v)
    }
}

fn check_subgraph(res: &ReductionResult, g2: &ReducedSubgraph) -> Result<(), ExpansionError> {
    let gp = &res.graph;
    let h = &g2.graph;
    let distinct: BTreeSet<VertexId> = g2.to_reduced.iter().copied().collect();
    if g2.to_reduced.len() != h.n() || distinct.len() != h.n() || distinct.iter().any(|&v| v >= gp.n()) {
        return Err(ExpansionError::Precondition("vertex map is not an injection into the reduced graph".into()));
    }
    if h.edges().iter().any(|&(u, v)| !gp.adjacent(g2.to_reduced[u], g2.to_reduced[v])) {
        return Err(ExpansionError::Precondition("edge outside the reduced graph".into()));
    }
    if h.rings().len() != gp.rings().len() {
        return Err(ExpansionError::Precondition("rings differ from the reduced graph".into()));
    }
    Ok(())
}

/// Rewrites one boundary walk of the reduced subgraph into a host walk.
/// Returns the walk and whether a replacement path was inserted.
fn rewrite_walk(
    g: &EmbeddedGraph,
    res: &ReductionResult,
    walk: &[VertexId],
) -> Result<(Vec<VertexId>, bool), ExpansionError> {
    let m = walk.len();
    let old = |v: VertexId| res.old_of_new[v];
    if m == 1 {
        return Ok((vec![old(walk[0])], false));
    }
    let at = |i: usize| walk[i % m];
    let unmatched = |why: String| ExpansionError::WalkUnmatched(format!("{walk:?}: {why}"));
    // host ends of a non-new reduced edge, oriented like (u, v)
    let host_ends = |u: VertexId, v: VertexId| -> Option<(VertexId, VertexId)> {
        let (a, b) = res.host_edges[res.origin(u, v)?];
        if res.new_of_old[a] == Some(u) {
            Some((a, b))
        } else {
            Some((b, a))
        }
    };
    let member_on = |u: VertexId, v: VertexId| -> Option<VertexId> {
        let (a, b) = host_ends(u, v)?;
        [a, b].into_iter().find(|x| res.identified.contains(x))
    };
    let mut out: Vec<VertexId> = Vec::new();
    let mut inserted = false;
    for i in 0..m {
        let (u, v) = (at(i), at(i + 1));
        let piece: Vec<VertexId> = if res.is_new_edge(u, v) {
            inserted = true;
            res.replacement_path(old(u), old(v)).ok_or_else(|| unmatched("new edge without path".into()))?
        } else if res.is_squashed(u, v) {
            let j_is_u = res.is_new_vertex(u);
            let x = if j_is_u { v } else { u };
            let (p, q) = if j_is_u { (at(i + m - 1), u) } else { (v, at(i + 2)) };
            let member = if res.is_squashed(p, q) {
                let y = if res.is_new_vertex(p) { q } else { p };
                res.identified.iter().copied().find(|&w| g.adjacent(w, old(x)) && g.adjacent(w, old(y)))
            } else {
                member_on(p, q)
            };
            let w = member.ok_or_else(|| unmatched(format!("no member for squashed edge {u}-{v}")))?;
            if !g.adjacent(w, old(x)) {
                return Err(unmatched(format!("squashed edge {u}-{v} has no host edge at {w}")));
            }
            if j_is_u {
                vec![w, old(x)]
            } else {
                vec![old(x), w]
            }
        } else {
            let (a, b) = host_ends(u, v).ok_or_else(|| unmatched(format!("edge {u}-{v} has no host edge")))?;
            let mut p = vec![a, b];
            let nxt = at(i + 2);
            if res.is_new_vertex(v) && !res.is_squashed(v, nxt) && !res.is_new_edge(v, nxt) {
                if let Some(w) = member_on(v, nxt) {
                    if w != b {
                        inserted = true;
                        let rp = res.replacement_path(b, w).ok_or_else(|| unmatched(format!("no path {b}-{w}")))?;
                        p.extend_from_slice(&rp[1..]);
                    }
                }
            }
            p
        };
        if let Some(&last) = out.last() {
            if last != piece[0] {
                return Err(unmatched(format!("walk breaks at {last} / {}", piece[0])));
            }
            out.pop();
        }
        out.extend(piece);
    }
    if out.first() != out.last() {
        return Err(unmatched("walk does not close".into()));
    }
    out.pop();
    Ok((out, inserted))
}

/// Host faces grouped into the faces of the subgraph with edge set `j`.
fn regions(g: &EmbeddedGraph, j: &HashSet<EdgeId>) -> Vec<usize> {
    let mut region = vec![usize::MAX; g.num_faces()];
    let mut next = 0;
    for s in 0..g.num_faces() {
        if region[s] != usize::MAX {
            continue;
        }
        region[s] = next;
        let mut q = VecDeque::from([s]);
        while let Some(f) = q.pop_front() {
            for d in g.face_darts(f) {
                let dd = g.dart(d);
                if j.contains(&g.edge_id(dd.origin, dd.head).expect("edge")) {
                    continue;
                }
                let h = g.face_of_dart(dd.twin);
                if region[h] == usize::MAX {
                    region[h] = next;
                    q.push_back(h);
                }
            }
        }
        next += 1;
    }
    region
}

/// Region of a host vertex off the subgraph (any corner will do).
fn vertex_region(g: &EmbeddedGraph, region: &[usize], v: VertexId) -> Option<usize> {
    g.faces_around(v).first().map(|&f| region[f])
}

/// Builds the pulled-back boundary, its faces standing for `f2`, their
/// expansion graphs and the elasticity of `f2`.
pub fn build_expansion(
    g: &EmbeddedGraph,
    res: &ReductionResult,
    g2: &ReducedSubgraph,
    f2: FaceId,
) -> Result<ExpansionRecord, ExpansionError> {
    check_subgraph(res, g2)?;
    let mut walks = Vec::new();
    let mut uses = false;
    for w in g2.graph.face_walks(f2) {
        let w: Vec<VertexId> = w.iter().map(|&v| g2.to_reduced[v]).collect();
        let (hw, ins) = rewrite_walk(g, res, &w)?;
        uses |= ins;
        walks.push(hw);
    }
    let mut j_vertices = BTreeSet::new();
    let mut j_edges = BTreeSet::new();
    for w in &walks {
        j_vertices.extend(w.iter().copied());
        if w.len() > 1 {
            for i in 0..w.len() {
                let (a, b) = (w[i], w[(i + 1) % w.len()]);
                let e = g
                    .edge_id(a, b)
                    .ok_or_else(|| ExpansionError::WalkUnmatched(format!("{a}-{b} is not a host edge")))?;
                j_edges.insert(e);
            }
        }
    }
    let jset: HashSet<EdgeId> = j_edges.iter().copied().collect();
    let region = regions(g, &jset);
    let in_j = |a: VertexId, b: VertexId| g.edge_id(a, b).is_some_and(|e| jset.contains(&e));
    // regions to the left of the pulled-back walks
    let mut s_regions: BTreeSet<usize> = BTreeSet::new();
    for w in &walks {
        if w.len() > 1 {
            for i in 0..w.len() {
                let f = g.face_left_of(w[i], w[(i + 1) % w.len()]).expect("host dart");
                s_regions.insert(region[f]);
            }
        } else if let Some(r) = vertex_region(g, &region, w[0]) {
            s_regions.insert(r);
        }
    }
    // subgraph rotation and its face orbits
    let j_next = |u: VertexId, v: VertexId| -> VertexId {
        let rot = g.rotation(v);
        let k = rot.len();
        let i = rot.iter().position(|&x| x == u).expect("rotation entry");
        (1..=k).map(|s| rot[(i + s) % k]).find(|&x| in_j(v, x)).expect("subgraph dart")
    };
    let mut seen: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut orbits: BTreeMap<usize, Vec<Vec<VertexId>>> = BTreeMap::new();
    for &e in &j_edges {
        let (a, b) = g.edges()[e];
        for (u, v) in [(a, b), (b, a)] {
            if seen.contains(&(u, v)) {
                continue;
            }
            let r = region[g.face_left_of(u, v).expect("dart")];
            let mut orbit = Vec::new();
            let (mut x, mut y) = (u, v);
            while seen.insert((x, y)) {
                orbit.push(x);
                let z = j_next(x, y);
                x = y;
                y = z;
            }
            orbits.entry(r).or_default().push(orbit);
        }
    }
    let isolated_j: Vec<VertexId> =
        j_vertices.iter().copied().filter(|&v| !g.rotation(v).iter().any(|&u| in_j(v, u))).collect();

    // condition (1)
    let violated = |why: String| Err(ExpansionError::Condition1Violated(why));
    for &e in &j_edges {
        let (a, b) = g.edges()[e];
        let ra = region[g.face_left_of(a, b).expect("dart")];
        let rb = region[g.face_left_of(b, a).expect("dart")];
        if !s_regions.contains(&ra) && !s_regions.contains(&rb) {
            return violated(format!("edge {a}-{b} bounds no face of the set"));
        }
    }
    for &v in &isolated_j {
        if !g.is_vertex_ring(v) {
            return violated(format!("isolated vertex {v} is not a vertex ring"));
        }
    }
    for ring in g.rings() {
        if !s_regions.contains(&region[ring.face]) {
            continue;
        }
        if ring.is_facial() || !j_vertices.contains(&ring.vertices[0]) {
            return violated(format!("cuff of ring {:?} meets the face", ring.vertices));
        }
    }

    // faces of the set, their lengths and members
    let mut s_faces = Vec::new();
    let mut s_lengths = Vec::new();
    let mut members = Vec::new();
    for &r in &s_regions {
        let os = orbits.get(&r).cloned().unwrap_or_default();
        let isolated: Vec<VertexId> = isolated_j
            .iter()
            .copied()
            .filter(|&v| vertex_region(g, &region, v).or(g.isolated_face(v).map(|f| region[f])) == Some(r))
            .collect();
        let ring_len: usize = isolated.iter().map(|&v| g.ring_of(v).map_or(0, |i| g.rings()[i].len())).sum();
        s_lengths.push(os.iter().map(Vec::len).sum::<usize>() + ring_len);
        let mut bw = os.clone();
        bw.extend(isolated.iter().map(|&v| vec![v]));
        s_faces.push(bw);
        members.push(
            build_member(g, &region, r, &os, &isolated, &in_j, &j_vertices).ok_or(ExpansionError::Degenerate(f2))?,
        );
    }
    let total: usize = s_lengths.iter().sum();
    let face_length = g2.graph.face_length(f2);
    let elasticity = total.checked_sub(face_length).ok_or_else(|| {
        ExpansionError::LemmaViolated(format!("face {f2}: pulled-back faces are shorter than the face"))
    })?;
    let kind = classify_kind(&g2.graph, f2, &members)?;
    Ok(ExpansionRecord {
        face: f2,
        face_length,
        walks,
        j_vertices,
        j_edges,
        s_faces,
        s_lengths,
        members,
        elasticity,
        uses_replacement_path: uses,
        kind,
    })
}

/// Cuts the host open along the boundary walks of region `r`.
fn build_member(
    g: &EmbeddedGraph,
    region: &[usize],
    r: usize,
    orbits: &[Vec<VertexId>],
    isolated: &[VertexId],
    in_j: &dyn Fn(VertexId, VertexId) -> bool,
    j_vertices: &BTreeSet<VertexId>,
) -> Option<ExpansionMember> {
    let mut origin: Vec<VertexId> = Vec::new();
    // copy of boundary vertex orbit[o][t] at the corner it is visited in
    let mut copy: Vec<Vec<usize>> = Vec::new();
    for o in orbits {
        copy.push(
            (0..o.len())
                .map(|t| {
                    origin.push(o[t]);
                    origin.len() - 1
                })
                .collect(),
        );
    }
    let host_faces: BTreeSet<FaceId> = (0..g.num_faces()).filter(|&f| region[f] == r).collect();
    let inner: Vec<VertexId> = (0..g.n())
        .filter(|&v| !j_vertices.contains(&v))
        .filter(|&v| vertex_region(g, region, v).or(g.isolated_face(v).map(|f| region[f])) == Some(r))
        .collect();
    let mut id_of: HashMap<VertexId, usize> = HashMap::new();
    for &v in inner.iter().chain(isolated) {
        id_of.insert(v, origin.len());
        origin.push(v);
    }
    // corner of boundary vertex v that sees neighbour x
    let mut corner_of: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    let mut between: Vec<Vec<VertexId>> = vec![Vec::new(); origin.len()];
    for (oi, o) in orbits.iter().enumerate() {
        let k = o.len();
        for t in 0..k {
            // corner at o[t] between o[t-1] and o[t+1]
            let (a, v, b) = (o[(t + k - 1) % k], o[t], o[(t + 1) % k]);
            let rot = g.rotation(v);
            let i = rot.iter().position(|&x| x == a)?;
            let c = copy[oi][t];
            for s in 1..=rot.len() {
                let x = rot[(i + s) % rot.len()];
                if x == b && in_j(v, x) {
                    break;
                }
                if in_j(v, x) {
                    return None;
                }
                corner_of.insert((v, x), c);
                between[c].push(x);
            }
        }
    }
    let map_nbr = |v: VertexId, x: VertexId| -> Option<usize> {
        id_of.get(&x).copied().or_else(|| corner_of.get(&(x, v)).copied())
    };
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); origin.len()];
    for (oi, o) in orbits.iter().enumerate() {
        let k = o.len();
        for t in 0..k {
            let c = copy[oi][t];
            let mut rot = vec![copy[oi][(t + k - 1) % k]];
            for &x in &between[c] {
                rot.push(map_nbr(o[t], x)?);
            }
            rot.push(copy[oi][(t + 1) % k]);
            rotation[c] = rot;
        }
    }
    for &v in inner.iter().chain(isolated) {
        let id = id_of[&v];
        rotation[id] = g.rotation(v).iter().map(|&x| map_nbr(v, x)).collect::<Option<Vec<_>>>()?;
    }
    let mut rings: Vec<RingDecl> = copy.iter().map(|cs| RingDecl::Facial(cs.iter().rev().copied().collect())).collect();
    for &v in isolated {
        let weak = g.ring_of(v).is_some_and(|i| g.rings()[i].kind == crate::graph::RingKind::WeakVertex);
        rings.push(RingDecl::Vertex { vertex: id_of[&v], weak, cuff: None });
    }
    let outer: Vec<(VertexId, VertexId)> = if copy.len() + isolated.len() > 1 {
        copy.iter().map(|cs| (cs[0], cs[1 % cs.len()])).collect()
    } else {
        Vec::new()
    };
    let graph = EmbeddedGraph::build_with_outer(rotation, rings, outer).ok()?;
    Some(ExpansionMember { graph, origin, host_faces })
}

fn classify_kind(
    g2: &EmbeddedGraph,
    f2: FaceId,
    members: &[ExpansionMember],
) -> Result<Option<FaceKind>, ExpansionError> {
    match classify_face(g2, f2) {
        FaceClass::Closed2Cell => {
            let classes = members
                .iter()
                .map(|m| classify_exceptional(&m.graph).map_err(|_| ExpansionError::UnclassifiedFace(f2)))
                .collect::<Result<Vec<_>, _>>()?;
            let split_path = members.len() == 1 && classes[0] == Exceptional::None && has_split_path(&members[0]);
            let two_cycles_one_five = members.len() == 2
                && classes.iter().all(|&c| c == Exceptional::E0)
                && members.iter().any(|m| m.graph.rings()[0].len() == 5);
            Ok(Some(FaceKind::Closed2Cell { classes, split_path, two_cycles_one_five }))
        }
        FaceClass::Omnipresent => {
            Ok(Some(FaceKind::Omnipresent(omni_shape(g2).ok_or(ExpansionError::UnclassifiedFace(f2))?)))
        }
        _ => Ok(None),
    }
}

/// Whether a path ring, inner, inner, ring cuts the member into two parts,
/// each with at least two vertices strictly inside.
fn has_split_path(m: &ExpansionMember) -> bool {
    let h = &m.graph;
    let ring = &h.rings()[0];
    let cyc = &ring.vertices;
    let k = cyc.len();
    let pos: HashMap<VertexId, usize> = cyc.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let is_inner = |v: VertexId| h.is_internal_vertex(v);
    let inside = |c: &[VertexId]| -> Option<usize> {
        let s = h.cycle_sides(c)?;
        Some(if s.left_faces.contains(&ring.face) { s.right_vertices.len() } else { s.left_vertices.len() })
    };
    for &a in cyc {
        for &b in h.neighbors(a).iter().filter(|&&b| is_inner(b)) {
            for &c in h.neighbors(b).iter().filter(|&&c| is_inner(c)) {
                for &d in h.neighbors(c).iter().filter(|&&d| pos.contains_key(&d) && d != a) {
                    let pd = pos[&d];
                    // the two arcs of the ring from d back to a
                    let fwd: Vec<VertexId> = (1..).map(|s| cyc[(pd + s) % k]).take_while(|&v| v != a).collect();
                    let bwd: Vec<VertexId> = (1..).map(|s| cyc[(pd + k - s) % k]).take_while(|&v| v != a).collect();
                    let mut c1 = vec![a, b, c, d];
                    c1.extend(&fwd);
                    let mut c2 = vec![a, b, c, d];
                    c2.extend(&bwd);
                    if inside(&c1).is_some_and(|x| x >= 2) && inside(&c2).is_some_and(|x| x >= 2) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Ring components of the subgraph: two of them carry more than their
/// ring, or the class of the only one that might.
fn omni_shape(g2: &EmbeddedGraph) -> Option<OmniShape> {
    let mut nontrivial = Vec::new();
    for ring in g2.rings() {
        let comp = g2.component_of(ring.vertices[0]);
        let vs: Vec<VertexId> = (0..g2.n()).filter(|&v| g2.component_of(v) == comp).collect();
        let edges = g2.edges().iter().filter(|&&(u, _)| g2.component_of(u) == comp).count();
        if vs.len() > ring.vertices.len() || edges > ring.len().max(if ring.is_facial() { ring.len() } else { 0 }) {
            nontrivial.push(vs);
        }
    }
    match nontrivial.len() {
        0 => Some(OmniShape::Single(Exceptional::E0)),
        1 => {
            let (h, _) = g2.induced(&nontrivial[0]).ok()?;
            Some(OmniShape::Single(classify_exceptional(&h).ok()?))
        }
        _ => Some(OmniShape::TwoNontrivial),
    }
}

/// Records for every internal face of `g2`.
pub fn expansion_records(
    g: &EmbeddedGraph,
    res: &ReductionResult,
    g2: &ReducedSubgraph,
) -> Result<Vec<ExpansionRecord>, ExpansionError> {
    g2.graph.internal_faces().map(|f| build_expansion(g, res, g2, f)).collect()
}

fn s_at(w: &WeightFunction, l: i64) -> Result<Q, ExpansionError> {
    if l < 0 {
        return Err(ExpansionError::WeightUndefined(l));
    }
    w.s(l as usize).ok_or(ExpansionError::WeightUndefined(l))
}

/// Contribution of one face, by the case list on its expansion.
pub fn contribution(rec: &ExpansionRecord, w: &WeightFunction) -> Result<Ext, ExpansionError> {
    let el = rec.elasticity as i64;
    let s = |l: i64| s_at(w, l);
    let fin = |x: Q| Ok(Ext::Finite(x));
    match &rec.kind {
        None => Err(ExpansionError::UnclassifiedFace(rec.face)),
        Some(FaceKind::Closed2Cell { classes, split_path, two_cycles_one_five }) => match classes.len() {
            0 => Err(ExpansionError::UnclassifiedFace(rec.face)),
            1 => match classes[0] {
                Exceptional::E0 => Ok(if el > 0 { Ext::NegInf } else { Ext::zero() }),
                Exceptional::E1 if el == 5 => Ok(Ext::NegInf),
                Exceptional::E1 => fin(s(8 - el)? - s(5)? * 2),
                Exceptional::E2 if el == 5 => Ok(Ext::NegInf),
                Exceptional::E2 => fin(s(9 - el)? - s(5)? * 3),
                Exceptional::E3 => fin(s(11 - el)? - s(6)? * 2 - s(5)?),
                Exceptional::E4 | Exceptional::E5 => fin(s(10 - el)? - s(5)? * 6),
                Exceptional::None if *split_path => fin(s(7)?),
                Exceptional::None => fin(s(11 - el)? - s(6)? + s(5)? * 5),
            },
            2 if *two_cycles_one_five => fin(s(10 - el)? - s(5)? * 6),
            _ => fin(s(12 - el)? - s(6)? * 2),
        },
        Some(FaceKind::Omnipresent(shape)) => match shape {
            OmniShape::TwoNontrivial => fin(Q::from_integer(1)),
            OmniShape::Single(e) if e.very_exceptional() => Ok(Ext::NegInf),
            OmniShape::Single(Exceptional::E4 | Exceptional::E5) => fin(Q::from_integer(5 - el) - s(5)? * 5),
            OmniShape::Single(_) => fin(Q::from_integer(5 - el) + s(5)? * 5),
        },
    }
}

/// The correction for the configuration whose six-face disappears.
fn delta(res: &ReductionResult, w: &WeightFunction) -> Q {
    if res.config() == ConfigId::R3 {
        w.s(6).expect("s(6)")
    } else {
        Q::from_integer(0)
    }
}

/// Sum of the contributions of the internal faces, less the correction.
pub fn total_contribution(
    g: &EmbeddedGraph,
    res: &ReductionResult,
    g2: &ReducedSubgraph,
    w: &WeightFunction,
) -> Result<Ext, ExpansionError> {
    let recs = expansion_records(g, res, g2)?;
    let mut sum = Ext::Finite(-delta(res, w));
    for r in &recs {
        sum = sum + contribution(r, w)?;
    }
    Ok(sum)
}

/// One checked statement: which check, on what, and how it came out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditLine {
    pub check: &'static str,
    pub object: String,
    pub holds: Option<bool>,
    pub detail: String,
}

impl fmt::Display for AuditLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.holds {
            Some(true) => "ok",
            Some(false) => "FAIL",
            None => "skipped",
        };
        write!(f, "{} {} {} {}", self.check, self.object, verdict, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub lines: Vec<AuditLine>,
}

impl AuditReport {
    fn push(&mut self, check: &'static str, object: impl Into<String>, holds: Option<bool>, detail: impl Into<String>) {
        self.lines.push(AuditLine { check, object: object.into(), holds, detail: detail.into() });
    }

    pub fn holds(&self) -> bool {
        self.lines.iter().all(|l| l.holds != Some(false))
    }

    fn into_result(self) -> Result<AuditReport, ExpansionError> {
        match self.lines.iter().find(|l| l.holds == Some(false)) {
            Some(l) => Err(ExpansionError::LemmaViolated(l.to_string())),
            None => Ok(self),
        }
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// At most three faces stretch, by at most ten in total; a closed disk or
/// omnipresent face stretches by at most five, and by at most three unless
/// exactly five.
pub fn elasticity_audit(
    g: &EmbeddedGraph,
    res: &ReductionResult,
    g2: &ReducedSubgraph,
) -> Result<AuditReport, ExpansionError> {
    let recs = expansion_records(g, res, g2)?;
    let mut rep = AuditReport::default();
    let nonzero = recs.iter().filter(|r| r.elasticity > 0).count();
    let sum: usize = recs.iter().map(|r| r.elasticity).sum();
    rep.push("elastic-faces", "graph", Some(nonzero <= 3), format!("{nonzero}/3"));
    rep.push("elasticity-sum", "graph", Some(sum <= 10), format!("{sum}/10"));
    for r in &recs {
        let el = r.elasticity;
        if r.kind.is_some() {
            rep.push("face-elasticity", format!("face {}", r.face), Some(el == 5 || el <= 3), format!("{el}"));
        }
        if el > 0 {
            rep.push("stretch-needs-path", format!("face {}", r.face), Some(r.uses_replacement_path), format!("{el}"));
        }
    }
    rep.into_result()
}

/// Component of `g2` containing `v` as a plane graph with the single ring `ring`.
fn component_with_ring(g2: &EmbeddedGraph, v: VertexId, ring: &[VertexId]) -> Option<EmbeddedGraph> {
    let comp = g2.component_of(v);
    let keep: Vec<VertexId> = (0..g2.n()).filter(|&x| g2.component_of(x) == comp).collect();
    let new_id: HashMap<VertexId, usize> = keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let rotation: Vec<Vec<usize>> = keep.iter().map(|&x| g2.rotation(x).iter().map(|u| new_id[u]).collect()).collect();
    let r: Vec<usize> = ring.iter().map(|x| new_id.get(x).copied()).collect::<Option<_>>()?;
    EmbeddedGraph::build(rotation, vec![RingDecl::Facial(r)]).ok()
}

/// Checks the lower bounds on the total contribution, the long face and that
/// components carrying the new vertex or edge are not (very) exceptional,
/// each only where its hypotheses hold.
pub fn winners_audit(
    g: &EmbeddedGraph,
    res: &ReductionResult,
    sub: &ReducedSubgraph,
    w: &WeightFunction,
) -> Result<AuditReport, ExpansionError> {
    check_subgraph(res, sub)?;
    let g2 = &sub.graph;
    let mut rep = AuditReport::default();
    let strong = res.appearance.strong;
    let wb = is_well_behaved(g).holds();
    let inv = |is: &[Invariant]| is.iter().all(|&i| check_invariant(g, i).holds());
    let carries: Vec<VertexId> = res
        .new_vertex
        .and_then(|v| sub.local(v))
        .filter(|&v| g2.degree(v) > 0)
        .into_iter()
        .chain(res.new_edge.and_then(|(a, b)| {
            let (x, y) = (sub.local(a)?, sub.local(b)?);
            g2.adjacent(x, y).then_some(x)
        }))
        .collect();
    let classes: Vec<FaceClass> = g2.internal_faces().map(|f| classify_face(g2, f)).collect();
    let all_closed = classes.iter().all(|&c| c == FaceClass::Closed2Cell);
    let all_closed_or_omni = classes.iter().all(|&c| matches!(c, FaceClass::Closed2Cell | FaceClass::Omnipresent));
    let disk = g.rings().len() == 1 && g.rings()[0].is_facial();

    let winners_hyp = strong
        && wb
        && inv(&[Invariant::I0, Invariant::I1, Invariant::I2, Invariant::I3, Invariant::I4, Invariant::I8])
        && check_invariant(g2, Invariant::I6).holds()
        && !carries.is_empty();
    if winners_hyp && all_closed_or_omni {
        let c = total_contribution(g, res, sub, w)?;
        rep.push("contribution-nonnegative", "graph", Some(c >= Ext::zero()), c.to_string());
        if all_closed {
            let longest = g2.internal_faces().map(|f| g2.face_length(f)).max().unwrap_or(0);
            rep.push("face-of-length-six", "graph", Some(longest >= 6), format!("{longest}"));
            if disk {
                let bound = w.s(5).expect("s(5)") * 10;
                rep.push("contribution-disk", "graph", Some(c >= Ext::Finite(bound)), c.to_string());
            }
        }
    } else {
        rep.push("contribution-nonnegative", "graph", None, "hypotheses fail");
    }

    let rednt_hyp = strong && wb && inv(&[Invariant::I0, Invariant::I4, Invariant::I8]) && !carries.is_empty();
    let omni: Option<FaceId> = g2.internal_faces().find(|&f| classify_face(g2, f) == FaceClass::Omnipresent);
    let strict = matches!(
        res.config(),
        ConfigId::R6
            | ConfigId::R6p
            | ConfigId::R7
            | ConfigId::R7p
            | ConfigId::R7pp
            | ConfigId::R7ppp
            | ConfigId::R7pppp
    );
    let mut done: BTreeSet<usize> = BTreeSet::new();
    for &v in &carries {
        let comp = g2.component_of(v);
        if !done.insert(comp) {
            continue;
        }
        let ring: Option<Vec<VertexId>> = if !rednt_hyp {
            None
        } else if disk && all_closed {
            Some(g2.rings()[0].vertices.clone())
        } else if let Some(f) = omni {
            g2.face_walks(f).into_iter().find(|wk| wk.len() > 2 && wk.iter().all(|&x| g2.component_of(x) == comp))
        } else {
            None
        };
        let object = format!("component of {v}");
        match ring.as_deref().and_then(|r| component_with_ring(g2, v, r)) {
            Some(h) => {
                let e = classify_exceptional(&h).map_err(|_| ExpansionError::UnclassifiedFace(0))?;
                rep.push("not-very-exceptional", object.clone(), Some(!e.very_exceptional()), format!("{e:?}"));
                if strict {
                    rep.push("not-exceptional", object, Some(!e.is_exceptional()), format!("{e:?}"));
                }
            }
            None => rep.push("not-very-exceptional", object, None, "hypotheses fail"),
        }
    }
    rep.into_result()
}

/// Every internal host face lies inside exactly one member of exactly one
/// expansion, except the six-face of R3, which may be missed.
pub fn face_cover_audit(
    g: &EmbeddedGraph,
    res: &ReductionResult,
    g2: &ReducedSubgraph,
) -> Result<AuditReport, ExpansionError> {
    let recs = expansion_records(g, res, g2)?;
    let mut count: BTreeMap<FaceId, usize> = BTreeMap::new();
    for r in &recs {
        for m in &r.members {
            for &f in &m.host_faces {
                *count.entry(f).or_default() += 1;
            }
        }
    }
    let six_face = (res.config() == ConfigId::R3).then(|| res.appearance.faces[0]);
    let mut rep = AuditReport::default();
    for f in g.internal_faces() {
        let k = count.get(&f).copied().unwrap_or(0);
        let ok = if Some(f) == six_face { k <= 1 } else { k == 1 };
        rep.push("face-cover", format!("face {f}"), Some(ok), format!("{k}"));
    }
    rep.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{canonical_host, config, find_appearances_of, Appearance, Strength};
    use crate::reducer::reduce;
    use crate::weights::q;

    fn reduced(id: ConfigId) -> (EmbeddedGraph, ReductionResult) {
        let c = config(id);
        let g = canonical_host(c);
        let a: Appearance = find_appearances_of(&g, c, Strength::Strong)
            .into_iter()
            .find(|a| a.map.iter().enumerate().all(|(i, &v)| v == i) || c.automorphisms.contains(&a.map))
            .unwrap();
        let res = reduce(&g, &a, None).unwrap();
        (g, res)
    }

    #[test]
    fn every_host_expansion_satisfies_the_audits() {
        let mut audited = Vec::new();
        for c in crate::catalog::catalog() {
            let (g, res) = reduced(c.id);
            let g2 = ReducedSubgraph::core(&res);
            if g2.graph.internal_faces().any(|f| classify_face(&g2.graph, f) != FaceClass::Closed2Cell) {
                continue;
            }
            audited.push(c.id);
            let recs = expansion_records(&g, &res, &g2).unwrap_or_else(|e| panic!("{}: {e}", c.id));
            for r in &recs {
                if r.elasticity > 0 {
                    assert!(r.uses_replacement_path, "{}", c.id);
                }
            }
            elasticity_audit(&g, &res, &g2).unwrap_or_else(|e| panic!("{}: {e}", c.id));
            face_cover_audit(&g, &res, &g2).unwrap_or_else(|e| panic!("{}: {e}", c.id));
        }
        println!("audited {audited:?}");
        assert!(audited.len() >= 6, "{audited:?}");
    }

    #[test]
    fn untouched_face_pulls_back_to_itself() {
        let mut seen = 0;
        for id in [ConfigId::R1, ConfigId::R2, ConfigId::R5, ConfigId::R6] {
            let (g, res) = reduced(id);
            let g2 = ReducedSubgraph::core(&res);
            for f in g2.graph.internal_faces() {
                let Ok(r) = build_expansion(&g, &res, &g2, f) else { continue };
                if r.uses_replacement_path {
                    continue;
                }
                seen += 1;
                assert_eq!(r.elasticity, 0);
                assert_eq!(r.s_faces.len(), 1);
                assert_eq!(r.s_lengths[0], g2.graph.face_length(f));
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn new_edge_face_stretches() {
        let (g, res) = reduced(ConfigId::R1);
        let g2 = ReducedSubgraph::whole(&res);
        let recs = expansion_records(&g, &res, &g2).unwrap();
        let stretched: Vec<_> = recs.iter().filter(|r| r.elasticity > 0).collect();
        assert!(!stretched.is_empty());
        let path = &res.replacement_paths_used[0];
        for r in stretched {
            for e in path.windows(2) {
                assert!(r.j_edges.contains(&g.edge_id(e[0], e[1]).unwrap()));
            }
        }
    }

    #[test]
    fn contribution_cases() {
        let w = WeightFunction::standard();
        let mut rec = ExpansionRecord {
            face: 0,
            face_length: 5,
            walks: vec![],
            j_vertices: BTreeSet::new(),
            j_edges: BTreeSet::new(),
            s_faces: vec![],
            s_lengths: vec![5],
            members: vec![],
            elasticity: 0,
            uses_replacement_path: false,
            kind: Some(FaceKind::Closed2Cell {
                classes: vec![Exceptional::E0],
                split_path: false,
                two_cycles_one_five: false,
            }),
        };
        assert_eq!(contribution(&rec, &w).unwrap(), Ext::zero());
        rec.kind = Some(FaceKind::Closed2Cell {
            classes: vec![Exceptional::E1],
            split_path: false,
            two_cycles_one_five: false,
        });
        rec.elasticity = 5;
        assert_eq!(contribution(&rec, &w).unwrap(), Ext::NegInf);
        rec.kind = Some(FaceKind::Closed2Cell {
            classes: vec![Exceptional::None],
            split_path: false,
            two_cycles_one_five: false,
        });
        rec.elasticity = 0;
        // oracle: s(11) = 3, s(6) = 72/4113, s(5) = 4/4113
        let expect = Q::from_integer(3) - q(72, 4113) + q(4, 4113) * 5;
        assert_eq!(contribution(&rec, &w).unwrap(), Ext::Finite(expect));
        assert_eq!(expect, Q::from_integer(3) - q(52, 4113));
        rec.kind = None;
        assert!(matches!(contribution(&rec, &w), Err(ExpansionError::UnclassifiedFace(0))));
    }

    #[test]
    fn r3_correction_is_s6() {
        let (g, res) = reduced(ConfigId::R3);
        let w = WeightFunction::standard();
        assert_eq!(delta(&res, &w), q(72, 4113));
        let _ = total_contribution(&g, &res, &ReducedSubgraph::whole(&res), &w);
    }
}
