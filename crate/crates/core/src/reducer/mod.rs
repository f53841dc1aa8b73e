//! Reducing a configuration: delete its dominated vertices, add the edge
//! between its two attachment vertices and identify its identification set,
//! all drawn inside the marked faces.
//!
//! The identified vertex gets the concatenation of the members' rotations,
//! each cut open at the corner where the replacement path leaves it. The new
//! edge takes the place of the first deleted dart of its path at both ends.
//! Parallel edges keep the one coming from the lowest edge id of the host.

mod expansion;
mod short_cycles;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::catalog::{verify, Appearance, ConfigId, Strength};
use crate::colorer::Coloring;
use crate::graph::{BuildError, EdgeId, EmbeddedGraph, RingDecl, VertexId};

pub use expansion::{
    build_expansion, contribution, elasticity_audit, expansion_records, face_cover_audit, total_contribution,
    winners_audit, AuditLine, AuditReport, ExpansionError, ExpansionMember, ExpansionRecord, FaceKind, OmniShape,
    ReducedSubgraph,
};
pub use short_cycles::{lift_cycle, verify_short_cycle_lemma, ShortCycleOutcome, ShortCycleReport};

/// How R4 was reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum R4Mode {
    /// `x4` and `x5` (host ids) identified as if they formed the identification set.
    Identify(VertexId, VertexId),
    /// Both on rings with equal colours: only the new edge is added.
    PhiEqual,
    /// Both on rings with different colours: `v2` is identified with `x5`.
    PhiDifferent,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("the appearance is only {0}, a weak appearance is needed")]
    StrengthTooLow(Strength),
    #[error("R4 with both x4 and x5 on rings needs their colours")]
    MissingPrecoloring,
    #[error("reduction would create a loop at vertex {0}")]
    LoopCreated(VertexId),
    #[error("reduced drawing is inconsistent: {0}")]
    Embedding(#[from] BuildError),
}

/// The reduced graph with its bookkeeping. Vertex ids of `graph` are
/// compacted; `new_of_old` and `old_of_new` translate.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub graph: EmbeddedGraph,
    pub appearance: Appearance,
    pub deleted: BTreeSet<VertexId>,
    pub new_of_old: Vec<Option<VertexId>>,
    /// Host vertex kept under each reduced id; the new vertex keeps its representative.
    pub old_of_new: Vec<VertexId>,
    /// Host edge each reduced edge stands for; `None` for the new edge.
    pub edge_origin: Vec<Option<EdgeId>>,
    /// All host edges that collapsed onto each reduced edge.
    pub bunches: Vec<Vec<EdgeId>>,
    /// Endpoints of the host edges, indexed by host edge id.
    pub host_edges: Vec<(VertexId, VertexId)>,
    pub new_vertex: Option<VertexId>,
    /// Host vertices merged into the new vertex.
    pub identified: Vec<VertexId>,
    pub new_edge: Option<(VertexId, VertexId)>,
    pub squashed_edges: BTreeSet<(VertexId, VertexId)>,
    /// Host vertex sequences of every replacement path used.
    pub replacement_paths_used: Vec<Vec<VertexId>>,
    pub r4_mode: Option<R4Mode>,
}

impl ReductionResult {
    pub fn config(&self) -> ConfigId {
        self.appearance.config
    }

    pub fn is_new_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.new_edge.is_some_and(|(a, b)| (a, b) == (u.min(v), u.max(v)))
    }

    pub fn is_squashed(&self, u: VertexId, v: VertexId) -> bool {
        self.squashed_edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn is_new_vertex(&self, v: VertexId) -> bool {
        self.new_vertex == Some(v)
    }

    /// Host edge behind the reduced edge `uv`.
    pub fn origin(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.graph.edge_id(u, v).and_then(|e| self.edge_origin[e])
    }

    pub fn bunch(&self, u: VertexId, v: VertexId) -> &[EdgeId] {
        self.graph.edge_id(u, v).map_or(&[], |e| &self.bunches[e])
    }

    /// Replacement path between two host vertices, oriented from `u`.
    pub fn replacement_path(&self, u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
        self.replacement_paths_used.iter().find_map(|p| {
            let (a, b) = (p[0], p[p.len() - 1]);
            if (a, b) == (u, v) {
                Some(p.clone())
            } else if (a, b) == (v, u) {
                Some(p.iter().rev().copied().collect())
            } else {
                None
            }
        })
    }
}

/// One rotation entry during the surgery: neighbour and the host edge it
/// comes from (`None` for the new edge).
type Entry = (VertexId, Option<EdgeId>);

fn keep_rank(e: &Entry) -> usize {
    e.1.unwrap_or(usize::MAX)
}

/// Reduces `a` in `g`. `phi` is consulted only for R4 with `x4` and `x5` both
/// on rings.
pub fn reduce(g: &EmbeddedGraph, a: &Appearance, phi: Option<&Coloring>) -> Result<ReductionResult, ReduceError> {
    if verify(g, a, Strength::Weak).is_err() {
        return Err(ReduceError::StrengthTooLow(a.strength()));
    }
    let c = a.configuration();
    let host = |p: &[VertexId]| -> Vec<VertexId> { p.iter().map(|&v| a.map[v]).collect() };
    let a_path = || (c.a_set.len() == 2).then(|| c.path_between(c.a_set[0], c.a_set[1]).expect("path table"));
    let mut r4_mode = None;
    // catalogue-level plan: attachment path and identification members
    let (add_path, members): (Option<Vec<VertexId>>, Vec<VertexId>) = if c.id == ConfigId::R4 {
        let (x4, x5) = (c.v("x4"), c.v("x5"));
        let both_on_rings = g.is_ring_vertex(a.map[x4]) && g.is_ring_vertex(a.map[x5]);
        if !both_on_rings {
            r4_mode = Some(R4Mode::Identify(a.map[x4], a.map[x5]));
            (a_path(), vec![x4, x5])
        } else {
            let phi = phi.ok_or(ReduceError::MissingPrecoloring)?;
            let (p4, p5) = (phi.get(a.map[x4]), phi.get(a.map[x5]));
            if p4.is_none() || p5.is_none() {
                return Err(ReduceError::MissingPrecoloring);
            }
            if p4 == p5 {
                r4_mode = Some(R4Mode::PhiEqual);
                (a_path(), Vec::new())
            } else {
                r4_mode = Some(R4Mode::PhiDifferent);
                (None, vec![c.v("v2"), x5])
            }
        }
    } else {
        (a_path(), c.i_set.clone())
    };
    let deleted: BTreeSet<VertexId> = c.dom().map(|v| a.map[v]).collect();
    let mut used = Vec::new();
    if let Some(p) = &add_path {
        used.push(host(p));
    }
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            used.push(host(&c.path_between(u, v).expect("identification path")));
        }
    }

    let n = g.n();
    let mut rot: Vec<Vec<Entry>> =
        (0..n).map(|v| g.rotation(v).iter().map(|&u| (u, g.edge_id(u, v))).collect()).collect();

    // the new edge replaces the first deleted dart of its path at both ends
    let mut new_edge_host = None;
    if let Some(p) = &add_path {
        let hp = host(p);
        let (x, y) = (hp[0], hp[hp.len() - 1]);
        let (px, py) = (hp[1], hp[hp.len() - 2]);
        debug_assert!(deleted.contains(&px) && deleted.contains(&py));
        if x == y {
            return Err(ReduceError::LoopCreated(x));
        }
        for (end, inner, other) in [(x, px, y), (y, py, x)] {
            let slot = rot[end].iter_mut().find(|e| e.0 == inner).expect("path edge");
            *slot = (other, None);
        }
        new_edge_host = Some((x, y));
    }

    // identification: each member is cut where its replacement path leaves
    let mut hosts_of_members: Vec<VertexId> = members.iter().map(|&m| a.map[m]).collect();
    let mut order: Vec<usize> = (0..members.len()).collect();
    if members.len() > 2 {
        // all members lie on the first marked face; the star contracted
        // inside it meets them against the direction of its boundary walk
        let walk = g.face_cycle(a.faces[0]);
        order.sort_by_key(|&i| std::cmp::Reverse(walk.iter().position(|&v| v == hosts_of_members[i])));
    }
    let mut rep = None;
    let mut identified = Vec::new();
    if !members.is_empty() {
        let distinct: BTreeSet<VertexId> = hosts_of_members.iter().copied().collect();
        if distinct.len() != hosts_of_members.len() {
            return Err(ReduceError::LoopCreated(hosts_of_members[0]));
        }
        let mut merged: Vec<Entry> = Vec::new();
        for &i in &order {
            let m = members[i];
            let other = members.iter().copied().find(|&o| o != m).expect("two members");
            let path = c.path_between(m, other).expect("identification path");
            let start = cut_start(g, a, c, &path);
            let hm = a.map[m];
            let k = rot[hm].len();
            for j in 0..k {
                let e = rot[hm][(start + j) % k];
                if distinct.contains(&e.0) {
                    return Err(ReduceError::LoopCreated(hm));
                }
                if !deleted.contains(&e.0) {
                    merged.push(e);
                }
            }
        }
        let r = hosts_of_members
            .iter()
            .copied()
            .find(|&v| g.is_ring_vertex(v))
            .unwrap_or_else(|| *distinct.iter().next().expect("members"));
        for &v in &distinct {
            rot[v].clear();
        }
        rot[r] = merged;
        for entries in rot.iter_mut() {
            for e in entries.iter_mut() {
                if distinct.contains(&e.0) {
                    e.0 = r;
                }
            }
        }
        rep = Some(r);
        hosts_of_members.sort_unstable();
        identified = hosts_of_members;
    }

    // survivors and their new ids
    let gone = |v: VertexId| deleted.contains(&v) || (identified.contains(&v) && Some(v) != rep);
    let old_of_new: Vec<VertexId> = (0..n).filter(|&v| !gone(v)).collect();
    let mut new_of_old: Vec<Option<VertexId>> = vec![None; n];
    for (i, &v) in old_of_new.iter().enumerate() {
        new_of_old[v] = Some(i);
    }
    if let Some(r) = rep {
        for &v in &identified {
            new_of_old[v] = new_of_old[r];
        }
    }

    // drop deleted neighbours, detect loops, collect bunches
    let mut bunch_map: BTreeMap<(VertexId, VertexId), Vec<Entry>> = BTreeMap::new();
    for &v in &old_of_new {
        rot[v].retain(|e| !deleted.contains(&e.0));
        for e in &rot[v] {
            if e.0 == v {
                return Err(ReduceError::LoopCreated(v));
            }
            if v < e.0 {
                bunch_map.entry((v, e.0)).or_default().push(*e);
            }
        }
    }
    let kept: HashMap<(VertexId, VertexId), Entry> = bunch_map
        .iter()
        .map(|(&k, es)| (k, *es.iter().min_by_key(|e| keep_rank(e)).expect("non-empty bunch")))
        .collect();
    let rotation: Vec<Vec<VertexId>> = old_of_new
        .iter()
        .map(|&v| {
            rot[v]
                .iter()
                .filter(|e| kept[&(v.min(e.0), v.max(e.0))].1 == e.1)
                .map(|e| new_of_old[e.0].expect("survivor"))
                .collect()
        })
        .collect();
    let rings = remap_rings(g, &new_of_old, &deleted);
    let graph = EmbeddedGraph::build(rotation, rings)?;

    let mut edge_origin = vec![None; graph.num_edges()];
    let mut bunches = vec![Vec::new(); graph.num_edges()];
    for (&(u, v), es) in &bunch_map {
        let (nu, nv) = (new_of_old[u].expect("survivor"), new_of_old[v].expect("survivor"));
        let e = graph.edge_id(nu, nv).expect("kept edge");
        edge_origin[e] = kept[&(u, v)].1;
        let mut b: Vec<EdgeId> = es.iter().filter_map(|e| e.1).collect();
        b.sort_unstable();
        bunches[e] = b;
    }
    let new_vertex = rep.and_then(|r| new_of_old[r]);
    let new_edge = new_edge_host.and_then(|(x, y)| {
        let (nx, ny) = (new_of_old[x]?, new_of_old[y]?);
        let e = graph.edge_id(nx, ny)?;
        edge_origin[e].is_none().then_some((nx.min(ny), nx.max(ny)))
    });
    // squashed: the new vertex towards a common neighbour that belongs to the configuration
    let mut squashed_edges = BTreeSet::new();
    if let Some(w) = new_vertex {
        let non_dom: BTreeSet<VertexId> = (0..c.n()).filter(|&v| !c.in_dom(v)).map(|v| a.map[v]).collect();
        for &x in graph.neighbors(w) {
            let hx = old_of_new[x];
            let touching = identified.iter().filter(|&&m| g.adjacent(m, hx)).count();
            if touching >= 2 && non_dom.contains(&hx) {
                squashed_edges.insert((w.min(x), w.max(x)));
            }
        }
    }
    Ok(ReductionResult {
        graph,
        appearance: a.clone(),
        deleted,
        new_of_old,
        old_of_new,
        edge_origin,
        bunches,
        host_edges: g.edges().to_vec(),
        new_vertex,
        identified,
        new_edge,
        squashed_edges,
        replacement_paths_used: used,
        r4_mode,
    })
}

/// Index in the member's rotation where its piece of the merged rotation
/// starts: right after the dart into a deleted path vertex, or, when the path
/// runs through a kept vertex, at the corner of the marked face it is pushed into.
fn cut_start(g: &EmbeddedGraph, a: &Appearance, c: &crate::catalog::Configuration, path: &[VertexId]) -> usize {
    let (m, p1) = (path[0], path[1]);
    let (hm, hp) = (a.map[m], a.map[p1]);
    let rot = g.rotation(hm);
    let pos = |x: VertexId| rot.iter().position(|&u| u == x).expect("rotation entry");
    if c.in_dom(p1) {
        return (pos(hp) + 1) % rot.len();
    }
    let k = c
        .faces
        .iter()
        .position(|f| {
            let l = f.len();
            (0..l).any(|i| (f[i] == m && f[(i + 1) % l] == p1) || (f[i] == p1 && f[(i + 1) % l] == m))
        })
        .expect("path edge on a marked face");
    let walk = g.face_cycle(a.faces[k]);
    let l = walk.len();
    for i in 0..l {
        if walk[i] != hm {
            continue;
        }
        let (prev, next) = (walk[(i + l - 1) % l], walk[(i + 1) % l]);
        if next == hp {
            return pos(hp);
        }
        if prev == hp {
            return pos(next);
        }
    }
    unreachable!("marked face misses the path edge")
}

/// Rings carried over; a vertex ring whose cuff neighbour disappears takes the
/// next surviving neighbour, which sees the same merged face.
fn remap_rings(g: &EmbeddedGraph, new_of_old: &[Option<VertexId>], deleted: &BTreeSet<VertexId>) -> Vec<RingDecl> {
    g.ring_decls()
        .iter()
        .filter_map(|d| match d {
            RingDecl::Facial(vs) => vs.iter().map(|&v| new_of_old[v]).collect::<Option<Vec<_>>>().map(RingDecl::Facial),
            RingDecl::Vertex { vertex, weak, cuff } => {
                let v = new_of_old[*vertex]?;
                let rot = g.rotation(*vertex);
                let cuff = cuff.or_else(|| rot.first().copied()).and_then(|u| {
                    let i = rot.iter().position(|&x| x == u)?;
                    (0..rot.len()).map(|j| rot[(i + j) % rot.len()]).find(|x| !deleted.contains(x))
                });
                Some(RingDecl::Vertex { vertex: v, weak: *weak, cuff: cuff.and_then(|u| new_of_old[u]) })
            }
        })
        .collect()
}
