//! Combinatorial embeddings in the sphere with cuffs.
//!
//! A graph is given by a rotation system (neighbours of every vertex in
//! counter-clockwise order). Darts are numbered vertex by vertex in rotation
//! order, and the face to the left of dart `d` is traced by repeatedly taking
//! `next_in_rotation(twin(d))`. Each face is named by its smallest dart, which
//! keeps every downstream report deterministic.
//!
//! When the graph has several components they all sit in one common face,
//! chosen per component as its longest non-ring face (or given explicitly).

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

pub type VertexId = usize;
pub type DartId = usize;
pub type FaceId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dart {
    pub origin: VertexId,
    pub head: VertexId,
    pub twin: DartId,
    pub next_in_rotation: DartId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    Facial,
    Vertex,
    WeakVertex,
}

/// A ring together with the face it is attached to: the patched cuff for a
/// facial ring, the cuff face for a vertex ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    pub kind: RingKind,
    pub vertices: Vec<VertexId>,
    pub face: FaceId,
}

impl Ring {
    /// `|R|`: cycle length, 1 for a vertex ring and 0 for a weak one.
    pub fn len(&self) -> usize {
        match self.kind {
            RingKind::Facial => self.vertices.len(),
            RingKind::Vertex => 1,
            RingKind::WeakVertex => 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_facial(&self) -> bool {
        self.kind == RingKind::Facial
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingDecl {
    /// Cycle listed in the order its ring face walks it (either direction is
    /// accepted when only one of them is a face).
    Facial(Vec<VertexId>),
    /// `cuff` names a neighbour; the cuff face is the face left of the dart
    /// towards it. Defaults to the first dart of the vertex.
    Vertex { vertex: VertexId, weak: bool, cuff: Option<VertexId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryWalk {
    Darts(Vec<DartId>),
    Isolated(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub walks: Vec<BoundaryWalk>,
    /// Sum of walk lengths; an isolated vertex ring contributes `|R|`.
    pub length: usize,
    /// Index of the facial ring whose cuff this face is.
    pub ring: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("rotation is not symmetric at edge {0}-{1}")]
    NonSymmetricRotation(VertexId, VertexId),
    #[error("loop or parallel edge at vertex {0}")]
    ParallelEdgeOrLoop(VertexId),
    #[error("vertex {0} out of range")]
    UnknownVertex(VertexId),
    #[error("embedding of the component containing {vertex} has Euler characteristic {chi}, not 2")]
    GenusNonZero { vertex: VertexId, chi: i64 },
    #[error("ring {0:?} is not a cycle of the graph")]
    RingNotCycle(Vec<VertexId>),
    #[error("ring {0:?} does not bound a face")]
    RingNotFacial(Vec<VertexId>),
    #[error("rings share vertex {0}")]
    RingsOverlap(VertexId),
    #[error("two rings use face {0}")]
    RingFaceShared(FaceId),
    #[error("outer face choice {0}->{1} is not a dart")]
    BadOuter(VertexId, VertexId),
}

/// Canonical cycle: starts at its minimum vertex, second vertex smaller than the last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle(Vec<VertexId>);

impl Cycle {
    pub fn new(mut vs: Vec<VertexId>) -> Self {
        if vs.is_empty() {
            return Cycle(vs);
        }
        let pos = vs.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i).unwrap_or(0);
        vs.rotate_left(pos);
        if vs.len() > 2 && vs[1] > vs[vs.len() - 1] {
            vs[1..].reverse();
        }
        Cycle(vs)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }
}

/// Topological class of a cycle relative to the cuffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuffClass {
    Contractible,
    SurroundsCuff(usize),
    Separating,
}

/// The two sides of a cycle, as sets of faces and of vertices strictly inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSides {
    pub left_faces: BTreeSet<FaceId>,
    pub right_faces: BTreeSet<FaceId>,
    pub left_vertices: BTreeSet<VertexId>,
    pub right_vertices: BTreeSet<VertexId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiskError {
    #[error("cycle is not a cycle of the graph")]
    NotACycle,
    #[error("cycle does not bound a disk avoiding the cuffs")]
    NotContractible,
    #[error("a ring vertex lies strictly inside the disk")]
    RingInsideDisk,
}

#[derive(Debug, Clone)]
pub struct EmbeddedGraph {
    rotation: Vec<Vec<VertexId>>,
    ring_decls: Vec<RingDecl>,
    outer: Vec<(VertexId, VertexId)>,
    first_dart: Vec<DartId>,
    darts: Vec<Dart>,
    dart_index: HashMap<(VertexId, VertexId), DartId>,
    dart_face: Vec<FaceId>,
    faces: Vec<Face>,
    isolated_face: HashMap<VertexId, FaceId>,
    rings: Vec<Ring>,
    ring_of: Vec<Option<usize>>,
    edges: Vec<(VertexId, VertexId)>,
    edge_index: HashMap<(VertexId, VertexId), EdgeId>,
    component: Vec<usize>,
    n_components: usize,
}

impl PartialEq for EmbeddedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.rotation == other.rotation && self.rings == other.rings && self.faces == other.faces
    }
}

impl EmbeddedGraph {
    pub fn build(rotation: Vec<Vec<VertexId>>, rings: Vec<RingDecl>) -> Result<Self, BuildError> {
        Self::build_with_outer(rotation, rings, Vec::new())
    }

    /// `outer` lists darts whose left face is the face shared with the other
    /// components, at most one per component.
    pub fn build_with_outer(
        rotation: Vec<Vec<VertexId>>,
        ring_decls: Vec<RingDecl>,
        outer: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, BuildError> {
        let n = rotation.len();
        let mut first_dart = Vec::with_capacity(n + 1);
        let mut darts = Vec::new();
        let mut dart_index = HashMap::new();
        for (v, nbrs) in rotation.iter().enumerate() {
            first_dart.push(darts.len());
            let mut seen = BTreeSet::new();
            for &u in nbrs {
                if u >= n {
                    return Err(BuildError::UnknownVertex(u));
                }
                if u == v || !seen.insert(u) {
                    return Err(BuildError::ParallelEdgeOrLoop(v));
                }
                dart_index.insert((v, u), darts.len());
                darts.push(Dart { origin: v, head: u, twin: usize::MAX, next_in_rotation: 0 });
            }
        }
        first_dart.push(darts.len());
        for v in 0..n {
            let (a, b) = (first_dart[v], first_dart[v + 1]);
            for d in a..b {
                darts[d].next_in_rotation = if d + 1 == b { a } else { d + 1 };
                let u = darts[d].head;
                match dart_index.get(&(u, v)) {
                    Some(&t) => darts[d].twin = t,
                    None => return Err(BuildError::NonSymmetricRotation(v, u)),
                }
            }
        }
        first_dart.pop();

        let mut edges = Vec::new();
        for v in 0..n {
            for &u in &rotation[v] {
                if v < u {
                    edges.push((v, u));
                }
            }
        }
        edges.sort_unstable();
        let edge_index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        // components
        let mut component = vec![usize::MAX; n];
        let mut n_components = 0;
        for s in 0..n {
            if component[s] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([s]);
            component[s] = n_components;
            while let Some(v) = queue.pop_front() {
                for &u in &rotation[v] {
                    if component[u] == usize::MAX {
                        component[u] = n_components;
                        queue.push_back(u);
                    }
                }
            }
            n_components += 1;
        }

        // trace dart orbits
        let mut orbit_of = vec![usize::MAX; darts.len()];
        let mut orbits: Vec<Vec<DartId>> = Vec::new();
        for d0 in 0..darts.len() {
            if orbit_of[d0] != usize::MAX {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = d0;
            loop {
                orbit_of[d] = orbits.len();
                walk.push(d);
                d = darts[darts[d].twin].next_in_rotation;
                if d == d0 {
                    break;
                }
            }
            orbits.push(walk);
        }

        // Euler check per component
        let mut vcount = vec![0i64; n_components];
        let mut ecount = vec![0i64; n_components];
        let mut fcount = vec![0i64; n_components];
        for v in 0..n {
            vcount[component[v]] += 1;
            if rotation[v].is_empty() {
                fcount[component[v]] += 1;
            }
        }
        for &(u, _) in &edges {
            ecount[component[u]] += 1;
        }
        for o in &orbits {
            fcount[component[darts[o[0]].origin]] += 1;
        }
        for c in 0..n_components {
            let chi = vcount[c] - ecount[c] + fcount[c];
            if chi != 2 {
                let vertex = (0..n).find(|&v| component[v] == c).unwrap_or(0);
                return Err(BuildError::GenusNonZero { vertex, chi });
            }
        }

        // facial rings on orbits
        let mut ring_orbit: Vec<Option<usize>> = vec![None; ring_decls.len()];
        let mut ring_vertices: Vec<Vec<VertexId>> = Vec::new();
        for (i, decl) in ring_decls.iter().enumerate() {
            match decl {
                RingDecl::Facial(vs) => {
                    let k = vs.len();
                    let distinct: BTreeSet<_> = vs.iter().collect();
                    if k < 3 || distinct.len() != k || vs.iter().any(|&v| v >= n) {
                        return Err(BuildError::RingNotCycle(vs.clone()));
                    }
                    for j in 0..k {
                        if !dart_index.contains_key(&(vs[j], vs[(j + 1) % k])) {
                            return Err(BuildError::RingNotCycle(vs.clone()));
                        }
                    }
                    let matches = |seq: &[VertexId]| -> Option<usize> {
                        let d = dart_index[&(seq[0], seq[1])];
                        let o = &orbits[orbit_of[d]];
                        if o.len() != k {
                            return None;
                        }
                        let start = o.iter().position(|&x| x == d)?;
                        (0..k).all(|j| darts[o[(start + j) % k]].origin == seq[j]).then_some(orbit_of[d])
                    };
                    let mut rev = vs.clone();
                    rev[1..].reverse();
                    let o = matches(vs).or_else(|| matches(&rev));
                    match o {
                        Some(o) => ring_orbit[i] = Some(o),
                        None => return Err(BuildError::RingNotFacial(vs.clone())),
                    }
                    ring_vertices.push(vs.clone());
                }
                RingDecl::Vertex { vertex, .. } => {
                    if *vertex >= n {
                        return Err(BuildError::UnknownVertex(*vertex));
                    }
                    ring_vertices.push(vec![*vertex]);
                }
            }
        }
        let mut ring_of = vec![None; n];
        for (i, vs) in ring_vertices.iter().enumerate() {
            for &v in vs {
                if ring_of[v].is_some() {
                    return Err(BuildError::RingsOverlap(v));
                }
                ring_of[v] = Some(i);
            }
        }

        // shared face per component
        let mut shared_orbit: Vec<Option<usize>> = vec![None; n_components];
        for &(u, v) in &outer {
            let d = *dart_index.get(&(u, v)).ok_or(BuildError::BadOuter(u, v))?;
            shared_orbit[component[u]] = Some(orbit_of[d]);
        }
        if n_components > 1 {
            for (oi, o) in orbits.iter().enumerate() {
                let c = component[darts[o[0]].origin];
                if ring_orbit.contains(&Some(oi)) {
                    continue;
                }
                let better = match shared_orbit[c] {
                    None => true,
                    Some(cur) => {
                        if outer.iter().any(|&(u, _)| component[u] == c) {
                            false
                        } else {
                            o.len() > orbits[cur].len()
                        }
                    }
                };
                if better {
                    shared_orbit[c] = Some(oi);
                }
            }
        }

        // assemble faces: (min dart or MAX, walks)
        let mut raw: Vec<(usize, Vec<BoundaryWalk>, Vec<usize>)> = Vec::new();
        let mut merged_walks: Vec<BoundaryWalk> = Vec::new();
        let mut merged_orbits: Vec<usize> = Vec::new();
        for (oi, o) in orbits.iter().enumerate() {
            let c = component[darts[o[0]].origin];
            let mut w = o.clone();
            let pos = w.iter().enumerate().min_by_key(|(_, d)| **d).map(|(i, _)| i).unwrap_or(0);
            w.rotate_left(pos);
            if n_components > 1 && shared_orbit[c] == Some(oi) {
                merged_walks.push(BoundaryWalk::Darts(w));
                merged_orbits.push(oi);
            } else {
                raw.push((w[0], vec![BoundaryWalk::Darts(w)], vec![oi]));
            }
        }
        let mut isolated: Vec<VertexId> = (0..n).filter(|&v| rotation[v].is_empty()).collect();
        if n_components > 1 {
            for &v in &isolated {
                merged_walks.push(BoundaryWalk::Isolated(v));
            }
            isolated.clear();
            let key = |w: &BoundaryWalk| match w {
                BoundaryWalk::Darts(ds) => (0, ds[0]),
                BoundaryWalk::Isolated(v) => (1, *v),
            };
            merged_walks.sort_by_key(key);
            let min = match &merged_walks[0] {
                BoundaryWalk::Darts(ds) => ds[0],
                BoundaryWalk::Isolated(_) => usize::MAX,
            };
            raw.push((min, merged_walks, merged_orbits));
        }
        raw.sort_by_key(|r| r.0);
        let mut faces = Vec::new();
        let mut dart_face = vec![usize::MAX; darts.len()];
        let mut orbit_face = vec![usize::MAX; orbits.len()];
        for (_, walks, os) in raw {
            let fid = faces.len();
            for o in os {
                orbit_face[o] = fid;
            }
            faces.push(Face { walks, length: 0, ring: None });
        }
        let mut isolated_face = HashMap::new();
        for v in isolated {
            isolated_face.insert(v, faces.len());
            faces.push(Face { walks: vec![BoundaryWalk::Isolated(v)], length: 0, ring: None });
        }
        if n_components > 1 {
            // the merged face is the one containing isolated walks, if any
            for (fid, f) in faces.iter().enumerate() {
                for w in &f.walks {
                    if let BoundaryWalk::Isolated(v) = w {
                        isolated_face.insert(*v, fid);
                    }
                }
            }
        }
        for d in 0..darts.len() {
            dart_face[d] = orbit_face[orbit_of[d]];
        }

        // rings with faces
        let mut rings = Vec::new();
        let mut used_faces = BTreeSet::new();
        for (i, decl) in ring_decls.iter().enumerate() {
            let ring = match decl {
                RingDecl::Facial(vs) => {
                    let f = orbit_face[ring_orbit[i].expect("facial ring orbit")];
                    faces[f].ring = Some(i);
                    Ring { kind: RingKind::Facial, vertices: vs.clone(), face: f }
                }
                RingDecl::Vertex { vertex, weak, cuff } => {
                    let v = *vertex;
                    let f = if rotation[v].is_empty() {
                        isolated_face[&v]
                    } else {
                        let u = cuff.unwrap_or(rotation[v][0]);
                        let d = *dart_index.get(&(v, u)).ok_or(BuildError::BadOuter(v, u))?;
                        dart_face[d]
                    };
                    let kind = if *weak { RingKind::WeakVertex } else { RingKind::Vertex };
                    Ring { kind, vertices: vec![v], face: f }
                }
            };
            if ring.kind == RingKind::Facial && !used_faces.insert(ring.face) {
                return Err(BuildError::RingFaceShared(ring.face));
            }
            rings.push(ring);
        }
        for f in &mut faces {
            let mut len = 0;
            for w in &f.walks {
                len += match w {
                    BoundaryWalk::Darts(ds) => ds.len(),
                    BoundaryWalk::Isolated(v) => ring_of[*v].map(|r| rings[r].len()).unwrap_or(0),
                };
            }
            f.length = len;
        }

        Ok(EmbeddedGraph {
            rotation,
            ring_decls,
            outer,
            first_dart,
            darts,
            dart_index,
            dart_face,
            faces,
            isolated_face,
            rings,
            ring_of,
            edges,
            edge_index,
            component,
            n_components,
        })
    }

    /// Builds a connected embedding from its face boundaries, each listed so
    /// that the face lies to the left (outer face clockwise).
    pub fn from_faces(n: usize, faces: &[Vec<VertexId>], rings: Vec<RingDecl>) -> Result<Self, BuildError> {
        let mut succ: HashMap<(VertexId, VertexId), VertexId> = HashMap::new();
        for f in faces {
            let k = f.len();
            for i in 0..k {
                let (a, b, c) = (f[i], f[(i + 1) % k], f[(i + 2) % k]);
                // at b: dart b->a is followed by b->c
                if succ.insert((b, a), c).is_some() {
                    return Err(BuildError::ParallelEdgeOrLoop(b));
                }
            }
        }
        let mut rotation = vec![Vec::new(); n];
        for (v, rot) in rotation.iter_mut().enumerate() {
            let mut nbrs: Vec<VertexId> = succ.keys().filter(|(x, _)| *x == v).map(|(_, y)| *y).collect();
            nbrs.sort_unstable();
            let Some(&start) = nbrs.first() else { continue };
            let mut cur = start;
            loop {
                rot.push(cur);
                cur = *succ.get(&(v, cur)).ok_or(BuildError::NonSymmetricRotation(v, cur))?;
                if cur == start {
                    break;
                }
                if rot.len() > nbrs.len() {
                    return Err(BuildError::NonSymmetricRotation(v, cur));
                }
            }
            if rot.len() != nbrs.len() {
                return Err(BuildError::GenusNonZero { vertex: v, chi: 0 });
            }
        }
        Self::build(rotation, rings)
    }

    // ----- basic accessors -----

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.rotation[v]
    }

    pub fn rotation_system(&self) -> &[Vec<VertexId>] {
        &self.rotation
    }

    pub fn ring_decls(&self) -> &[RingDecl] {
        &self.ring_decls
    }

    pub fn outer_choices(&self) -> &[(VertexId, VertexId)] {
        &self.outer
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.rotation[v]
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.dart_index.contains_key(&(u, v))
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn dart(&self, d: DartId) -> Dart {
        self.darts[d]
    }

    pub fn dart_between(&self, u: VertexId, v: VertexId) -> Option<DartId> {
        self.dart_index.get(&(u, v)).copied()
    }

    pub fn darts_from(&self, v: VertexId) -> std::ops::Range<DartId> {
        let a = self.first_dart[v];
        a..a + self.rotation[v].len()
    }

    /// Dart following `d` in the boundary walk of its left face.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.darts[self.darts[d].twin].next_in_rotation
    }

    pub fn face_of_dart(&self, d: DartId) -> FaceId {
        self.dart_face[d]
    }

    /// Left face of the dart `u -> v`.
    pub fn face_left_of(&self, u: VertexId, v: VertexId) -> Option<FaceId> {
        self.dart_between(u, v).map(|d| self.dart_face[d])
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f]
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_length(&self, f: FaceId) -> usize {
        self.faces[f].length
    }

    pub fn isolated_face(&self, v: VertexId) -> Option<FaceId> {
        self.isolated_face.get(&v).copied()
    }

    /// Vertex sequences of the boundary walks of `f`.
    pub fn face_walks(&self, f: FaceId) -> Vec<Vec<VertexId>> {
        self.faces[f]
            .walks
            .iter()
            .map(|w| match w {
                BoundaryWalk::Darts(ds) => ds.iter().map(|&d| self.darts[d].origin).collect(),
                BoundaryWalk::Isolated(v) => vec![*v],
            })
            .collect()
    }

    /// Vertex sequence of a face with a single boundary walk.
    pub fn face_cycle(&self, f: FaceId) -> Vec<VertexId> {
        self.face_walks(f).into_iter().flatten().collect()
    }

    pub fn face_vertex_set(&self, f: FaceId) -> BTreeSet<VertexId> {
        self.face_walks(f).into_iter().flatten().collect()
    }

    pub fn face_darts(&self, f: FaceId) -> Vec<DartId> {
        let mut out = Vec::new();
        for w in &self.faces[f].walks {
            if let BoundaryWalk::Darts(ds) = w {
                out.extend_from_slice(ds);
            }
        }
        out
    }

    /// Faces incident with `v`, with multiplicity (one per corner).
    pub fn faces_around(&self, v: VertexId) -> Vec<FaceId> {
        if self.rotation[v].is_empty() {
            return self.isolated_face(v).into_iter().collect();
        }
        self.darts_from(v).map(|d| self.dart_face[d]).collect()
    }

    /// The two faces incident with edge `uv`: left of `u->v`, left of `v->u`.
    pub fn edge_faces(&self, u: VertexId, v: VertexId) -> Option<(FaceId, FaceId)> {
        Some((self.face_left_of(u, v)?, self.face_left_of(v, u)?))
    }

    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn ring_of(&self, v: VertexId) -> Option<usize> {
        self.ring_of[v]
    }

    pub fn is_ring_vertex(&self, v: VertexId) -> bool {
        self.ring_of[v].is_some()
    }

    pub fn is_internal_vertex(&self, v: VertexId) -> bool {
        self.ring_of[v].is_none()
    }

    pub fn is_vertex_ring(&self, v: VertexId) -> bool {
        self.ring_of[v].map(|r| !self.rings[r].is_facial()).unwrap_or(false)
    }

    pub fn is_ring_face(&self, f: FaceId) -> bool {
        self.faces[f].ring.is_some()
    }

    pub fn internal_faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.faces.len()).filter(move |&f| self.faces[f].ring.is_none())
    }

    /// Cuff face of a vertex ring.
    pub fn is_cuff_face(&self, f: FaceId) -> bool {
        self.rings.iter().any(|r| !r.is_facial() && r.face == f)
    }

    pub fn ring_vertices(&self) -> BTreeSet<VertexId> {
        self.rings.iter().flat_map(|r| r.vertices.iter().copied()).collect()
    }

    pub fn is_ring_edge(&self, u: VertexId, v: VertexId) -> bool {
        match (self.ring_of[u], self.ring_of[v]) {
            (Some(a), Some(b)) if a == b && self.rings[a].is_facial() => {
                let vs = &self.rings[a].vertices;
                let k = vs.len();
                let i = vs.iter().position(|&x| x == u).unwrap_or(0);
                vs[(i + 1) % k] == v || vs[(i + k - 1) % k] == v
            }
            _ => false,
        }
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn component_of(&self, v: VertexId) -> usize {
        self.component[v]
    }

    pub fn num_components(&self) -> usize {
        self.n_components
    }

    pub fn is_connected(&self) -> bool {
        self.n_components <= 1
    }

    // ----- distances and cycles -----

    pub fn bfs(&self, src: VertexId) -> Vec<Option<usize>> {
        self.bfs_avoiding(src, &|_| false)
    }

    /// Distances from `src` in the graph with the vertices where `blocked`
    /// holds removed (the source is never blocked).
    pub fn bfs_avoiding(&self, src: VertexId, blocked: &dyn Fn(VertexId) -> bool) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut q = VecDeque::from([src]);
        while let Some(v) = q.pop_front() {
            let dv = dist[v].unwrap_or(0);
            for &u in &self.rotation[v] {
                if dist[u].is_none() && !blocked(u) {
                    dist[u] = Some(dv + 1);
                    q.push_back(u);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.bfs(u)[v]
    }

    /// Length of a shortest cycle; `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n() {
            let mut dist = vec![usize::MAX; self.n()];
            let mut parent = vec![usize::MAX; self.n()];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &u in &self.rotation[v] {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        parent[u] = v;
                        q.push_back(u);
                    } else if parent[v] != u {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// All cycles of length at most `k`, each once.
    pub fn cycles_up_to(&self, k: usize) -> Vec<Cycle> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        let mut on_path = vec![false; self.n()];
        for s in 0..self.n() {
            path.push(s);
            on_path[s] = true;
            self.extend_cycles(s, k, &mut path, &mut on_path, &mut out);
            on_path[s] = false;
            path.pop();
        }
        out.sort();
        out
    }

    fn extend_cycles(
        &self,
        s: VertexId,
        k: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut [bool],
        out: &mut Vec<Cycle>,
    ) {
        let v = *path.last().expect("non-empty path");
        for &u in &self.rotation[v] {
            if u == s && path.len() >= 3 && path[1] < v {
                out.push(Cycle(path.clone()));
            } else if u > s && !on_path[u] && path.len() < k {
                on_path[u] = true;
                path.push(u);
                self.extend_cycles(s, k, path, on_path, out);
                path.pop();
                on_path[u] = false;
            }
        }
    }

    /// Whether `vs` (cyclically) is a cycle of the graph.
    pub fn is_cycle(&self, vs: &[VertexId]) -> bool {
        let k = vs.len();
        let distinct: BTreeSet<_> = vs.iter().collect();
        k >= 3 && distinct.len() == k && (0..k).all(|i| self.adjacent(vs[i], vs[(i + 1) % k]))
    }

    /// Splits the faces into the two sides of the cycle `vs`; the left side
    /// contains the face to the left of `vs[0] -> vs[1]`.
    pub fn cycle_sides(&self, vs: &[VertexId]) -> Option<CycleSides> {
        if !self.is_cycle(vs) {
            return None;
        }
        let k = vs.len();
        let mut on_cycle: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        for i in 0..k {
            on_cycle.insert((vs[i], vs[(i + 1) % k]));
            on_cycle.insert((vs[(i + 1) % k], vs[i]));
        }
        let grow = |seed: FaceId| -> BTreeSet<FaceId> {
            let mut seen = BTreeSet::from([seed]);
            let mut q = VecDeque::from([seed]);
            while let Some(f) = q.pop_front() {
                for d in self.face_darts(f) {
                    let dd = self.darts[d];
                    if on_cycle.contains(&(dd.origin, dd.head)) {
                        continue;
                    }
                    let g = self.dart_face[dd.twin];
                    if seen.insert(g) {
                        q.push_back(g);
                    }
                }
            }
            seen
        };
        let left = grow(self.face_left_of(vs[0], vs[1])?);
        let right = grow(self.face_left_of(vs[1], vs[0])?);
        if !left.is_disjoint(&right) {
            return None;
        }
        let cyc: BTreeSet<_> = vs.iter().copied().collect();
        let verts = |fs: &BTreeSet<FaceId>| -> BTreeSet<VertexId> {
            fs.iter().flat_map(|&f| self.face_vertex_set(f)).filter(|v| !cyc.contains(v)).collect()
        };
        Some(CycleSides {
            left_vertices: verts(&left),
            right_vertices: verts(&right),
            left_faces: left,
            right_faces: right,
        })
    }

    fn cuffs_in(&self, faces: &BTreeSet<FaceId>, vertices: &BTreeSet<VertexId>) -> Vec<usize> {
        self.rings
            .iter()
            .enumerate()
            .filter(|(_, r)| match r.kind {
                RingKind::Facial => faces.contains(&r.face),
                _ => vertices.contains(&r.vertices[0]) || faces.contains(&r.face),
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Classifies `vs` as contractible, surrounding exactly one cuff, or
    /// separating the cuffs otherwise.
    pub fn surrounds_cuff(&self, vs: &[VertexId]) -> Option<CuffClass> {
        let sides = self.cycle_sides(vs)?;
        let l = self.cuffs_in(&sides.left_faces, &sides.left_vertices);
        let r = self.cuffs_in(&sides.right_faces, &sides.right_vertices);
        Some(if l.is_empty() || r.is_empty() {
            CuffClass::Contractible
        } else if l.len() == 1 {
            CuffClass::SurroundsCuff(l[0])
        } else if r.len() == 1 {
            CuffClass::SurroundsCuff(r[0])
        } else {
            CuffClass::Separating
        })
    }

    /// The side of `vs` that is an open disk free of cuffs: faces and
    /// vertices strictly inside. When both sides qualify the left one is taken.
    pub fn disk_side(&self, vs: &[VertexId]) -> Result<(BTreeSet<FaceId>, BTreeSet<VertexId>), DiskError> {
        let sides = self.cycle_sides(vs).ok_or(DiskError::NotACycle)?;
        let l = self.cuffs_in(&sides.left_faces, &sides.left_vertices);
        let r = self.cuffs_in(&sides.right_faces, &sides.right_vertices);
        let ring_inside = |vset: &BTreeSet<VertexId>| vset.iter().any(|&v| self.is_ring_vertex(v));
        if l.is_empty() && !ring_inside(&sides.left_vertices) {
            Ok((sides.left_faces, sides.left_vertices))
        } else if r.is_empty() && !ring_inside(&sides.right_vertices) {
            Ok((sides.right_faces, sides.right_vertices))
        } else if l.is_empty() || r.is_empty() {
            Err(DiskError::RingInsideDisk)
        } else {
            Err(DiskError::NotContractible)
        }
    }

    /// Everything drawn in the closed disk bounded by `vs`, as a plane graph
    /// with the single facial ring `vs`. Returns the graph and the original id
    /// of each new vertex.
    pub fn disk_subgraph(&self, vs: &[VertexId]) -> Result<(EmbeddedGraph, Vec<VertexId>), DiskError> {
        let (faces, inside) = self.disk_side(vs)?;
        let mut keep: Vec<VertexId> = vs.to_vec();
        keep.extend(inside.iter().copied());
        keep.sort_unstable();
        keep.dedup();
        let new_id: HashMap<VertexId, VertexId> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let k = vs.len();
        let cyc_edge = |u: VertexId, v: VertexId| {
            (0..k).any(|i| {
                let (a, b) = (vs[i], vs[(i + 1) % k]);
                (a == u && b == v) || (a == v && b == u)
            })
        };
        let mut rotation = vec![Vec::new(); keep.len()];
        for &v in &keep {
            for d in self.darts_from(v) {
                let u = self.darts[d].head;
                let inside_edge =
                    faces.contains(&self.dart_face[d]) || faces.contains(&self.dart_face[self.darts[d].twin]);
                if cyc_edge(v, u) || (inside_edge && new_id.contains_key(&u)) {
                    rotation[new_id[&v]].push(new_id[&u]);
                }
            }
        }
        let ring: Vec<VertexId> = vs.iter().map(|v| new_id[v]).collect();
        let g = EmbeddedGraph::build(rotation, vec![RingDecl::Facial(ring)]).map_err(|_| DiskError::NotContractible)?;
        Ok((g, keep))
    }

    /// Subgraph keeping only the listed vertices (rings restricted to those
    /// that survive whole). Returns the graph and the original id of each vertex.
    pub fn induced(&self, keep: &[VertexId]) -> Result<(EmbeddedGraph, Vec<VertexId>), BuildError> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let new_id: HashMap<VertexId, VertexId> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rotation =
            keep.iter().map(|&v| self.rotation[v].iter().filter_map(|u| new_id.get(u).copied()).collect()).collect();
        let rings = self.remap_rings(&new_id);
        Ok((EmbeddedGraph::build(rotation, rings)?, keep))
    }

    /// Same vertex set with the edges for which `keep` fails removed.
    pub fn edge_subgraph(&self, keep: &dyn Fn(VertexId, VertexId) -> bool) -> Result<EmbeddedGraph, BuildError> {
        let rotation =
            (0..self.n()).map(|v| self.rotation[v].iter().copied().filter(|&u| keep(v, u)).collect()).collect();
        EmbeddedGraph::build(rotation, self.ring_decls.clone())
    }

    /// Like [`EmbeddedGraph::edge_subgraph`] but with no rings declared.
    pub fn edge_subgraph_without_rings(
        &self,
        keep: &dyn Fn(VertexId, VertexId) -> bool,
    ) -> Result<EmbeddedGraph, BuildError> {
        let rotation =
            (0..self.n()).map(|v| self.rotation[v].iter().copied().filter(|&u| keep(v, u)).collect()).collect();
        EmbeddedGraph::build(rotation, Vec::new())
    }

    pub(crate) fn remap_rings(&self, new_id: &HashMap<VertexId, VertexId>) -> Vec<RingDecl> {
        self.ring_decls
            .iter()
            .filter_map(|d| match d {
                RingDecl::Facial(vs) => {
                    let m: Option<Vec<_>> = vs.iter().map(|v| new_id.get(v).copied()).collect();
                    m.map(RingDecl::Facial)
                }
                RingDecl::Vertex { vertex, weak, cuff } => new_id.get(vertex).map(|&v| RingDecl::Vertex {
                    vertex: v,
                    weak: *weak,
                    cuff: cuff.and_then(|c| new_id.get(&c).copied()),
                }),
            })
            .collect()
    }

    /// Sum over faces of `|f|` equals twice the edge count plus the isolated
    /// vertex-ring contributions.
    pub fn dart_count_balanced(&self) -> bool {
        let total: usize = self.faces.iter().map(|f| f.length).sum();
        let iso: usize = self
            .faces
            .iter()
            .flat_map(|f| f.walks.iter())
            .map(|w| match w {
                BoundaryWalk::Isolated(v) => self.ring_of[*v].map(|r| self.rings[r].len()).unwrap_or(0),
                _ => 0,
            })
            .sum();
        total == 2 * self.num_edges() + iso
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures;

    #[test]
    fn c5_in_disk_has_two_faces() {
        let g = fixtures::cycle(5);
        assert_eq!(g.num_faces(), 2);
        assert!(g.faces().iter().all(|f| f.length == 5));
        assert_eq!(g.internal_faces().count(), 1);
    }

    #[test]
    fn prism_host_faces() {
        let g = fixtures::prism();
        let mut lens: Vec<_> = g.faces().iter().map(|f| f.length).collect();
        lens.sort();
        assert_eq!(lens, vec![5, 5, 5, 5, 5, 5, 10]);
        assert_eq!(g.girth(), Some(5));
        assert!(g.cycles_up_to(4).is_empty());
    }

    #[test]
    fn odd_twin_rejected() {
        let r = EmbeddedGraph::build(vec![vec![1], vec![]], vec![]);
        assert!(matches!(r, Err(BuildError::NonSymmetricRotation(0, 1))));
    }

    #[test]
    fn single_vertex_ring_has_no_cycle() {
        let g =
            EmbeddedGraph::build(vec![vec![]], vec![RingDecl::Vertex { vertex: 0, weak: false, cuff: None }]).unwrap();
        assert_eq!(g.girth(), None);
        assert_eq!(g.face_length(0), 1);
    }

    #[test]
    fn chorded_octagon_has_two_pentagons() {
        let g = fixtures::c8_chord();
        let cs = g.cycles_up_to(5);
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.len() == 5));
    }

    #[test]
    fn disk_of_pentagon_is_bare() {
        let g = fixtures::c8_chord();
        let (d, _) = g.disk_subgraph(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(d.n(), 5);
        assert_eq!(d.num_edges(), 5);
        let p = fixtures::prism();
        let (d, _) = p.disk_subgraph(&[10, 11, 12, 13, 14]).unwrap();
        assert_eq!(d.num_edges(), 5);
        let ring: Vec<_> = (0..10).collect();
        let (d, map) = p.disk_subgraph(&ring).unwrap();
        assert_eq!(d.num_edges(), p.num_edges());
        assert_eq!(map, (0..15).collect::<Vec<_>>());
    }

    #[test]
    fn cuff_classes() {
        let p = fixtures::prism();
        assert_eq!(p.surrounds_cuff(&[10, 11, 12, 13, 14]), Some(CuffClass::Contractible));
        let g = fixtures::c8_chord();
        assert_eq!(g.surrounds_cuff(&[0, 1, 2, 3, 4]), Some(CuffClass::Contractible));
        let two = fixtures::annulus(5, 5);
        assert_eq!(two.surrounds_cuff(&[0, 1, 2, 3, 4]), Some(CuffClass::SurroundsCuff(0)));
    }

    #[test]
    fn annulus_face_has_two_walks() {
        let g = fixtures::annulus(5, 6);
        let inner: Vec<_> = g.internal_faces().collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(g.face(inner[0]).walks.len(), 2);
        assert_eq!(g.face_length(inner[0]), 11);
    }
}
