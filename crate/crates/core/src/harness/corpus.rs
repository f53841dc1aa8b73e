//! Exhaustive generation of small disks: 2-connected plane graphs whose
//! outer face is a facial ring.
//!
//! Every such graph has an ear decomposition starting from its outer cycle
//! in which each ear is drawn inside one face of what came before, so the
//! corpus is grown from the bare ring by adding ears. Graphs are compared by
//! a canonical code: a breadth-first numbering from a ring dart, minimised
//! over all ring darts and both orientations.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::colorer::{is_r_critical, CriticalityVerdict};
use crate::graph::{EmbeddedGraph, RingDecl, VertexId};

/// Largest vertex count the enumerator accepts.
pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub max_n: usize,
    pub ring: usize,
    /// No cycle shorter than this.
    pub girth: usize,
    /// Only 2 is supported: every generated graph is 2-connected.
    pub connectivity: usize,
    /// Keep only graphs that are critical with respect to their ring.
    pub critical_only: bool,
}

impl CorpusSpec {
    pub fn new(ring: usize, max_n: usize) -> Self {
        CorpusSpec { max_n, ring, girth: 5, connectivity: 2, critical_only: false }
    }

    pub fn critical(self) -> Self {
        CorpusSpec { critical_only: true, ..self }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.max_n > MAX_VERTICES {
            return Err(CorpusError::TooLarge(self.max_n));
        }
        if self.ring < 3 || self.ring > self.max_n {
            return Err(CorpusError::BadRing(self.ring, self.max_n));
        }
        if self.connectivity > 2 {
            return Err(CorpusError::Unsupported(format!("connectivity {}", self.connectivity)));
        }
        if self.girth < 3 {
            return Err(CorpusError::Unsupported(format!("girth {}", self.girth)));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("at most {MAX_VERTICES} vertices, asked for {0}")]
    TooLarge(usize),
    #[error("ring length {0} does not fit in {1} vertices")]
    BadRing(usize, usize),
    #[error("unsupported corpus option: {0}")]
    Unsupported(String),
}

/// Faces of a disk, the ring face first, each with the face on its left.
#[derive(Debug, Clone)]
struct Disk {
    n: usize,
    faces: Vec<Vec<VertexId>>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl Disk {
    fn ring(l: usize) -> Self {
        let ring: Vec<VertexId> = (0..l).collect();
        let mut inner = ring.clone();
        inner[1..].reverse();
        let edges = (0..l).map(|i| (i.min((i + 1) % l), i.max((i + 1) % l))).collect();
        Disk { n: l, faces: vec![ring, inner], edges }
    }

    fn graph(&self, l: usize) -> EmbeddedGraph {
        EmbeddedGraph::from_faces(self.n, &self.faces, vec![RingDecl::Facial((0..l).collect())])
            .expect("ears keep a disk")
    }

    /// Every way to add one ear whose new faces are long enough.
    fn ears(&self, max_n: usize, girth: usize) -> Vec<Disk> {
        let mut out = Vec::new();
        for fi in 1..self.faces.len() {
            let w = &self.faces[fi];
            let len = w.len();
            for i in 0..len {
                for j in i + 1..len {
                    let (u, v) = (w[i], w[j]);
                    let (d1, d2) = (j - i, len - (j - i));
                    for k in 1..=(max_n - self.n + 1) {
                        if d1 + k < girth || d2 + k < girth || (k == 1 && self.edges.contains(&(u.min(v), u.max(v)))) {
                            continue;
                        }
                        let path: Vec<VertexId> = (self.n..self.n + k - 1).collect();
                        let mut f1: Vec<VertexId> = w[i..=j].to_vec();
                        f1.extend(path.iter().rev());
                        let mut f2: Vec<VertexId> = w[j..].to_vec();
                        f2.extend(&w[..=i]);
                        f2.extend(&path);
                        let mut faces = self.faces.clone();
                        faces[fi] = f1;
                        faces.push(f2);
                        let mut edges = self.edges.clone();
                        let chain: Vec<VertexId> = std::iter::once(u).chain(path.iter().copied()).chain([v]).collect();
                        for e in chain.windows(2) {
                            edges.insert((e[0].min(e[1]), e[0].max(e[1])));
                        }
                        out.push(Disk { n: self.n + k - 1, faces, edges });
                    }
                }
            }
        }
        out
    }
}

fn bfs_code(rot: &[Vec<VertexId>], root: (VertexId, VertexId)) -> Vec<u32> {
    let n = rot.len();
    let mut num = vec![u32::MAX; n];
    let mut entry = vec![0; n];
    let mut order = vec![root.0];
    num[root.0] = 0;
    entry[root.0] = root.1;
    let mut code = Vec::with_capacity(3 * n);
    let mut idx = 0;
    while idx < order.len() {
        let x = order[idx];
        let r = &rot[x];
        let s = r.iter().position(|&y| y == entry[x]).unwrap_or(0);
        for t in 0..r.len() {
            let y = r[(s + t) % r.len()];
            if num[y] == u32::MAX {
                num[y] = order.len() as u32;
                entry[y] = x;
                order.push(y);
            }
            code.push(num[y]);
        }
        code.push(u32::MAX);
        idx += 1;
    }
    code
}

/// Canonical code of a connected graph, rooted at the darts of the walk of
/// its first ring's face.
pub fn canonical_code(g: &EmbeddedGraph) -> Vec<u32> {
    let rot: Vec<Vec<VertexId>> = g.rotation_system().to_vec();
    let mirror: Vec<Vec<VertexId>> = rot.iter().map(|r| r.iter().rev().copied().collect()).collect();
    let walk = g.face_cycle(g.rings()[0].face);
    let l = walk.len();
    (0..l)
        .flat_map(|i| {
            let (a, b) = (walk[i], walk[(i + 1) % l]);
            [bfs_code(&rot, (a, b)), bfs_code(&mirror, (b, a))]
        })
        .min()
        .expect("non-empty ring")
}

/// All disks matching `spec` up to isomorphism, smallest first, then by code.
pub fn enumerate_corpus(spec: &CorpusSpec) -> Result<Vec<EmbeddedGraph>, CorpusError> {
    spec.validate()?;
    let l = spec.ring;
    let start = Disk::ring(l);
    let g0 = start.graph(l);
    let mut seen: BTreeMap<Vec<u32>, EmbeddedGraph> = BTreeMap::new();
    let mut level = vec![start];
    if g0.cycles_up_to(spec.girth - 1).is_empty() {
        seen.insert(canonical_code(&g0), g0);
    } else {
        return Ok(Vec::new());
    }
    while !level.is_empty() {
        let found: Vec<(Vec<u32>, Disk, EmbeddedGraph)> = level
            .par_iter()
            .flat_map_iter(|d| d.ears(spec.max_n, spec.girth))
            .filter_map(|d| {
                let g = d.graph(l);
                g.cycles_up_to(spec.girth - 1).is_empty().then(|| (canonical_code(&g), d, g))
            })
            .collect();
        let mut next = BTreeMap::new();
        for (code, d, g) in found {
            if !seen.contains_key(&code) && !next.contains_key(&code) {
                next.insert(code, (d, g));
            }
        }
        level = Vec::with_capacity(next.len());
        for (code, (d, g)) in next {
            seen.insert(code, g);
            level.push(d);
        }
    }
    let mut out: Vec<(usize, Vec<u32>, EmbeddedGraph)> = seen.into_iter().map(|(c, g)| (g.n(), c, g)).collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let graphs: Vec<EmbeddedGraph> = out.into_iter().map(|(_, _, g)| g).collect();
    if !spec.critical_only {
        return Ok(graphs);
    }
    let keep: Vec<bool> = graphs
        .par_iter()
        .map(|g| is_r_critical(g, l).map(|c| c.verdict == CriticalityVerdict::RCritical).unwrap_or(false))
        .collect();
    Ok(graphs.into_iter().zip(keep).filter_map(|(g, k)| k.then_some(g)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures;

    #[test]
    fn pentagon_alone() {
        let gs = enumerate_corpus(&CorpusSpec::new(5, 5)).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].num_edges(), 5);
    }

    #[test]
    fn octagon_and_its_chord() {
        let gs = enumerate_corpus(&CorpusSpec::new(8, 8)).unwrap();
        assert_eq!(gs.len(), 2);
        let chord = canonical_code(&fixtures::c8_chord());
        assert_eq!(gs.iter().filter(|g| canonical_code(g) == chord).count(), 1);
        assert!(gs.iter().any(|g| g.num_edges() == 8));
    }

    #[test]
    fn nine_ring_contains_the_tripod() {
        let gs = enumerate_corpus(&CorpusSpec::new(9, 10)).unwrap();
        let e2 = canonical_code(&fixtures::e2(9));
        assert!(gs.iter().any(|g| canonical_code(g) == e2));
    }

    /// Relabels ring vertex `i` as `i * sign + shift`, mirroring the drawing
    /// when `sign` is -1 so the ring is still walked as `0..l`.
    fn relabel(g: &EmbeddedGraph, l: usize, shift: usize, mirror: bool) -> EmbeddedGraph {
        let map = |v: VertexId| match (v < l, mirror) {
            (false, _) => v,
            (true, false) => (v + shift) % l,
            (true, true) => (l - v + shift) % l,
        };
        let mut rot = vec![Vec::new(); g.n()];
        for v in 0..g.n() {
            let r = g.rotation(v).iter().map(|&u| map(u));
            rot[map(v)] = if mirror { r.rev().collect() } else { r.collect() };
        }
        EmbeddedGraph::build(rot, vec![RingDecl::Facial((0..l).collect())]).unwrap()
    }

    #[test]
    fn code_ignores_rotation_and_reflection_of_labels() {
        let g = fixtures::e2(9);
        let want = canonical_code(&g);
        for shift in 0..9 {
            for mirror in [false, true] {
                assert_eq!(canonical_code(&relabel(&g, 9, shift, mirror)), want);
            }
        }
    }

    #[test]
    fn corpus_spec_validation() {
        assert_eq!(enumerate_corpus(&CorpusSpec::new(5, 17)).unwrap_err(), CorpusError::TooLarge(17));
        assert!(matches!(enumerate_corpus(&CorpusSpec::new(9, 8)), Err(CorpusError::BadRing(9, 8))));
    }
}
