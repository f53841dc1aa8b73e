//! A small disk in which a given configuration strongly appears.
//!
//! Half-edges become pendant vertices, outside vertices of low degree become
//! terminals, and terminals are tied off: those on the face chosen as outer
//! face run through a private middle vertex to a new facial ring, those in
//! other unmarked faces are joined by connector paths or a connector cycle.
//! Path lengths are padded so no cycle shorter than five appears.

use crate::graph::{EmbeddedGraph, RingDecl, VertexId};

use super::Configuration;

/// Builds the host; catalogue vertex `v` keeps id `v`.
pub fn canonical_host(c: &Configuration) -> EmbeddedGraph {
    let n = c.n();
    // rotation with every half-edge turned into a pendant vertex
    let mut rotation: Vec<Vec<VertexId>> = Vec::new();
    let mut stubs = Vec::new();
    for v in 0..n {
        let mut rot = Vec::new();
        for x in &c.stub_rotation[v] {
            match x {
                Some(u) => rot.push(*u),
                None => {
                    let s = n + stubs.len();
                    stubs.push(v);
                    rot.push(s);
                }
            }
        }
        rotation.push(rot);
    }
    rotation.extend(stubs.iter().map(|&v| vec![v]));
    let base = EmbeddedGraph::build(rotation.clone(), Vec::new()).expect("catalogue drawing");
    let marked = |g: &EmbeddedGraph| -> Vec<usize> {
        c.faces.iter().map(|f| g.face_left_of(f[0], f[1]).expect("marked face")).collect()
    };
    // a free vertex that must have degree at least four gets pendants
    if c.id == super::ConfigId::R4 {
        let v2 = c.v("v2");
        let m = marked(&base);
        let k = rotation[v2].len();
        let i =
            (0..k).find(|&i| !m.contains(&base.face_left_of(rotation[v2][i], v2).expect("edge"))).expect("free corner");
        for _ in 0..2 {
            let s = rotation.len();
            rotation.push(vec![v2]);
            rotation[v2].insert(i + 1, s);
        }
    }
    let aug = EmbeddedGraph::build(rotation, Vec::new()).expect("augmented drawing");
    let marked_faces = marked(&aug);
    let is_terminal = |v: VertexId| (v >= n || !c.in_dom(v)) && aug.degree(v) < 3;
    let free_faces: Vec<usize> = (0..aug.num_faces()).filter(|f| !marked_faces.contains(f)).collect();
    let walks: Vec<Vec<VertexId>> = (0..aug.num_faces()).map(|f| aug.face_cycle(f)).collect();
    let terminals_in = |f: usize| -> Vec<VertexId> {
        let mut ts: Vec<VertexId> = walks[f].iter().copied().filter(|&v| is_terminal(v)).collect();
        ts.dedup();
        ts
    };
    let outer = *free_faces
        .iter()
        .max_by_key(|&&f| (terminals_in(f).len(), walks[f].len(), std::cmp::Reverse(f)))
        .expect("a free face");
    // each terminal is tied off in one face, the outer one when possible
    let mut owner = vec![None; aug.n()];
    for &f in std::iter::once(&outer).chain(free_faces.iter()) {
        for t in terminals_in(f) {
            owner[t].get_or_insert(f);
        }
    }
    let mut next_id = aug.n();
    let mut fresh = || {
        next_id += 1;
        next_id - 1
    };
    let mut faces: Vec<Vec<VertexId>> = Vec::new();
    let mut ring: Vec<VertexId> = Vec::new();
    for f in 0..aug.num_faces() {
        let w = &walks[f];
        let len = w.len();
        let mut pos: Vec<usize> = Vec::new();
        for (i, &v) in w.iter().enumerate() {
            if owner[v] == Some(f) && !pos.iter().any(|&p| w[p] == v) {
                pos.push(i);
            }
        }
        let k = pos.len();
        let seg = |i: usize| -> Vec<VertexId> {
            let (a, b) = (pos[i], pos[(i + 1) % k]);
            let l = if k == 1 { len } else { (b + len - a) % len };
            (0..=l).map(|j| w[(a + j) % len]).collect()
        };
        let gap = |i: usize| seg(i).len() - 1;
        if f == outer {
            let mids: Vec<VertexId> = (0..k).map(|_| fresh()).collect();
            let rs: Vec<VertexId> = (0..k).map(|_| fresh()).collect();
            let mut q = vec![1usize; k];
            let mut j = 0;
            while q.iter().sum::<usize>() < 5 {
                q[j % k] += 1;
                j += 1;
            }
            let subs: Vec<Vec<VertexId>> = q.iter().map(|&qi| (1..qi).map(|_| fresh()).collect()).collect();
            for i in 0..k {
                let i1 = (i + 1) % k;
                let mut face = seg(i);
                face.push(mids[i1]);
                face.push(rs[i1]);
                face.extend(subs[i].iter().rev());
                face.push(rs[i]);
                face.push(mids[i]);
                faces.push(face);
                ring.push(rs[i]);
                ring.extend(subs[i].iter());
            }
        } else if k == 2 {
            let p = 2.max(5usize.saturating_sub(gap(0))).max(5usize.saturating_sub(gap(1)));
            let inner: Vec<VertexId> = (1..p).map(|_| fresh()).collect();
            let mut a = seg(0);
            a.extend(inner.iter().rev());
            let mut b = seg(1);
            b.extend(inner.iter());
            faces.push(a);
            faces.push(b);
        } else if k >= 3 {
            let mids: Vec<VertexId> = (0..k).map(|_| fresh()).collect();
            let mut p: Vec<usize> = (0..k).map(|i| 1.max(3usize.saturating_sub(gap(i)))).collect();
            while p.iter().sum::<usize>() < 5 {
                let i = (0..k).min_by_key(|&i| p[i]).expect("k >= 3");
                p[i] += 1;
            }
            let inner: Vec<Vec<VertexId>> = p.iter().map(|&pi| (1..pi).map(|_| fresh()).collect()).collect();
            let mut centre = Vec::new();
            for i in 0..k {
                let i1 = (i + 1) % k;
                let mut face = seg(i);
                face.push(mids[i1]);
                face.extend(inner[i].iter().rev());
                face.push(mids[i]);
                faces.push(face);
                centre.push(mids[i]);
                centre.extend(inner[i].iter());
            }
            faces.push(centre);
        } else {
            faces.push(w.clone());
        }
    }
    faces.push(ring.clone());
    EmbeddedGraph::from_faces(next_id, &faces, vec![RingDecl::Facial(ring)]).expect("host drawing")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, find_appearances_of, Strength};

    #[test]
    fn every_configuration_strongly_appears_in_its_host() {
        for c in catalog() {
            let g = canonical_host(c);
            assert!(g.cycles_up_to(4).is_empty(), "{}: short cycle", c.id);
            assert!(g.rings()[0].len() <= 12, "{}: ring of length {}", c.id, g.rings()[0].len());
            let found = find_appearances_of(&g, c, Strength::Strong);
            let id: Vec<VertexId> = (0..c.n()).collect();
            let hit = found.iter().any(|a| c.automorphisms.contains(&a.map) || a.map == id);
            assert!(hit, "{}: no strong appearance at the drawing ({} others)", c.id, found.len());
        }
    }
}
