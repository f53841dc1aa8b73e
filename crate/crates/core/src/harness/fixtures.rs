//! Small hand-drawn hosts used by tests, examples and the self check.
//!
//! Every fixture is drawn with coordinates; the rotation at a vertex is its
//! neighbours sorted by angle. With that convention the face traced from a
//! dart lies on its right, so a ring listed counter-clockwise around the
//! outside of a drawing gets the unbounded face as its cuff.

use std::f64::consts::PI;

use crate::graph::{EmbeddedGraph, RingDecl, VertexId};

/// Builds an embedding from a straight-line drawing.
pub fn from_coords(points: &[(f64, f64)], edges: &[(VertexId, VertexId)], rings: Vec<RingDecl>) -> EmbeddedGraph {
    let mut rotation: Vec<Vec<VertexId>> = vec![Vec::new(); points.len()];
    for &(u, v) in edges {
        rotation[u].push(v);
        rotation[v].push(u);
    }
    for (v, rot) in rotation.iter_mut().enumerate() {
        let (x, y) = points[v];
        rot.sort_by(|&a, &b| {
            let ta = (points[a].1 - y).atan2(points[a].0 - x);
            let tb = (points[b].1 - y).atan2(points[b].0 - x);
            ta.total_cmp(&tb)
        });
    }
    EmbeddedGraph::build(rotation, rings).expect("fixture drawing is a valid embedding")
}

fn circle(k: usize, radius: f64, phase: f64) -> Vec<(f64, f64)> {
    (0..k)
        .map(|i| {
            let t = phase + 2.0 * PI * i as f64 / k as f64;
            (radius * t.cos(), radius * t.sin())
        })
        .collect()
}

fn cycle_edges(vs: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    (0..vs.len()).map(|i| (vs[i], vs[(i + 1) % vs.len()])).collect()
}

/// A bare ring `C_k`: the graph equals its ring.
pub fn cycle(k: usize) -> EmbeddedGraph {
    let vs: Vec<_> = (0..k).collect();
    from_coords(&circle(k, 1.0, 0.0), &cycle_edges(&vs), vec![RingDecl::Facial(vs)])
}

/// Pentagonal prism in a disk: ring `r0..r9`, inner pentagon `10..14` and
/// spokes from `10 + j` to `r_{2j}`.
pub fn prism() -> EmbeddedGraph {
    let mut pts = circle(10, 2.0, 0.0);
    pts.extend(circle(5, 1.0, 0.0));
    let ring: Vec<_> = (0..10).collect();
    let inner: Vec<_> = (10..15).collect();
    let mut edges = cycle_edges(&ring);
    edges.extend(cycle_edges(&inner));
    edges.extend((0..5).map(|j| (10 + j, 2 * j)));
    from_coords(&pts, &edges, vec![RingDecl::Facial(ring)])
}

/// The prism with ring vertex `r0` pushed inside: it becomes an internal
/// vertex `15` adjacent to `r9`, `r1` and the spoke, and the ring is closed
/// through two new vertices `16`, `17`.
pub fn prism_internal_spoke() -> EmbeddedGraph {
    let mut pts = circle(10, 3.0, 0.0);
    pts.extend(circle(5, 1.0, 0.0));
    pts.push((2.0, 0.0));
    pts.push((3.0 * (-0.2f64).cos(), 3.0 * (-0.2f64).sin()));
    pts.push((3.0 * (0.2f64).cos(), 3.0 * (0.2f64).sin()));
    let mut edges: Vec<(VertexId, VertexId)> = (1..9).map(|i| (i, i + 1)).collect();
    edges.extend([(9, 16), (16, 17), (17, 1)]);
    edges.extend(cycle_edges(&[10, 11, 12, 13, 14]));
    edges.extend((1..5).map(|j| (10 + j, 2 * j)));
    edges.extend([(10, 15), (15, 9), (15, 1)]);
    // vertex 0 is unused; drop it by relabelling
    let keep: Vec<VertexId> = (1..18).collect();
    let g = from_coords(&pts, &edges, Vec::new());
    let (h, _) = g.induced(&keep).expect("drop unused vertex");
    // after dropping 0 every label shifts down by one
    let ring = vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 15, 16];
    EmbeddedGraph::build(h.rotation_system().to_vec(), vec![RingDecl::Facial(ring)]).expect("valid ring")
}

/// `C_8` with the chord `r0 r4`.
pub fn c8_chord() -> EmbeddedGraph {
    let vs: Vec<_> = (0..8).collect();
    let mut edges = cycle_edges(&vs);
    edges.push((0, 4));
    from_coords(&circle(8, 1.0, 0.1), &edges, vec![RingDecl::Facial(vs)])
}

/// Two facial rings of lengths `a` and `b` with nothing between them.
pub fn annulus(a: usize, b: usize) -> EmbeddedGraph {
    let mut pts = circle(a, 2.0, 0.0);
    pts.extend(circle(b, 1.0, 0.0));
    let outer: Vec<_> = (0..a).collect();
    let inner: Vec<_> = (a..a + b).collect();
    let mut edges = cycle_edges(&outer);
    edges.extend(cycle_edges(&inner));
    let mut inner_cw = inner.clone();
    inner_cw[1..].reverse();
    from_coords(&pts, &edges, vec![RingDecl::Facial(outer), RingDecl::Facial(inner_cw)])
}

/// Ring `C_l` with one internal vertex `l` adjacent to `r0`, `r3` and
/// `r_{l-3}`; internal faces have lengths 5, 5 and `l - 4`.
pub fn e2(l: usize) -> EmbeddedGraph {
    let vs: Vec<_> = (0..l).collect();
    let mut pts = circle(l, 2.0, 0.0);
    pts.push((0.0, 0.0));
    let mut edges = cycle_edges(&vs);
    edges.extend([(l, 0), (l, 3), (l, l - 3)]);
    from_coords(&pts, &edges, vec![RingDecl::Facial(vs)])
}

/// The prism with an ear `10 15 16 17 11` drawn inside the inner pentagon,
/// so that `{10, 11}` is an internal 2-cut.
pub fn prism_with_ear() -> EmbeddedGraph {
    let mut pts = circle(10, 3.0, 0.0);
    pts.extend(circle(5, 2.0, 0.0));
    let (a, b) = (pts[10], pts[11]);
    let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    pts.push((a.0 * 0.6 + mid.0 * 0.1, a.1 * 0.6 + mid.1 * 0.1));
    pts.push((mid.0 * 0.5, mid.1 * 0.5));
    pts.push((b.0 * 0.6 + mid.0 * 0.1, b.1 * 0.6 + mid.1 * 0.1));
    let ring: Vec<_> = (0..10).collect();
    let mut edges = cycle_edges(&ring);
    edges.extend(cycle_edges(&[10, 11, 12, 13, 14]));
    edges.extend((0..5).map(|j| (10 + j, 2 * j)));
    edges.extend([(10, 15), (15, 16), (16, 17), (17, 11)]);
    from_coords(&pts, &edges, vec![RingDecl::Facial(ring)])
}

/// A ring `C_5` with a pentagon `0 5 6 7 8` hanging inside at ring vertex 0,
/// so the face between them has a boundary walk through a cut vertex.
pub fn two_pentagons_at_vertex() -> EmbeddedGraph {
    let mut pts = circle(5, 3.0, 0.0);
    pts.extend([(2.5, 0.5), (1.6, 0.4), (1.6, -0.4), (2.5, -0.5)]);
    let ring: Vec<_> = (0..5).collect();
    let mut edges = cycle_edges(&ring);
    edges.extend(cycle_edges(&[0, 5, 6, 7, 8]));
    from_coords(&pts, &edges, vec![RingDecl::Facial(ring)])
}

/// Ring `C_7` with a path `r0 7 8 r2` drawn inside, closing a 5-face with
/// the ring path `r0 r1 r2`.
pub fn c7_with_handle() -> EmbeddedGraph {
    let mut pts = circle(7, 3.0, 0.0);
    let (a, c) = (pts[0], pts[2]);
    pts.push((a.0 * 0.6, a.1 * 0.6 + 0.1));
    pts.push((c.0 * 0.6, c.1 * 0.6));
    let ring: Vec<_> = (0..7).collect();
    let mut edges = cycle_edges(&ring);
    edges.extend([(0, 7), (7, 8), (8, 2)]);
    from_coords(&pts, &edges, vec![RingDecl::Facial(ring)])
}

/// `C_8` with the chord `r0 r4` plus a pentagon gadget glued along the ring
/// edge `r1 r2` inside the face `r0 r1 r2 r3 r4`. The gadget does not affect
/// which precolourings extend when `r0` and `r4` share a colour.
pub fn c8_chord_with_gadget() -> EmbeddedGraph {
    let vs: Vec<_> = (0..8).collect();
    let mut pts = circle(8, 3.0, 0.1);
    let (p1, p2) = (pts[1], pts[2]);
    pts.push((p1.0 * 0.7, p1.1 * 0.7));
    pts.push(((p1.0 + p2.0) * 0.3, (p1.1 + p2.1) * 0.3));
    pts.push((p2.0 * 0.7, p2.1 * 0.7));
    let mut edges = cycle_edges(&vs);
    edges.push((0, 4));
    edges.extend([(1, 8), (8, 9), (9, 10), (10, 2)]);
    from_coords(&pts, &edges, vec![RingDecl::Facial(vs)])
}

/// A single vertex ring with no edges.
pub fn lone_vertex_ring() -> EmbeddedGraph {
    EmbeddedGraph::build(vec![Vec::new()], vec![RingDecl::Vertex { vertex: 0, weak: false, cuff: None }])
        .expect("single vertex")
}

/// A vertex ring of degree 3 at the centre of three pentagons, inside a
/// facial ring `C_9`. Used to exercise the vertex-ring charging rules.
pub fn vertex_ring_wheel() -> EmbeddedGraph {
    let mut pts = circle(9, 3.0, 0.0);
    pts.push((0.0, 0.0));
    pts.extend(circle(3, 1.5, 0.0));
    let vs: Vec<_> = (0..9).collect();
    let mut edges = cycle_edges(&vs);
    edges.extend([(9, 10), (9, 11), (9, 12), (10, 0), (11, 3), (12, 6)]);
    from_coords(&pts, &edges, vec![RingDecl::Facial(vs), RingDecl::Vertex { vertex: 9, weak: false, cuff: Some(10) }])
}
