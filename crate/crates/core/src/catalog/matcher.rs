//! Imprint search and the four strength tiers.
//!
//! The search ([`find_appearances`]) and the tier checker ([`verify`]) are
//! written independently: the search walks darts around candidate faces while
//! the checker compares traced face cycles, and every returned appearance is
//! re-verified before it is reported.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::graph::{Cycle, EmbeddedGraph, FaceId, VertexId};

use super::{catalog, config, ConfigId, Configuration};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strength {
    Faint,
    Weak,
    Appears,
    Strong,
}

impl Strength {
    pub fn parse(s: &str) -> Option<Strength> {
        match s.to_ascii_lowercase().as_str() {
            "faint" => Some(Strength::Faint),
            "weak" => Some(Strength::Weak),
            "appears" => Some(Strength::Appears),
            "strong" => Some(Strength::Strong),
            _ => None,
        }
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// A configuration found in a host: where each catalogue vertex went and
/// which host faces carry the marked faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Appearance {
    pub config: ConfigId,
    pub map: Vec<VertexId>,
    pub faces: Vec<FaceId>,
    /// The imprint is the mirror image of the catalogue drawing.
    pub reflected: bool,
    pub weak: bool,
    pub appears: bool,
    pub strong: bool,
}

impl Appearance {
    pub fn configuration(&self) -> &'static Configuration {
        config(self.config)
    }

    /// Highest tier reached; weak and plain appearance are incomparable, and
    /// plain appearance is reported when both hold.
    pub fn strength(&self) -> Strength {
        if self.strong {
            Strength::Strong
        } else if self.appears {
            Strength::Appears
        } else if self.weak {
            Strength::Weak
        } else {
            Strength::Faint
        }
    }

    pub fn meets(&self, s: Strength) -> bool {
        match s {
            Strength::Faint => true,
            Strength::Weak => self.weak,
            Strength::Appears => self.appears,
            Strength::Strong => self.strong,
        }
    }

    /// Host vertex playing the catalogue vertex `label`.
    pub fn at(&self, label: &str) -> VertexId {
        self.map[self.configuration().v(label)]
    }

    pub fn dom_vertices(&self) -> Vec<VertexId> {
        self.configuration().dom().map(|v| self.map[v]).collect()
    }

    /// Catalogue pair glued together by the imprint.
    pub fn glued(&self) -> Option<(VertexId, VertexId)> {
        let n = self.map.len();
        (0..n).find_map(|a| ((a + 1)..n).find(|&b| self.map[a] == self.map[b]).map(|b| (a, b)))
    }
}

impl fmt::Display for Appearance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.configuration();
        write!(f, "{} {}", self.config, self.strength())?;
        for (v, &x) in self.map.iter().enumerate() {
            write!(f, " {}={}", c.label(v), x)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TierFailure {
    pub tier: Strength,
    pub reason: String,
}

impl fmt::Display for TierFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.tier, self.reason)
    }
}

// ----- search -----

/// Host face whose walk is `images` (or its mirror), found by walking darts.
fn dart_face(host: &EmbeddedGraph, images: &[VertexId], reflected: bool) -> Option<FaceId> {
    let k = images.len();
    let seq: Vec<VertexId> =
        if reflected { (0..k).map(|i| images[(k + 1 - i) % k]).collect() } else { images.to_vec() };
    let d0 = host.dart_between(seq[0], seq[1])?;
    let f = host.face_of_dart(d0);
    if host.face(f).walks.len() != 1 || host.face_length(f) != k {
        return None;
    }
    let mut d = d0;
    for &x in &seq {
        if host.dart(d).origin != x {
            return None;
        }
        d = host.face_next(d);
    }
    (d == d0).then_some(f)
}

struct Search<'a> {
    pat: &'a EmbeddedGraph,
    host: &'a EmbeddedGraph,
    faces: &'a [Vec<VertexId>],
    order: Vec<VertexId>,
    parent: Vec<Option<VertexId>>,
    face_due: Vec<Vec<usize>>,
    compat: &'a dyn Fn(VertexId, VertexId) -> bool,
    face_ok: &'a dyn Fn(FaceId) -> bool,
    glue: Option<(VertexId, VertexId)>,
    reflected: bool,
    map: Vec<Option<VertexId>>,
    used: Vec<u8>,
    out: Vec<(Vec<VertexId>, bool)>,
}

impl Search<'_> {
    fn partner(&self, u: VertexId) -> Option<VertexId> {
        match self.glue {
            Some((a, b)) if a == u => Some(b),
            Some((a, b)) if b == u => Some(a),
            _ => None,
        }
    }

    fn run(&mut self, i: usize) {
        if i == self.order.len() {
            let m = self.map.iter().map(|x| x.expect("complete")).collect();
            self.out.push((m, self.reflected));
            return;
        }
        let u = self.order[i];
        let cands: Vec<VertexId> = match self.parent[i] {
            None => (0..self.host.n()).collect(),
            Some(p) => self.host.neighbors(self.map[p].expect("parent placed")).to_vec(),
        };
        let forced = self.partner(u).and_then(|p| self.map[p]);
        for x in cands {
            if let Some(y) = forced {
                if x != y {
                    continue;
                }
            } else if self.used[x] > 0 {
                continue;
            }
            if !(self.compat)(u, x) {
                continue;
            }
            if self.pat.neighbors(u).iter().any(|&w| self.map[w].is_some_and(|y| !self.host.adjacent(y, x))) {
                continue;
            }
            self.map[u] = Some(x);
            self.used[x] += 1;
            let faces_fine = self.face_due[i].iter().all(|&fi| {
                let imgs: Vec<VertexId> = self.faces[fi].iter().map(|&v| self.map[v].expect("placed")).collect();
                dart_face(self.host, &imgs, self.reflected).is_some_and(|f| (self.face_ok)(f))
            });
            if faces_fine {
                self.run(i + 1);
            }
            self.used[x] -= 1;
            self.map[u] = None;
        }
    }
}

/// All maps of the pattern into the host, in both orientations.
fn embeddings(
    pat: &EmbeddedGraph,
    faces: &[Vec<VertexId>],
    root: VertexId,
    host: &EmbeddedGraph,
    compat: &dyn Fn(VertexId, VertexId) -> bool,
    face_ok: &dyn Fn(FaceId) -> bool,
    glue: Option<(VertexId, VertexId)>,
) -> Vec<(Vec<VertexId>, bool)> {
    let n = pat.n();
    let mut order = vec![root];
    let mut parent = vec![None];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        for &u in pat.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                order.push(u);
                parent.push(Some(v));
                q.push_back(u);
            }
        }
    }
    assert_eq!(order.len(), n, "pattern must be connected");
    let pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    let mut face_due = vec![Vec::new(); n];
    for (fi, f) in faces.iter().enumerate() {
        let last = f.iter().map(|&v| pos[v]).max().expect("non-empty face");
        face_due[last].push(fi);
    }
    let mut out = Vec::new();
    for reflected in [false, true] {
        let mut s = Search {
            pat,
            host,
            faces,
            order: order.clone(),
            parent: parent.clone(),
            face_due: face_due.clone(),
            compat,
            face_ok,
            glue,
            reflected,
            map: vec![None; n],
            used: vec![0; host.n()],
            out: Vec::new(),
        };
        s.run(0);
        out.append(&mut s.out);
    }
    out
}

fn root_of(c: &Configuration) -> VertexId {
    c.dom().max_by_key(|&v| (c.d[v], std::cmp::Reverse(v))).expect("non-empty domain")
}

/// Symmetries of a configuration: bijections preserving edges, marked faces,
/// degrees, half-edges and both special sets.
pub(super) fn automorphisms(c: &Configuration) -> Vec<Vec<VertexId>> {
    let marked = c.marked_face_ids();
    let in_i = |v: VertexId| c.i_set.contains(&v);
    let in_a = |v: VertexId| c.a_set.contains(&v);
    let compat = |u: VertexId, x: VertexId| {
        c.d[u] == c.d[x]
            && c.half_edges[u] == c.half_edges[x]
            && c.graph.degree(u) == c.graph.degree(x)
            && in_i(u) == in_i(x)
            && in_a(u) == in_a(x)
    };
    let face_ok = |f: FaceId| marked.contains(&f);
    let mut maps: Vec<Vec<VertexId>> = embeddings(&c.graph, &c.faces, root_of(c), &c.graph, &compat, &face_ok, None)
        .into_iter()
        .map(|(m, _)| m)
        .collect();
    maps.sort();
    maps.dedup();
    let id: Vec<VertexId> = (0..c.n()).collect();
    maps.retain(|m| *m != id);
    maps.insert(0, id);
    maps
}

fn canonical_key(c: &Configuration, map: &[VertexId]) -> Vec<VertexId> {
    c.automorphisms
        .iter()
        .map(|s| s.iter().map(|&v| map[v]).collect::<Vec<_>>())
        .min()
        .expect("identity is an automorphism")
}

/// Appearances of every configuration, at least as strong as `min`.
pub fn find_appearances(g: &EmbeddedGraph, min: Strength) -> Vec<Appearance> {
    catalog().iter().flat_map(|c| find_appearances_of(g, c, min)).collect()
}

/// Appearances of one configuration, one per class under its symmetries.
pub fn find_appearances_of(g: &EmbeddedGraph, c: &Configuration, min: Strength) -> Vec<Appearance> {
    let compat = |u: VertexId, x: VertexId| {
        g.degree(x) >= c.graph.degree(u)
            && match c.d[u] {
                Some(k) => g.degree(x) == k && g.is_internal_vertex(x),
                None => true,
            }
    };
    let face_ok = |f: FaceId| !g.is_ring_face(f) && !g.is_cuff_face(f);
    let mut glues: Vec<Option<(VertexId, VertexId)>> = vec![None];
    glues.extend(c.identifiable_pairs().into_iter().map(Some));
    let mut keys = BTreeSet::new();
    for glue in glues {
        for (map, _) in embeddings(&c.graph, &c.faces, root_of(c), g, &compat, &face_ok, glue) {
            let on_ring = c.i_set.iter().filter(|&&v| g.is_ring_vertex(map[v])).count();
            if on_ring <= 1 {
                keys.insert(canonical_key(c, &map));
            }
        }
    }
    keys.into_iter()
        .filter_map(|map| {
            let (faces, reflected) = locate_faces(g, c, &map)?;
            let mut a = Appearance { config: c.id, map, faces, reflected, weak: false, appears: false, strong: false };
            verify(g, &a, Strength::Faint).ok()?;
            a.weak = verify(g, &a, Strength::Weak).is_ok();
            a.appears = verify(g, &a, Strength::Appears).is_ok();
            a.strong = a.weak && a.appears && verify(g, &a, Strength::Strong).is_ok();
            a.meets(min).then_some(a)
        })
        .collect()
}

/// Whether an edge of `j` lies on a marked face of the appearance.
pub fn touched_by(g: &EmbeddedGraph, a: &Appearance, j: &[(VertexId, VertexId)]) -> bool {
    j.iter().any(|&(u, v)| g.edge_faces(u, v).is_some_and(|(f, h)| a.faces.contains(&f) || a.faces.contains(&h)))
}

// ----- checking -----

/// Host faces of the marked faces, by comparing traced cycles.
fn locate_faces(g: &EmbeddedGraph, c: &Configuration, map: &[VertexId]) -> Option<(Vec<FaceId>, bool)> {
    'orient: for reflected in [false, true] {
        let mut out = Vec::new();
        for f in &c.faces {
            let mut imgs: Vec<VertexId> = f.iter().map(|&v| map[v]).collect();
            if reflected {
                imgs.reverse();
            }
            let Some(id) = g.face_left_of(imgs[0], imgs[1]) else { continue 'orient };
            if g.face(id).walks.len() != 1 {
                continue 'orient;
            }
            let walk = g.face_cycle(id);
            let k = imgs.len();
            let start = walk.iter().position(|&x| x == imgs[0]);
            let same = walk.len() == k && start.is_some_and(|s| (0..k).all(|i| walk[(s + i) % k] == imgs[i]));
            if !same {
                continue 'orient;
            }
            out.push(id);
        }
        return Some((out, reflected));
    }
    None
}

fn fail<T>(tier: Strength, reason: String) -> Result<T, TierFailure> {
    Err(TierFailure { tier, reason })
}

fn ensure(tier: Strength, ok: bool, reason: impl FnOnce() -> String) -> Result<(), TierFailure> {
    if ok {
        Ok(())
    } else {
        fail(tier, reason())
    }
}

/// Re-checks every condition of the tier from scratch.
pub fn verify(g: &EmbeddedGraph, a: &Appearance, tier: Strength) -> Result<(), TierFailure> {
    let c = a.configuration();
    check_faint(g, c, a)?;
    match tier {
        Strength::Faint => Ok(()),
        Strength::Weak => check_weak(g, c, a),
        Strength::Appears => check_appears(g, c, a),
        Strength::Strong => {
            check_weak(g, c, a)?;
            check_appears(g, c, a)?;
            check_strong(g, c, a)
        }
    }
}

fn check_faint(g: &EmbeddedGraph, c: &Configuration, a: &Appearance) -> Result<(), TierFailure> {
    let t = Strength::Faint;
    let m = &a.map;
    ensure(t, m.len() == c.n() && m.iter().all(|&x| x < g.n()), || "map has the wrong shape".into())?;
    for &(u, v) in c.graph.edges() {
        ensure(t, g.adjacent(m[u], m[v]), || format!("edge {}{} is missing", c.label(u), c.label(v)))?;
    }
    let mut seen: Vec<(VertexId, VertexId)> = Vec::new();
    for u in 0..c.n() {
        for v in (u + 1)..c.n() {
            if m[u] == m[v] {
                seen.push((u, v));
            }
        }
    }
    let glue_ok = seen.is_empty() || (seen.len() == 1 && c.identifiable_pairs().contains(&seen[0]));
    ensure(t, glue_ok, || "imprint glues vertices it may not".into())?;
    match locate_faces(g, c, m) {
        Some((faces, reflected)) if faces == a.faces && reflected == a.reflected => {}
        _ => return fail(t, "marked faces are not faces of the host".into()),
    }
    for &f in &a.faces {
        ensure(t, !g.is_ring_face(f), || format!("marked face {f} is a ring face"))?;
        ensure(t, !g.is_cuff_face(f), || format!("marked face {f} is the cuff face of a vertex ring"))?;
    }
    for v in c.dom() {
        ensure(t, g.is_internal_vertex(m[v]), || format!("{} lies on a ring", c.label(v)))?;
        ensure(t, Some(g.degree(m[v])) == c.d[v], || format!("{} has degree {}", c.label(v), g.degree(m[v])))?;
    }
    let on_ring = c.i_set.iter().filter(|&&v| g.is_ring_vertex(m[v])).count();
    ensure(t, on_ring <= 1, || format!("{on_ring} identified vertices lie on rings"))
}

fn check_weak(g: &EmbeddedGraph, c: &Configuration, a: &Appearance) -> Result<(), TierFailure> {
    let t = Strength::Weak;
    let m = &a.map;
    let facial: BTreeSet<Cycle> =
        g.rings().iter().filter(|r| r.is_facial()).map(|r| Cycle::new(r.vertices.clone())).collect();
    for cyc in g.cycles_up_to(4) {
        if facial.contains(&cyc) {
            continue;
        }
        let edges: Vec<(VertexId, VertexId)> = cyc.edges().collect();
        ensure(t, !touched_by(g, a, &edges), || format!("short cycle {:?} touches the configuration", cyc.vertices()))?;
    }
    if c.id == ConfigId::R7 {
        let same = |x: &str, y: &str| a.at(x) == a.at(y);
        ensure(t, !(same("x3", "x7") && same("x1", "x6")), || "x3 = x7 and x1 = x6".into())?;
    }
    let dom: Vec<VertexId> = c.dom().collect();
    for (i, &u) in dom.iter().enumerate() {
        for &v in &dom[i + 1..] {
            let ok = !g.adjacent(m[u], m[v]) || c.graph.adjacent(u, v);
            ensure(t, ok, || format!("{} and {} are adjacent in the host only", c.label(u), c.label(v)))?;
        }
    }
    if c.id == ConfigId::R4 && g.is_ring_vertex(a.at("x4")) && g.is_ring_vertex(a.at("x5")) {
        ensure(t, g.is_internal_vertex(a.at("v2")), || "x4, x5 and v2 all lie on rings".into())?;
    }
    Ok(())
}

fn internal_with_neighbours(g: &EmbeddedGraph, x: VertexId) -> bool {
    g.is_internal_vertex(x) && g.neighbors(x).iter().all(|&y| g.is_internal_vertex(y))
}

fn check_appears(g: &EmbeddedGraph, c: &Configuration, a: &Appearance) -> Result<(), TierFailure> {
    let t = Strength::Appears;
    let m = &a.map;
    for &v in &c.i_set {
        ensure(t, !g.is_vertex_ring(m[v]), || format!("{} is a vertex ring", c.label(v)))?;
    }
    match c.id {
        ConfigId::R3 => {
            let ok = c.i_set.iter().any(|&v| g.is_ring_vertex(m[v]))
                || c.i_set.iter().any(|&v| internal_with_neighbours(g, m[v]));
            ensure(t, ok, || "no identified vertex is on a ring or deep inside".into())?;
        }
        ConfigId::R4 => {
            let v2 = a.at("v2");
            ensure(t, g.is_internal_vertex(v2) && g.degree(v2) >= 4, || {
                "v2 must be internal of degree at least four".into()
            })?;
            ensure(t, !g.is_vertex_ring(a.at("x4")) && !g.is_vertex_ring(a.at("x5")), || {
                "x4 or x5 is a vertex ring".into()
            })?;
        }
        ConfigId::R5 => {
            ensure(t, g.is_internal_vertex(a.at("v4")), || "v4 lies on a ring".into())?;
            let (v6, v7, v8) = (a.at("v6"), a.at("v7"), a.at("v8"));
            let through = |p: VertexId, q: VertexId| {
                let d = g.dart_between(p, v7)?;
                let e = g.dart_between(v7, q)?;
                (g.face_next(d) == e).then(|| g.face_of_dart(d))
            };
            let face = through(v6, v8).or_else(|| through(v8, v6));
            ensure(t, face.is_some_and(|f| g.face_length(f) >= 7), || {
                "the face along v6 v7 v8 is shorter than seven".into()
            })?;
        }
        ConfigId::R6 | ConfigId::R6p => {
            let xs: Vec<VertexId> = c.a_set.iter().map(|&v| m[v]).collect();
            ensure(t, xs.iter().all(|&x| g.is_internal_vertex(x)), || "a joined vertex lies on a ring".into())?;
            ensure(t, xs.iter().any(|&x| internal_with_neighbours(g, x)), || "both joined vertices see a ring".into())?;
        }
        _ => {}
    }
    if c.id.is_r7_family() {
        for &v in c.a_set.iter().chain(c.i_set.iter()) {
            ensure(t, internal_with_neighbours(g, m[v]), || format!("{} or a neighbour lies on a ring", c.label(v)))?;
        }
    }
    if c.id == ConfigId::R7 {
        ensure(t, internal_with_neighbours(g, a.at("x8")), || "x8 or a neighbour lies on a ring".into())?;
    }
    Ok(())
}

fn check_strong(g: &EmbeddedGraph, c: &Configuration, a: &Appearance) -> Result<(), TierFailure> {
    let t = Strength::Strong;
    let m = &a.map;
    if c.a_set.len() == 2 && m[c.a_set[0]] != m[c.a_set[1]] {
        let ok = c.a_set.iter().any(|&v| g.is_internal_vertex(m[v]));
        ensure(t, ok, || "both joined vertices lie on rings".into())?;
    }
    for &u in &c.i_set {
        for &v in &c.i_set {
            if u == v || m[u] == m[v] || !g.is_ring_vertex(m[u]) {
                continue;
            }
            for &w in g.neighbors(m[v]) {
                if !g.is_ring_vertex(w) {
                    continue;
                }
                let via = (0..c.n()).any(|y| m[y] == w && c.graph.adjacent(u, y) && c.graph.adjacent(y, v));
                ensure(t, g.adjacent(m[u], w) && via, || {
                    format!(
                        "ring neighbour {w} of {} is not joined to {} inside the configuration",
                        c.label(v),
                        c.label(u)
                    )
                })?;
            }
        }
    }
    if c.id == ConfigId::R7 {
        let (v2, z) = (a.at("v2"), a.at("z"));
        let allowed = [a.at("v1"), a.at("v3"), a.at("x6"), a.at("x7")];
        ensure(t, v2 != z && !g.adjacent(v2, z), || "v2 and z meet".into())?;
        let common = g.neighbors(v2).iter().any(|w| g.neighbors(z).contains(w) && !allowed.contains(w));
        ensure(t, !common, || "v2 and z have a common neighbour".into())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures;

    #[test]
    fn prism_has_r1_but_not_strongly() {
        let g = fixtures::prism();
        let all = find_appearances(&g, Strength::Faint);
        let r1: Vec<_> = all.iter().filter(|a| a.config == ConfigId::R1).collect();
        // five rotations of the pentagon; the mirror is a symmetry
        assert_eq!(r1.len(), 5);
        assert!(r1.iter().all(|a| a.appears && a.weak && !a.strong));
        assert!(find_appearances(&g, Strength::Strong).is_empty());
    }

    #[test]
    fn bare_cycle_has_nothing() {
        assert!(find_appearances(&fixtures::cycle(5), Strength::Faint).is_empty());
    }

    #[test]
    fn internal_spoke_gives_strong_r1() {
        let g = fixtures::prism_internal_spoke();
        let strong = find_appearances(&g, Strength::Strong);
        assert!(strong.iter().any(|a| a.config == ConfigId::R1));
        for a in &strong {
            assert!(verify(&g, a, Strength::Strong).is_ok());
        }
    }

    #[test]
    fn touching() {
        let g = fixtures::prism();
        let a = find_appearances(&g, Strength::Faint).into_iter().find(|a| a.config == ConfigId::R1).unwrap();
        assert!(touched_by(&g, &a, &[(10, 11)]));
        assert!(!touched_by(&g, &a, &[(0, 1)]));
        assert!(!touched_by(&g, &a, &[]));
    }

    #[test]
    fn tampered_appearance_is_rejected() {
        let g = fixtures::prism();
        let mut a = find_appearances(&g, Strength::Faint).into_iter().next().unwrap();
        a.map.swap(0, 1);
        assert!(verify(&g, &a, Strength::Faint).is_err());
    }
}
