//! Charges on vertices and faces, the seven redistribution rules and audits
//! of the bounds they are meant to guarantee. Everything is exact.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::catalog::{find_appearances, touched_by, ConfigId, Strength};
use crate::graph::{EmbeddedGraph, FaceId, VertexId};
use crate::invariants::{check_invariant, Invariant};
use crate::weights::{fmt_q, graph_weight, q, WeightFunction, Q};

pub type Edge = (VertexId, VertexId);

fn key(u: VertexId, v: VertexId) -> Edge {
    (u.min(v), u.max(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Vertex(VertexId),
    Face(FaceId),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Vertex(v) => write!(f, "v{v}"),
            Site::Face(x) => write!(f, "f{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Initial,
    Primary,
    Final,
}

/// One move of charge. `from` is `None` for charge created out of nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub rule: u8,
    pub from: Option<Site>,
    pub to: Site,
    pub amount: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeLedger {
    pub phase: Phase,
    pub vertex: Vec<Q>,
    pub face: Vec<Q>,
    /// Edges of the subgraph that absorbs short cycles.
    pub m: BTreeSet<Edge>,
    pub epsilon: Option<Q>,
    pub log: Vec<Transfer>,
}

impl ChargeLedger {
    pub fn charge(&self, s: Site) -> Q {
        match s {
            Site::Vertex(v) => self.vertex[v],
            Site::Face(f) => self.face[f],
        }
    }

    pub fn total(&self) -> Q {
        self.vertex.iter().chain(&self.face).copied().sum()
    }

    fn apply(&mut self, t: Transfer) {
        if let Some(s) = t.from {
            *self.slot(s) -= t.amount;
        }
        *self.slot(t.to) += t.amount;
        self.log.push(t);
    }

    fn slot(&mut self, s: Site) -> &mut Q {
        match s {
            Site::Vertex(v) => &mut self.vertex[v],
            Site::Face(f) => &mut self.face[f],
        }
    }

    /// Applies `log` to a copy of this ledger.
    pub fn replay(&self, log: &[Transfer]) -> ChargeLedger {
        let mut out = self.clone();
        for t in log {
            out.apply(t.clone());
        }
        out
    }

    /// Entries of the log produced after this ledger.
    pub fn since<'a>(&self, later: &'a ChargeLedger) -> &'a [Transfer] {
        &later.log[self.log.len()..]
    }
}

/// Union of all cycles of length at most four, as an edge set. Empty means
/// the null subgraph; a union of cycles has minimum degree two.
pub fn capture_4cycles(g: &EmbeddedGraph) -> BTreeSet<Edge> {
    g.cycles_up_to(4).iter().flat_map(|c| c.edges().map(|(u, v)| key(u, v)).collect::<Vec<_>>()).collect()
}

fn touches_m(g: &EmbeddedGraph, m: &BTreeSet<Edge>, f: FaceId) -> bool {
    !m.is_empty()
        && g.face_darts(f).iter().any(|&d| {
            let x = g.dart(d);
            m.contains(&key(x.origin, x.head))
        })
}

fn on_facial_ring(g: &EmbeddedGraph, v: VertexId) -> bool {
    g.ring_of(v).is_some_and(|r| g.rings()[r].is_facial())
}

fn internal_cubic(g: &EmbeddedGraph, v: VertexId) -> bool {
    g.is_internal_vertex(v) && g.degree(v) == 3
}

pub fn initial(g: &EmbeddedGraph, m: &BTreeSet<Edge>) -> ChargeLedger {
    let vertex = (0..g.n())
        .map(|v| {
            let d = g.degree(v) as i64;
            if g.is_vertex_ring(v) {
                Q::from_integer(d)
            } else if on_facial_ring(g, v) && d == 2 {
                q(-1, 3)
            } else if g.is_ring_vertex(v) {
                Q::from_integer(d - 3)
            } else {
                Q::from_integer(d - 4)
            }
        })
        .collect();
    let face = (0..g.num_faces())
        .map(|f| {
            if g.is_ring_face(f) {
                return Q::zero();
            }
            let base = Q::from_integer(g.face_length(f) as i64 - 4);
            if touches_m(g, m, f) {
                base + q(5, 3)
            } else {
                base
            }
        })
        .collect();
    ChargeLedger { phase: Phase::Initial, vertex, face, m: m.clone(), epsilon: None, log: Vec::new() }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaceDanger {
    /// Number of internal cubic vertices, for a 5-face off the short-cycle
    /// subgraph.
    pub k_dangerous: Option<usize>,
    pub extremely_4dangerous: bool,
    /// For a 4-dangerous face: the face across its far edge, and that edge.
    pub links_to: Option<(FaceId, Edge)>,
    /// 4-dangerous faces this face is linked to, with the edge.
    pub linked_from: Vec<(FaceId, Edge)>,
    /// Vertices `x` with an edge `xy`, `y` cubic, whose third face at `y`
    /// is this one. Repeated per edge context.
    pub opposite_of: Vec<VertexId>,
}

/// The single boundary walk of a face, if it has one.
fn single_walk(g: &EmbeddedGraph, f: FaceId) -> Option<Vec<VertexId>> {
    let mut ws = g.face_walks(f);
    (ws.len() == 1).then(|| ws.remove(0))
}

pub fn classify_danger(g: &EmbeddedGraph, m: &BTreeSet<Edge>) -> Vec<FaceDanger> {
    let mut out = vec![FaceDanger::default(); g.num_faces()];
    for y in (0..g.n()).filter(|&y| g.degree(y) == 3) {
        let rot = g.rotation(y);
        for i in 0..3 {
            // the corner between the other two neighbours
            let f = g.face_left_of(rot[(i + 1) % 3], y).expect("edge");
            out[f].opposite_of.push(rot[i]);
        }
    }
    for f in g.internal_faces() {
        if g.face_length(f) != 5 || touches_m(g, m, f) {
            continue;
        }
        let Some(w) = single_walk(g, f) else { continue };
        let k = w.iter().filter(|&&v| internal_cubic(g, v)).count();
        out[f].k_dangerous = Some(k);
        if k == 4 {
            let i = w.iter().position(|&v| !internal_cubic(g, v)).expect("one exception");
            let (u, v) = (w[(i + 2) % 5], w[(i + 3) % 5]);
            let h = g.face_left_of(v, u).expect("edge");
            out[f].links_to = Some((h, key(u, v)));
            out[h].linked_from.push((f, key(u, v)));
        }
    }
    for f in 0..g.num_faces() {
        if out[f].k_dangerous == Some(4) {
            let near_ring = g.face_vertex_set(f).iter().any(|&v| g.is_ring_vertex(v));
            let opp_vr = out[f].opposite_of.iter().any(|&x| g.is_vertex_ring(x));
            out[f].extremely_4dangerous = !near_ring && !opp_vr;
        }
    }
    out
}

/// Rules 1 to 4.
pub fn primary(g: &EmbeddedGraph, ledger: &ChargeLedger) -> ChargeLedger {
    assert_eq!(ledger.phase, Phase::Initial, "primary rules start from initial charges");
    let m = &ledger.m;
    let danger = classify_danger(g, m);
    let third = q(1, 3);
    let mut out = ledger.clone();
    let mut moves = Vec::new();
    // Rule 1
    for f in g.internal_faces() {
        for v in g.face_vertex_set(f) {
            let d = g.degree(v);
            if (d == 2 && on_facial_ring(g, v)) || (d == 3 && g.is_internal_vertex(v)) {
                moves.push(Transfer { rule: 1, from: Some(Site::Face(f)), to: Site::Vertex(v), amount: third });
            }
        }
    }
    // Rule 2
    for v in 0..g.n() {
        if on_facial_ring(g, v) {
            for f in g.faces_around(v).into_iter().collect::<BTreeSet<_>>() {
                if danger[f].k_dangerous == Some(4) {
                    moves.push(Transfer { rule: 2, from: Some(Site::Vertex(v)), to: Site::Face(f), amount: third });
                }
            }
        } else if g.is_vertex_ring(v) {
            let cuff = g.rings()[g.ring_of(v).expect("ring")].face;
            for f in g.faces_around(v).into_iter().collect::<BTreeSet<_>>() {
                if g.is_ring_face(f) {
                    continue;
                }
                let amount = if f == cuff { q(8, 9) } else { third };
                moves.push(Transfer { rule: 2, from: Some(Site::Vertex(v)), to: Site::Face(f), amount });
            }
            for f in g.internal_faces() {
                for _ in danger[f].opposite_of.iter().filter(|&&x| x == v) {
                    moves.push(Transfer { rule: 2, from: Some(Site::Vertex(v)), to: Site::Face(f), amount: third });
                }
            }
        }
    }
    // Rule 3
    for f in g.internal_faces() {
        let rich = g.face_length(f) >= 6 || touches_m(g, m, f) || g.is_cuff_face(f);
        if !rich {
            continue;
        }
        for &(h, _) in &danger[f].linked_from {
            if danger[h].extremely_4dangerous {
                moves.push(Transfer { rule: 3, from: Some(Site::Face(f)), to: Site::Face(h), amount: third });
            }
        }
    }
    // Rule 4
    let linked_extreme =
        |f: FaceId, e: Edge| danger[f].linked_from.iter().any(|&(h, x)| x == e && danger[h].extremely_4dangerous);
    for fp in g.internal_faces().filter(|&f| g.face_length(f) >= 7) {
        for w in g.face_walks(fp) {
            let k = w.len();
            for i in 0..k {
                let v = |j: usize| w[(i + j) % k];
                if linked_extreme(fp, key(v(0), v(1))) && linked_extreme(fp, key(v(2), v(3))) {
                    let f = g.face_left_of(v(2), v(1)).expect("edge");
                    if !g.is_ring_face(f) && g.face_length(f) >= 6 {
                        moves.push(Transfer {
                            rule: 4,
                            from: Some(Site::Face(f)),
                            to: Site::Face(fp),
                            amount: q(1, 9),
                        });
                    }
                }
            }
        }
    }
    for t in moves {
        out.apply(t);
    }
    out.phase = Phase::Primary;
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    pub safe: BTreeSet<VertexId>,
    /// Faces 3-reachable from each vertex.
    pub reach: Vec<BTreeSet<FaceId>>,
}

impl Reachability {
    /// Faces reachable by paths of length at most `k` whose vertices other
    /// than the start are unsafe.
    fn reach_within(g: &EmbeddedGraph, safe: &BTreeSet<VertexId>, v: VertexId, k: usize) -> BTreeSet<FaceId> {
        let mut dist = BTreeMap::from([(v, 0usize)]);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            if dx == k {
                continue;
            }
            for &y in g.neighbors(x) {
                if !safe.contains(&y) && !dist.contains_key(&y) {
                    dist.insert(y, dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist.keys().flat_map(|&x| g.faces_around(x)).collect()
    }
}

pub fn safe_and_reachable(g: &EmbeddedGraph, ledger: &ChargeLedger) -> Reachability {
    assert_eq!(ledger.phase, Phase::Primary, "safety is defined from primary charges");
    let safe: BTreeSet<VertexId> = (0..g.n())
        .filter(|&v| {
            g.degree(v) >= 5 || g.is_ring_vertex(v) || g.faces_around(v).iter().any(|&f| ledger.face[f] > Q::zero())
        })
        .collect();
    let reach = (0..g.n()).map(|v| Reachability::reach_within(g, &safe, v, 3)).collect();
    Reachability { safe, reach }
}

/// Rules 5 to 7.
pub fn final_charges(g: &EmbeddedGraph, ledger: &ChargeLedger, epsilon: Q) -> ChargeLedger {
    let r = safe_and_reachable(g, ledger);
    let mut out = ledger.clone();
    out.epsilon = Some(epsilon);
    let mut moves = Vec::new();
    for v in (0..g.n()).filter(|&v| on_facial_ring(g, v) && g.degree(v) == 3) {
        moves.push(Transfer { rule: 5, from: None, to: Site::Vertex(v), amount: epsilon * 26 });
    }
    for f in g.internal_faces().filter(|&f| ledger.face[f] > Q::zero()) {
        for v in g.face_vertex_set(f) {
            moves.push(Transfer { rule: 6, from: Some(Site::Face(f)), to: Site::Vertex(v), amount: epsilon * 46 });
        }
    }
    for v in 0..g.n() {
        if !(g.is_vertex_ring(v) || (r.safe.contains(&v) && g.degree(v) >= 3)) {
            continue;
        }
        for &f in &r.reach[v] {
            if !g.is_ring_face(f) && ledger.face[f].is_zero() {
                moves.push(Transfer { rule: 7, from: Some(Site::Vertex(v)), to: Site::Face(f), amount: epsilon });
            }
        }
    }
    for t in moves {
        out.apply(t);
    }
    out.phase = Phase::Final;
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Violated,
    Skipped,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "holds",
            Outcome::Violated => "VIOLATED",
            Outcome::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeLine {
    pub lemma: &'static str,
    pub object: String,
    pub outcome: Outcome,
    /// How far the quantity is on the right side of its bound.
    pub margin: Option<Q>,
    pub note: String,
}

impl fmt::Display for ChargeLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.margin.map_or_else(|| "-".to_string(), fmt_q);
        write!(f, "{} {} {} {}", self.lemma, self.object, self.outcome, m)?;
        if !self.note.is_empty() {
            write!(f, " {}", self.note)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{lemma} violated at {object} with margin {margin}")]
pub struct LemmaViolated {
    pub lemma: &'static str,
    pub object: String,
    pub margin: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChargeReport {
    pub lines: Vec<ChargeLine>,
}

impl ChargeReport {
    fn bound(&mut self, lemma: &'static str, object: String, margin: Q, note: String) {
        let outcome = if margin >= Q::zero() { Outcome::Holds } else { Outcome::Violated };
        self.lines.push(ChargeLine { lemma, object, outcome, margin: Some(margin), note });
    }

    fn flag(&mut self, lemma: &'static str, object: String, ok: bool, note: String) {
        let outcome = if ok { Outcome::Holds } else { Outcome::Violated };
        self.lines.push(ChargeLine { lemma, object, outcome, margin: None, note });
    }

    fn skip(&mut self, lemma: &'static str, why: String) {
        self.lines.push(ChargeLine { lemma, object: "-".into(), outcome: Outcome::Skipped, margin: None, note: why });
    }

    pub fn lines_for<'a>(&'a self, lemma: &'a str) -> impl Iterator<Item = &'a ChargeLine> + 'a {
        self.lines.iter().filter(move |l| l.lemma == lemma)
    }

    pub fn into_result(self) -> Result<ChargeReport, LemmaViolated> {
        match self.lines.iter().find(|l| l.outcome == Outcome::Violated) {
            Some(l) => Err(LemmaViolated {
                lemma: l.lemma,
                object: l.object.clone(),
                margin: l.margin.map_or_else(|| "-".into(), fmt_q),
            }),
            None => Ok(self),
        }
    }
}

impl fmt::Display for ChargeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Counts used by the global bounds: rings, facial-ring vertices of degree
/// two and three, edges of the short-cycle subgraph.
struct Counts {
    rings: i64,
    n2: i64,
    n3: i64,
    m: i64,
}

impl Counts {
    fn of(g: &EmbeddedGraph, m: &BTreeSet<Edge>) -> Self {
        let deg = |d: usize| (0..g.n()).filter(|&v| on_facial_ring(g, v) && g.degree(v) == d).count() as i64;
        Counts { rings: g.rings().len() as i64, n2: deg(2), n3: deg(3), m: m.len() as i64 }
    }
}

/// Which hypotheses hold, so each lemma can be audited or skipped.
struct Hypotheses {
    failing_invariants: Vec<Invariant>,
    captures: bool,
    /// Configurations that appear without touching the short-cycle subgraph.
    untouched: BTreeSet<ConfigId>,
}

impl Hypotheses {
    fn of(g: &EmbeddedGraph, m: &BTreeSet<Edge>) -> Self {
        let failing_invariants =
            Invariant::ALL.iter().copied().filter(|&i| i != Invariant::I9 && !check_invariant(g, i).holds()).collect();
        let edges: Vec<Edge> = m.iter().copied().collect();
        let untouched = find_appearances(g, Strength::Appears)
            .into_iter()
            .filter(|a| !touched_by(g, a, &edges))
            .map(|a| a.config)
            .collect();
        let mut deg: BTreeMap<VertexId, usize> = BTreeMap::new();
        for &(u, v) in m {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
        }
        let captures = capture_4cycles(g).is_subset(m) && deg.values().all(|&d| d >= 2);
        Hypotheses { failing_invariants, captures, untouched }
    }

    /// `None` when every hypothesis holds, else the reason to skip.
    fn missing(&self, invs: &[Invariant], configs: &[ConfigId]) -> Option<String> {
        let bad: Vec<String> =
            invs.iter().filter(|i| self.failing_invariants.contains(i)).map(|i| i.to_string()).collect();
        if !bad.is_empty() {
            return Some(format!("fails {}", bad.join(",")));
        }
        if !self.captures {
            return Some("M does not capture short cycles".into());
        }
        let hit: Vec<String> = configs.iter().filter(|c| self.untouched.contains(c)).map(|c| c.to_string()).collect();
        (!hit.is_empty()).then(|| format!("untouched appearance of {}", hit.join(",")))
    }
}

const PRIMARY_INVS: [Invariant; 6] =
    [Invariant::I0, Invariant::I1, Invariant::I3, Invariant::I4, Invariant::I5, Invariant::I7];
const R1_TO_R5: [ConfigId; 5] = [ConfigId::R1, ConfigId::R2, ConfigId::R3, ConfigId::R4, ConfigId::R5];
const R1_TO_R7: [ConfigId; 7] =
    [ConfigId::R1, ConfigId::R2, ConfigId::R3, ConfigId::R4, ConfigId::R5, ConfigId::R6, ConfigId::R7];

/// Zero-charge alternative satisfied by a face, if any.
fn zero_case(g: &EmbeddedGraph, danger: &[FaceDanger], m: &BTreeSet<Edge>, f: FaceId) -> Option<char> {
    let d = &danger[f];
    if d.k_dangerous == Some(3) {
        return Some('a');
    }
    if g.face_vertex_set(f).iter().any(|&v| g.is_ring_vertex(v)) {
        return Some('b');
    }
    if d.k_dangerous != Some(4) {
        return None;
    }
    let (h, _) = d.links_to?;
    if g.face_length(h) >= 6 {
        return Some('c');
    }
    if g.face_length(h) == 5 && (touches_m(g, m, h) || g.is_cuff_face(h)) {
        return Some('d');
    }
    d.opposite_of.iter().any(|&x| g.is_vertex_ring(x)).then_some('e')
}

/// Audits every charge lemma whose hypotheses hold, skipping the rest.
pub fn audit_charges(g: &EmbeddedGraph, m: &BTreeSet<Edge>, w: &WeightFunction) -> ChargeReport {
    let eps = w.epsilon();
    let mut rep = ChargeReport::default();
    let c = Counts::of(g, m);
    let hyp = Hypotheses::of(g, m);
    let init = initial(g, m);
    let prim = primary(g, &init);
    let fin = final_charges(g, &prim, eps);
    let danger = classify_danger(g, m);

    let init_bound = Q::from_integer(4 * c.rings - 8) + q(2 * c.n2, 3) + q(10 * c.m, 3);
    rep.bound("initcharge", "total".into(), init_bound - init.total(), String::new());

    // conservation and replay
    let rule5: Q = fin.log.iter().filter(|t| t.rule == 5).map(|t| t.amount).sum();
    rep.flag("conservation", "primary".into(), prim.total() == init.total(), String::new());
    rep.flag(
        "conservation",
        "final".into(),
        fin.total() - prim.total() == rule5 && rule5 == eps * 26 * c.n3,
        String::new(),
    );
    let replayed = init.replay(&fin.log);
    rep.flag(
        "conservation",
        "replay".into(),
        replayed.vertex == fin.vertex && replayed.face == fin.face,
        String::new(),
    );

    let fin_bound = init_bound + eps * 26 * c.n3;
    rep.bound("fincharge", "total".into(), fin_bound - fin.total(), String::new());

    match hyp.missing(&[Invariant::I0, Invariant::I3], &[]) {
        Some(why) => rep.skip("primaryvertex", why),
        None => {
            for v in 0..g.n() {
                let d = g.degree(v) as i64;
                let p = prim.vertex[v];
                let obj = format!("v{v}");
                if g.is_vertex_ring(v) {
                    rep.bound("primaryvertex", obj, p - q(d, 9), "vertex ring".into());
                } else if on_facial_ring(g, v) && d >= 3 {
                    rep.bound("primaryvertex", obj, p - q(2 * (d - 3), 3), "facial ring".into());
                } else if g.is_internal_vertex(v) && d >= 4 {
                    rep.flag("primaryvertex", obj, p == Q::from_integer(d - 4), "exact".into());
                } else {
                    rep.bound("primaryvertex", obj, p, String::new());
                }
            }
        }
    }

    let primary_missing = hyp.missing(&PRIMARY_INVS, &R1_TO_R5);
    match &primary_missing {
        Some(why) => rep.skip("primary", why.clone()),
        None => {
            for f in g.internal_faces() {
                let p = prim.face[f];
                let l = g.face_length(f);
                let obj = format!("f{f}");
                if p.is_zero() {
                    let shape = l == 5 && !touches_m(g, m, f) && !g.is_cuff_face(f);
                    let case = zero_case(g, &danger, m, f);
                    rep.flag("primary", obj, shape && case.is_some(), format!("zero case {}", case.unwrap_or('-')));
                } else {
                    let mut need = q(2, 9);
                    if l >= 8 {
                        need = need.max(q(5 * l as i64, 9) - 4);
                    }
                    let two_face =
                        l == 6 && g.face_vertex_set(f).iter().any(|&v| on_facial_ring(g, v) && g.degree(v) == 2);
                    if two_face {
                        need = need.max(q(2, 3));
                    }
                    rep.bound("primary", obj, p - need, String::new());
                }
            }
        }
    }

    let r = safe_and_reachable(g, &prim);
    match &primary_missing {
        Some(why) => rep.skip("reachbound", why.clone()),
        None => {
            for v in 0..g.n() {
                let d = g.degree(v) as i64;
                let n = r.reach[v].len() as i64;
                rep.bound("reachbound", format!("v{v}"), Q::from_integer(20 * d - n), String::new());
            }
        }
    }

    match (&primary_missing, eps <= q(1, 180)) {
        (Some(why), _) => rep.skip("finalvertex", why.clone()),
        (None, false) => rep.skip("finalvertex", "epsilon above 1/180".into()),
        (None, true) => {
            for v in 0..g.n() {
                let d = g.degree(v) as i64;
                let x = fin.vertex[v];
                let obj = format!("v{v}");
                if on_facial_ring(g, v) && d >= 4 {
                    let need = (q(2, 3) - eps * 20) * (d - 3) - eps * 26;
                    rep.bound("finalvertex", obj, x - need, "facial ring".into());
                } else {
                    rep.bound("finalvertex", obj, x, String::new());
                }
            }
        }
    }

    match &primary_missing {
        Some(why) => rep.skip("finalbigface", why.clone()),
        None => {
            for f in g.internal_faces() {
                let l = g.face_length(f) as i64;
                let need = match l {
                    6 | 7 => q(2, 9) - eps * 322,
                    l if l >= 8 => (q(5, 9) - eps * 46) * l - 4,
                    _ => continue,
                };
                rep.bound("finalbigface", format!("f{f}"), fin.face[f] - need, String::new());
            }
        }
    }

    let mut safe_invs = PRIMARY_INVS.to_vec();
    safe_invs.push(Invariant::I8);
    match hyp.missing(&safe_invs, &R1_TO_R7) {
        Some(why) => rep.skip("safereach", why),
        None => {
            for f in g.internal_faces().filter(|&f| prim.face[f].is_zero()) {
                let from: Vec<VertexId> = r.safe.iter().copied().filter(|&v| r.reach[v].contains(&f)).collect();
                rep.flag("safereach", format!("f{f}"), !from.is_empty(), format!("{} safe", from.len()));
            }
        }
    }

    match (hyp.missing(&safe_invs, &ConfigId::ALL), eps <= q(2, 2079)) {
        (Some(why), _) => rep.skip("final5face", why),
        (None, false) => rep.skip("final5face", "epsilon above 2/2079".into()),
        (None, true) => {
            for f in g.internal_faces().filter(|&f| g.face_length(f) == 5) {
                rep.bound("final5face", format!("f{f}"), fin.face[f] - eps, String::new());
            }
        }
    }

    let all_invs: Vec<Invariant> = Invariant::ALL.iter().copied().filter(|&i| i != Invariant::I9).collect();
    let fin_missing = match (hyp.missing(&all_invs, &R1_TO_R7), eps > Q::zero() && eps < q(2, 2079)) {
        (Some(why), _) => Some(why),
        (None, false) => Some("epsilon outside (0, 2/2079)".into()),
        (None, true) => None,
    };
    match &fin_missing {
        Some(why) => rep.skip("fincharges", why.clone()),
        None => {
            for v in 0..g.n() {
                rep.bound("fincharges", format!("v{v}"), fin.vertex[v], String::new());
            }
            for f in 0..g.num_faces() {
                if g.is_ring_face(f) {
                    rep.flag("fincharges", format!("f{f}"), fin.face[f].is_zero(), "ring face".into());
                } else {
                    let half = w.s(g.face_length(f)).map_or(Q::zero(), |s| s / 2);
                    rep.bound("fincharges", format!("f{f}"), fin.face[f] - half, String::new());
                }
            }
        }
    }

    match &fin_missing {
        Some(why) => {
            rep.skip("noconfigweight", why.clone());
            rep.skip("newconfigweight", why.clone());
        }
        None => {
            let weight = graph_weight(g, w);
            let base = Q::from_integer(8 * c.rings - 16) + eps * 52 * c.n3 + q(4 * c.n2, 3) + q(20 * c.m, 3);
            rep.bound("noconfigweight", "total".into(), base - weight, String::new());
            let six = g
                .internal_faces()
                .filter(|&f| {
                    g.face_length(f) == 6
                        && g.face_vertex_set(f).iter().any(|&v| on_facial_ring(g, v) && g.degree(v) == 2)
                })
                .count() as i64;
            let big = (0..g.n()).filter(|&v| on_facial_ring(g, v) && g.degree(v) >= 4).count() as i64;
            let b = six + big;
            rep.bound("newconfigweight", "total".into(), base - q(8 * b, 9) - weight, format!("b={b}"));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures;

    fn fixtures_all() -> Vec<EmbeddedGraph> {
        vec![
            fixtures::cycle(5),
            fixtures::cycle(4),
            fixtures::prism(),
            fixtures::prism_internal_spoke(),
            fixtures::c8_chord(),
            fixtures::e2(9),
            fixtures::prism_with_ear(),
            fixtures::two_pentagons_at_vertex(),
            fixtures::c7_with_handle(),
            fixtures::vertex_ring_wheel(),
        ]
    }

    #[test]
    fn bare_pentagon_meets_the_initial_bound_exactly() {
        let g = fixtures::cycle(5);
        let m = capture_4cycles(&g);
        assert!(m.is_empty());
        let init = initial(&g, &m);
        let inner = g.internal_faces().next().unwrap();
        assert_eq!(init.face[inner], q(1, 1));
        assert!(init.vertex.iter().all(|&c| c == q(-1, 3)));
        assert_eq!(init.total(), q(-2, 3));
        let prim = primary(&g, &init);
        assert_eq!(prim.total(), q(-2, 3));
        assert!(prim.log.iter().all(|t| t.rule == 1));
        let rep = audit_charges(&g, &m, &WeightFunction::standard());
        let line = rep.lines_for("initcharge").next().unwrap();
        assert_eq!(line.margin, Some(Q::zero()));
    }

    #[test]
    fn prism_dangers() {
        let g = fixtures::prism();
        let d = classify_danger(&g, &BTreeSet::new());
        let inner = g.face_left_of(10, 11).or(g.face_left_of(11, 10)).unwrap();
        let inner = if g.face_length(inner) == 5 && g.face_vertex_set(inner).iter().all(|&v| v >= 10) {
            inner
        } else {
            g.face_left_of(11, 10).unwrap()
        };
        assert_eq!(d[inner].k_dangerous, Some(5));
        for f in g.internal_faces().filter(|&f| f != inner) {
            assert_eq!(d[f].k_dangerous, Some(2), "face {:?}", g.face_walks(f));
        }
    }

    #[test]
    fn prism_totals_and_rule_five() {
        let g = fixtures::prism();
        let m = BTreeSet::new();
        let init = initial(&g, &m);
        // six unit faces, five inner cubic vertices, five ring vertices of degree two
        assert_eq!(init.total(), q(6, 1) - q(5, 1) - q(5, 3));
        let prim = primary(&g, &init);
        let eps = q(2, 4113);
        let fin = final_charges(&g, &prim, eps);
        let five: Vec<_> = fin.log.iter().filter(|t| t.rule == 5).collect();
        assert_eq!(five.len(), 5);
        assert!(five.iter().all(|t| t.amount == eps * 26 && t.from.is_none()));
        assert_eq!(fin.total() - prim.total(), eps * 130);
    }

    #[test]
    fn short_cycle_subgraph_lifts_incident_faces() {
        let g = fixtures::cycle(4);
        let m = capture_4cycles(&g);
        assert_eq!(m.len(), 4);
        let init = initial(&g, &m);
        let inner = g.internal_faces().next().unwrap();
        assert_eq!(init.face[inner], q(5, 3));
        assert!(classify_danger(&g, &m).iter().all(|d| d.k_dangerous.is_none()));
    }

    #[test]
    fn vertex_ring_pays_its_cuff_face_more() {
        let g = fixtures::vertex_ring_wheel();
        let prim = primary(&g, &initial(&g, &BTreeSet::new()));
        let sent: Vec<Q> = prim.log.iter().filter(|t| t.from == Some(Site::Vertex(9))).map(|t| t.amount).collect();
        let mut sorted = sent.clone();
        sorted.sort();
        assert_eq!(sorted, vec![q(1, 3), q(1, 3), q(8, 9)]);
        assert_eq!(prim.vertex[9], q(3, 1) - q(14, 9));
        assert!(prim.vertex[9] >= q(3, 9));
    }

    #[test]
    fn conservation_and_replay_on_fixtures() {
        let eps = q(2, 4113);
        for g in fixtures_all() {
            let m = capture_4cycles(&g);
            let init = initial(&g, &m);
            let prim = primary(&g, &init);
            assert_eq!(prim.total(), init.total());
            let fin = final_charges(&g, &prim, eps);
            let n3 = (0..g.n()).filter(|&v| on_facial_ring(&g, v) && g.degree(v) == 3).count() as i64;
            assert_eq!(fin.total() - prim.total(), eps * 26 * n3);
            let r = init.replay(&fin.log);
            assert_eq!((r.vertex, r.face), (fin.vertex.clone(), fin.face.clone()));
            for x in fin.vertex.iter().chain(&fin.face) {
                assert_eq!(12339 % x.denom(), 0, "{x}");
            }
        }
    }

    #[test]
    fn prism_with_touched_pentagon_is_audited() {
        let g = fixtures::prism();
        let m: BTreeSet<Edge> = [(10, 11), (11, 12), (12, 13), (13, 14), (10, 14)].into_iter().collect();
        let rep = audit_charges(&g, &m, &WeightFunction::standard()).into_result().unwrap();
        assert_eq!(rep.lines_for("primary").filter(|l| l.outcome == Outcome::Holds).count(), 6);
        // a ring vertex of degree three: Rule 5 plus Rule 6 from its two outer faces
        let v0 = rep.lines_for("finalvertex").find(|l| l.object == "v0").unwrap();
        assert_eq!(v0.margin, Some(q(2, 4113) * 118));
        assert!(rep.lines.iter().all(|l| l.outcome != Outcome::Skipped));
    }

    #[test]
    fn audits_report_no_violation_on_fixtures() {
        let w = WeightFunction::standard();
        for g in fixtures_all() {
            let m = capture_4cycles(&g);
            let rep = audit_charges(&g, &m, &w);
            if let Err(e) = rep.clone().into_result() {
                panic!("{e}\n{rep}");
            }
        }
    }
}
