//! The twelve reducible configurations and their detection in a host graph.
//!
//! Each configuration is stored as a small text file (see `data/`) holding a
//! plane drawing by rotation, the marked faces, the degree prescription on
//! its domain, the identified set, the joined pair and the replacement paths.
//! Loading parses every file and runs a set of structural checks, so a
//! transcription slip fails loudly instead of producing a wrong reduction.

mod hosts;
mod matcher;
mod strengthen;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::graph::{EmbeddedGraph, FaceId, VertexId};

pub use hosts::canonical_host;
pub use matcher::{find_appearances, find_appearances_of, touched_by, verify, Appearance, Strength, TierFailure};
pub use strengthen::{exceptional_wheel, strengthen, StrengthenError, Strengthened, Wheel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConfigId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R6p,
    R7,
    R7p,
    R7pp,
    R7ppp,
    R7pppp,
}

impl ConfigId {
    pub const ALL: [ConfigId; 12] = [
        ConfigId::R1,
        ConfigId::R2,
        ConfigId::R3,
        ConfigId::R4,
        ConfigId::R5,
        ConfigId::R6,
        ConfigId::R6p,
        ConfigId::R7,
        ConfigId::R7p,
        ConfigId::R7pp,
        ConfigId::R7ppp,
        ConfigId::R7pppp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConfigId::R1 => "R1",
            ConfigId::R2 => "R2",
            ConfigId::R3 => "R3",
            ConfigId::R4 => "R4",
            ConfigId::R5 => "R5",
            ConfigId::R6 => "R6",
            ConfigId::R6p => "R6'",
            ConfigId::R7 => "R7",
            ConfigId::R7p => "R7'",
            ConfigId::R7pp => "R7''",
            ConfigId::R7ppp => "R7'''",
            ConfigId::R7pppp => "R7''''",
        }
    }

    pub fn from_name(s: &str) -> Option<ConfigId> {
        ConfigId::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Members of the family built around four pentagons.
    pub fn is_r7_family(self) -> bool {
        matches!(self, ConfigId::R7 | ConfigId::R7p | ConfigId::R7pp | ConfigId::R7ppp | ConfigId::R7pppp)
    }

    /// Configurations whose imprint may glue two outside vertices.
    pub fn allows_identification(self) -> bool {
        matches!(self, ConfigId::R7 | ConfigId::R7pp)
    }

    fn source(self) -> &'static str {
        match self {
            ConfigId::R1 => include_str!("data/r1.txt"),
            ConfigId::R2 => include_str!("data/r2.txt"),
            ConfigId::R3 => include_str!("data/r3.txt"),
            ConfigId::R4 => include_str!("data/r4.txt"),
            ConfigId::R5 => include_str!("data/r5.txt"),
            ConfigId::R6 => include_str!("data/r6.txt"),
            ConfigId::R6p => include_str!("data/r6p.txt"),
            ConfigId::R7 => include_str!("data/r7.txt"),
            ConfigId::R7p => include_str!("data/r7p.txt"),
            ConfigId::R7pp => include_str!("data/r7pp.txt"),
            ConfigId::R7ppp => include_str!("data/r7ppp.txt"),
            ConfigId::R7pppp => include_str!("data/r7pppp.txt"),
        }
    }
}

impl fmt::Display for ConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("{config}: line {line}: {reason}")]
    Parse { config: String, line: usize, reason: String },
    #[error("{config}: constraint `{constraint}` failed")]
    Invalid { config: String, constraint: &'static str },
}

/// A configuration: a plane graph with marked faces, a degree prescription
/// on its domain, an identified set `I` and a pair `A` to be joined.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub id: ConfigId,
    pub labels: Vec<String>,
    pub graph: EmbeddedGraph,
    /// Rotation including half-edges (`None`).
    pub stub_rotation: Vec<Vec<Option<VertexId>>>,
    pub half_edges: Vec<usize>,
    /// Marked faces, each listed with the face on its left.
    pub faces: Vec<Vec<VertexId>>,
    pub d: Vec<Option<usize>>,
    pub i_set: Vec<VertexId>,
    pub a_set: Vec<VertexId>,
    pub paths: Vec<Vec<VertexId>>,
    /// Automorphisms preserving every part of the quintuple (identity first).
    pub automorphisms: Vec<Vec<VertexId>>,
}

impl Configuration {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Vertex with the given label. Panics on a label the drawing lacks,
    /// which is a bug in the caller.
    pub fn v(&self, label: &str) -> VertexId {
        self.find(label).unwrap_or_else(|| panic!("{} has no vertex {label}", self.id))
    }

    pub fn find(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn in_dom(&self, v: VertexId) -> bool {
        self.d[v].is_some()
    }

    pub fn dom(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n()).filter(|&v| self.in_dom(v))
    }

    /// Replacement path between `u` and `v`, oriented from `u`.
    pub fn path_between(&self, u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
        self.paths.iter().find_map(|p| {
            let (a, b) = (p[0], p[p.len() - 1]);
            if a == u && b == v {
                Some(p.clone())
            } else if a == v && b == u {
                Some(p.iter().rev().copied().collect())
            } else {
                None
            }
        })
    }

    /// Pairs outside the domain that an imprint may glue together.
    pub fn identifiable_pairs(&self) -> Vec<(VertexId, VertexId)> {
        if !self.id.allows_identification() {
            return Vec::new();
        }
        let outside: Vec<VertexId> = (0..self.n()).filter(|&v| !self.in_dom(v)).collect();
        let mut out = Vec::new();
        for (i, &a) in outside.iter().enumerate() {
            let dist = self.graph.bfs(a);
            for &b in &outside[i + 1..] {
                if dist[b].is_none_or(|k| k >= 5) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Faces of the drawing that are marked.
    pub fn marked_face_ids(&self) -> BTreeSet<FaceId> {
        self.faces.iter().filter_map(|f| self.graph.face_left_of(f[0], f[1])).collect()
    }
}

static CATALOG: OnceLock<Vec<Configuration>> = OnceLock::new();

/// The twelve configurations in catalogue order. Parsed and validated once;
/// an invalid data file is a build defect and panics with the failed check.
pub fn catalog() -> &'static [Configuration] {
    CATALOG.get_or_init(|| load_catalog().unwrap_or_else(|e| panic!("catalog data is invalid: {e}")))
}

pub fn config(id: ConfigId) -> &'static Configuration {
    &catalog()[ConfigId::ALL.iter().position(|&c| c == id).expect("listed id")]
}

/// Parses and validates every data file.
pub fn load_catalog() -> Result<Vec<Configuration>, CatalogError> {
    ConfigId::ALL
        .iter()
        .map(|&id| {
            let mut c = parse_config(id, id.source())?;
            validate(&c)?;
            c.automorphisms = matcher::automorphisms(&c);
            Ok(c)
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Vertices,
    Rotation,
    HalfEdges,
    Faces,
    DMap,
    ISet,
    ASet,
    Paths,
}

/// Parses one configuration file.
pub fn parse_config(id: ConfigId, text: &str) -> Result<Configuration, CatalogError> {
    let err = |line: usize, reason: String| CatalogError::Parse { config: id.name().to_string(), line, reason };
    let mut section = Section::None;
    let mut labels: Vec<String> = Vec::new();
    let mut rot_lines: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut half: Vec<(usize, String, usize)> = Vec::new();
    let mut faces: Vec<(usize, Vec<String>)> = Vec::new();
    let mut dmap: Vec<(usize, String, usize)> = Vec::new();
    let mut iset: Vec<(usize, String)> = Vec::new();
    let mut aset: Vec<(usize, String)> = Vec::new();
    let mut paths: Vec<(usize, Vec<String>)> = Vec::new();
    let mut name = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let next = match words[0] {
            "NAME" => {
                name = words.get(1).map(|s| s.to_string());
                continue;
            }
            "VERTICES" => Some(Section::Vertices),
            "ROTATION" => Some(Section::Rotation),
            "HALFEDGES" => Some(Section::HalfEdges),
            "FACES_F" => Some(Section::Faces),
            "DMAP" => Some(Section::DMap),
            "ISET" => Some(Section::ISet),
            "ASET" => Some(Section::ASet),
            "REPLACEMENT_PATHS" => Some(Section::Paths),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let owned = |ws: &[&str]| ws.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let number = |s: &str| s.parse::<usize>().map_err(|_| err(ln, format!("bad number `{s}`")));
        match section {
            Section::None => return Err(err(ln, "content outside a section".into())),
            Section::Vertices => labels.extend(owned(&words)),
            Section::Rotation => {
                let head = words[0].strip_suffix(':').ok_or_else(|| err(ln, "rotation line needs `v:`".into()))?;
                rot_lines.push((ln, head.to_string(), owned(&words[1..])));
            }
            Section::HalfEdges | Section::DMap => {
                if words.len() != 2 {
                    return Err(err(ln, "expected `vertex count`".into()));
                }
                let entry = (ln, words[0].to_string(), number(words[1])?);
                if section == Section::HalfEdges {
                    half.push(entry);
                } else {
                    dmap.push(entry);
                }
            }
            Section::Faces => faces.push((ln, owned(&words))),
            Section::ISet => iset.extend(words.iter().map(|w| (ln, w.to_string()))),
            Section::ASet => aset.extend(words.iter().map(|w| (ln, w.to_string()))),
            Section::Paths => paths.push((ln, owned(&words))),
        }
    }
    if name.as_deref() != Some(id.name()) {
        return Err(err(0, format!("NAME should be {}", id.name())));
    }
    let index =
        |ln: usize, l: &str| labels.iter().position(|x| x == l).ok_or_else(|| err(ln, format!("unknown vertex `{l}`")));
    let n = labels.len();
    let mut stub_rotation: Vec<Option<Vec<Option<VertexId>>>> = vec![None; n];
    for (ln, head, nbrs) in &rot_lines {
        let v = index(*ln, head)?;
        let rot = nbrs
            .iter()
            .map(|w| if w == "*" { Ok(None) } else { index(*ln, w).map(Some) })
            .collect::<Result<Vec<_>, _>>()?;
        if stub_rotation[v].replace(rot).is_some() {
            return Err(err(*ln, format!("second rotation for `{head}`")));
        }
    }
    let stub_rotation: Vec<Vec<Option<VertexId>>> = stub_rotation
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| err(0, format!("no rotation for `{}`", labels[v]))))
        .collect::<Result<_, _>>()?;
    let rotation: Vec<Vec<VertexId>> = stub_rotation.iter().map(|r| r.iter().flatten().copied().collect()).collect();
    let graph = EmbeddedGraph::build(rotation, Vec::new()).map_err(|e| err(0, format!("drawing: {e}")))?;
    let mut half_edges = vec![0; n];
    for (ln, l, k) in &half {
        half_edges[index(*ln, l)?] = *k;
    }
    let mut d = vec![None; n];
    for (ln, l, k) in &dmap {
        d[index(*ln, l)?] = Some(*k);
    }
    let list = |items: &[(usize, Vec<String>)]| -> Result<Vec<Vec<VertexId>>, CatalogError> {
        items.iter().map(|(ln, ws)| ws.iter().map(|w| index(*ln, w)).collect()).collect()
    };
    let set = |items: &[(usize, String)]| -> Result<Vec<VertexId>, CatalogError> {
        items.iter().map(|(ln, w)| index(*ln, w)).collect()
    };
    Ok(Configuration {
        id,
        graph,
        stub_rotation,
        half_edges,
        faces: list(&faces)?,
        d,
        i_set: set(&iset)?,
        a_set: set(&aset)?,
        paths: list(&paths)?,
        labels,
        automorphisms: Vec::new(),
    })
}

/// A named structural check on a parsed configuration.
pub struct Constraint {
    pub id: &'static str,
    pub applies: fn(ConfigId) -> bool,
    pub check: fn(&Configuration) -> bool,
}

fn all(_: ConfigId) -> bool {
    true
}

fn adj(c: &Configuration, a: &str, b: &str) -> bool {
    match (c.find(a), c.find(b)) {
        (Some(u), Some(v)) => c.graph.adjacent(u, v),
        _ => false,
    }
}

fn labelled(c: &Configuration, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| c.label(v).to_string()).collect()
}

fn same_set(c: &Configuration, vs: &[VertexId], want: &[&str]) -> bool {
    let mut a = labelled(c, vs);
    let mut b: Vec<String> = want.iter().map(|s| s.to_string()).collect();
    a.sort();
    b.sort();
    a == b
}

fn has_path(c: &Configuration, p: &[&str]) -> bool {
    let Some(vs) = p.iter().map(|l| c.find(l)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    c.path_between(vs[0], vs[vs.len() - 1]).is_some_and(|q| q == vs)
}

fn is_cycle_of(c: &Configuration, prefix: &str, k: usize) -> bool {
    let vs: Option<Vec<VertexId>> = (1..=k).map(|i| c.find(&format!("{prefix}{i}"))).collect();
    vs.is_some_and(|vs| c.graph.is_cycle(&vs))
}

/// Unique shortest path check by counting shortest paths.
fn unique_shortest(g: &EmbeddedGraph, p: &[VertexId]) -> bool {
    let (s, t) = (p[0], p[p.len() - 1]);
    let dist = g.bfs(s);
    if dist[t] != Some(p.len() - 1) {
        return false;
    }
    let mut count = vec![0u64; g.n()];
    count[s] = 1;
    let mut order: Vec<VertexId> = (0..g.n()).filter(|&v| dist[v].is_some()).collect();
    order.sort_by_key(|&v| dist[v]);
    for &v in &order {
        for &u in g.neighbors(v) {
            if dist[u] == dist[v].map(|k| k + 1) {
                count[u] += count[v];
            }
        }
    }
    count[t] == 1 && p.windows(2).all(|w| g.adjacent(w[0], w[1]))
}

pub fn constraints() -> Vec<Constraint> {
    use ConfigId::*;
    vec![
        Constraint { id: "joined pair has size zero or two", applies: all, check: |c| matches!(c.a_set.len(), 0 | 2) },
        Constraint {
            id: "prescribed degree counts edges and half-edges",
            applies: all,
            check: |c| c.dom().all(|v| c.d[v] == Some(c.graph.degree(v) + c.half_edges[v]) && c.d[v] >= Some(3)),
        },
        Constraint {
            id: "half-edges sit only at domain vertices",
            applies: all,
            check: |c| {
                (0..c.n()).all(|v| {
                    let stubs = c.stub_rotation[v].iter().filter(|x| x.is_none()).count();
                    stubs == c.half_edges[v] && (stubs == 0 || c.in_dom(v))
                })
            },
        },
        Constraint {
            id: "marked faces are faces of the drawing",
            applies: all,
            check: |c| {
                c.faces.iter().all(|f| {
                    c.graph.face_left_of(f[0], f[1]).is_some_and(|id| {
                        let walk = c.graph.face_cycle(id);
                        c.graph.face(id).walks.len() == 1 && walk.len() == f.len() && {
                            let k = f.len();
                            let start = walk.iter().position(|&x| x == f[0]).unwrap_or(0);
                            (0..k).all(|i| walk[(start + i) % k] == f[i])
                        }
                    })
                })
            },
        },
        Constraint {
            id: "faces without half-edges inside are the marked ones",
            applies: all,
            check: |c| {
                let marked = c.marked_face_ids();
                // a half-edge lies in the face entered just before it in rotation order
                let mut with_stub = BTreeSet::new();
                for (v, rot) in c.stub_rotation.iter().enumerate() {
                    let k = rot.len();
                    for i in 0..k {
                        if rot[i].is_none() {
                            let prev = (1..k).map(|j| rot[(i + k - j) % k]).find_map(|x| x);
                            if let Some(u) = prev {
                                // face left of v->u is followed counter-clockwise by the stub
                                with_stub.insert(c.graph.face_left_of(u, v).expect("edge"));
                            }
                        }
                    }
                }
                marked.is_disjoint(&with_stub)
            },
        },
        Constraint {
            id: "identified set avoids the domain",
            applies: all,
            check: |c| c.i_set.iter().chain(c.a_set.iter()).all(|&v| !c.in_dom(v)),
        },
        Constraint {
            id: "every pair of the identified set and the joined pair has a replacement path",
            applies: all,
            check: |c| {
                let pairs_i =
                    c.i_set.iter().enumerate().flat_map(|(i, &u)| c.i_set[i + 1..].iter().map(move |&v| (u, v)));
                let mut ok = pairs_i.clone().all(|(u, v)| c.path_between(u, v).is_some() || c.id == R3);
                if c.id == R3 {
                    // the three vertices around the hexagon are chained pairwise by consecutive paths
                    ok = c.paths.len() == 3;
                }
                ok && (c.a_set.len() != 2 || c.path_between(c.a_set[0], c.a_set[1]).is_some())
            },
        },
        Constraint {
            id: "replacement paths are unique shortest paths",
            applies: all,
            check: |c| c.paths.iter().all(|p| p.len() >= 2 && unique_shortest(&c.graph, p)),
        },
        Constraint {
            id: "replacement paths run through the domain or a single outside vertex",
            applies: all,
            check: |c| c.paths.iter().all(|p| p[1..p.len() - 1].iter().filter(|&&v| !c.in_dom(v)).count() <= 1),
        },
        Constraint { id: "drawing is connected", applies: all, check: |c| c.graph.is_connected() },
        Constraint {
            id: "no cycle shorter than five",
            applies: all,
            check: |c| c.graph.girth().is_none_or(|k| k >= 5),
        },
        Constraint {
            id: "R7 admits a glued imprint",
            applies: |id| id == R7,
            check: |c| !c.identifiable_pairs().is_empty(),
        },
        // shape constraints, one per configuration
        Constraint {
            id: "R1: pentagon of cubic vertices joined through x1 v1 v2 v3 x3",
            applies: |id| id == R1,
            check: |c| {
                is_cycle_of(c, "v", 5)
                    && c.dom().count() == 5
                    && same_set(c, &c.a_set, &["x1", "x3"])
                    && has_path(c, &["x1", "v1", "v2", "v3", "x3"])
            },
        },
        Constraint {
            id: "R2: heptagon of cubic vertices joined through x1 v1 v2 v3 x3",
            applies: |id| id == R2,
            check: |c| {
                is_cycle_of(c, "v", 7)
                    && c.dom().count() == 7
                    && same_set(c, &c.a_set, &["x1", "x3"])
                    && has_path(c, &["x1", "v1", "v2", "v3", "x3"])
            },
        },
        Constraint {
            id: "R3: one marked hexagon with alternate vertices identified",
            applies: |id| id == R3,
            check: |c| {
                c.faces.len() == 1
                    && c.faces[0].len() == 6
                    && same_set(c, &c.i_set, &["v1", "v3", "v5"])
                    && !c.in_dom(c.v("v4"))
                    && !c.in_dom(c.v("v6"))
                    && adj(c, "x2", "v2")
                    && c.in_dom(c.v("x2"))
            },
        },
        Constraint {
            id: "R4: v2 is free, z is adjacent to x4 and x5, and v2 v1 v5 x5 is a replacement path",
            applies: |id| id == R4,
            check: |c| {
                !c.in_dom(c.v("v2"))
                    && adj(c, "z", "x4")
                    && adj(c, "z", "x5")
                    && has_path(c, &["v2", "v1", "v5", "x5"])
                    && has_path(c, &["x4", "z", "x5"])
                    && has_path(c, &["x1", "v1", "v2", "v3", "x3"])
                    && c.faces.len() == 2
            },
        },
        Constraint {
            id: "R5: octagon with A = {v2, x8} and I = {v4, x6}",
            applies: |id| id == R5,
            check: |c| {
                is_cycle_of(c, "v", 8)
                    && same_set(c, &c.a_set, &["v2", "x8"])
                    && same_set(c, &c.i_set, &["v4", "x6"])
                    && has_path(c, &["v2", "v1", "v8", "x8"])
                    && has_path(c, &["v4", "v5", "v6", "x6"])
                    && !c.in_dom(c.v("v4"))
            },
        },
        Constraint {
            id: "R6: two pentagons on the chord v1 v5 with A = {x1, x5}",
            applies: |id| id == R6 || id == R6p,
            check: |c| {
                is_cycle_of(c, "v", 8)
                    && adj(c, "v1", "v5")
                    && same_set(c, &c.a_set, &["x1", "x5"])
                    && c.d[c.v("v1")] == Some(4)
                    && c.d[c.v("v5")] == Some(4)
                    && adj(c, "v3", "v7") == (c.id == R6p)
            },
        },
        Constraint {
            id: "R7: vertices v1..v12, z adjacent to x6 and x7, I = {x6, x7}",
            applies: |id| id == R7,
            check: |c| {
                (1..=12).all(|i| c.find(&format!("v{i}")).is_some())
                    && adj(c, "z", "x6")
                    && adj(c, "z", "x7")
                    && same_set(c, &c.i_set, &["x6", "x7"])
                    && same_set(c, &c.a_set, &["x1", "x3"])
                    && c.faces.len() == 5
            },
        },
        Constraint {
            id: "R7 family: v11 and v12 are cubic and adjacent",
            applies: ConfigId::is_r7_family,
            check: |c| adj(c, "v11", "v12") && c.d[c.v("v11")] == Some(3) && c.d[c.v("v12")] == Some(3),
        },
        Constraint {
            id: "R7': edge v2 v7 and A = {x1, x9}",
            applies: |id| id == R7p,
            check: |c| adj(c, "v2", "v7") && same_set(c, &c.a_set, &["x1", "x9"]) && c.i_set.is_empty(),
        },
        Constraint {
            id: "R7'': edge v4 v10",
            applies: |id| id == R7pp,
            check: |c| adj(c, "v4", "v10") && same_set(c, &c.a_set, &["x1", "x3"]),
        },
        Constraint {
            id: "R7''': edge v5 v10",
            applies: |id| id == R7ppp,
            check: |c| adj(c, "v5", "v10") && same_set(c, &c.a_set, &["x1", "x3"]),
        },
        Constraint {
            id: "R7'''': edge v1 v5 and A = {x3, v6}",
            applies: |id| id == R7pppp,
            check: |c| {
                adj(c, "v1", "v5") && same_set(c, &c.a_set, &["x3", "v6"]) && has_path(c, &["x3", "v3", "v12", "v6"])
            },
        },
    ]
}

/// Runs every applicable constraint.
pub fn validate(c: &Configuration) -> Result<(), CatalogError> {
    for k in constraints() {
        if (k.applies)(c.id) && !(k.check)(c) {
            return Err(CatalogError::Invalid { config: c.id.name().to_string(), constraint: k.id });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_twelve_load() {
        let cat = load_catalog().unwrap();
        assert_eq!(cat.len(), 12);
        let names: Vec<_> = cat.iter().map(|c| c.id.name()).collect();
        assert_eq!(names, ["R1", "R2", "R3", "R4", "R5", "R6", "R6'", "R7", "R7'", "R7''", "R7'''", "R7''''"]);
    }

    #[test]
    fn r1_shape() {
        let c = config(ConfigId::R1);
        assert_eq!(c.dom().count(), 5);
        assert!(c.dom().all(|v| c.d[v] == Some(3)));
        assert!(c.i_set.is_empty());
        assert_eq!(labelled(c, &c.a_set), ["x1", "x3"]);
        // x2, x4, x5 are half-edges
        assert_eq!(c.half_edges.iter().sum::<usize>(), 3);
    }

    #[test]
    fn r5_shape() {
        let c = config(ConfigId::R5);
        assert!(is_cycle_of(c, "v", 8));
        assert!(same_set(c, &c.a_set, &["v2", "x8"]));
        assert!(same_set(c, &c.i_set, &["v4", "x6"]));
    }

    #[test]
    fn r3_shape() {
        let c = config(ConfigId::R3);
        assert_eq!(c.i_set.len(), 3);
        assert_eq!(c.faces.len(), 1);
        assert_eq!(c.faces[0].len(), 6);
    }

    #[test]
    fn only_r7_variants_glue() {
        for c in catalog() {
            assert_eq!(!c.identifiable_pairs().is_empty(), c.id == ConfigId::R7, "{}", c.id);
        }
    }

    #[test]
    fn corrupted_file_is_rejected() {
        let text = ConfigId::R4.source().replace("v2 v1 v5 x5", "v2 v3 v4 v5 x5");
        let c = parse_config(ConfigId::R4, &text).unwrap();
        assert!(matches!(validate(&c), Err(CatalogError::Invalid { .. })));
        let text = ConfigId::R1.source().replace("v1 3", "v1 4");
        let c = parse_config(ConfigId::R1, &text).unwrap();
        assert!(validate(&c).is_err());
        assert!(parse_config(ConfigId::R1, "NAME R1\nVERTICES\na\nROTATION\nb: a\n").is_err());
    }

    #[test]
    fn automorphism_counts() {
        let count = |id| config(id).automorphisms.len();
        // R1 and R2 are symmetric under the reflection through v2
        assert_eq!(count(ConfigId::R1), 2);
        assert_eq!(count(ConfigId::R2), 2);
        assert_eq!(count(ConfigId::R6), 4);
        assert_eq!(count(ConfigId::R6p), 4);
        assert_eq!(count(ConfigId::R7), 1);
    }
}
