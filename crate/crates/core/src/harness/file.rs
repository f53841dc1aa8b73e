//! The plain-text graph format.
//!
//! ```text
//! g5 1
//! n 5
//! rot 0: 1 4
//! ...
//! ring facial 0 1 2 3 4
//! ring vertex 7 weak cuff 3
//! precolor 0=1 1=2 2=1 3=2 4=3
//! ```
//!
//! `cuff` and `outer <u> <v>` lines are optional; `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::colorer::{Color, Coloring};
use crate::graph::{EmbeddedGraph, RingDecl, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub graph: EmbeddedGraph,
    pub precolor: Option<Coloring>,
}

fn err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError { line, reason: reason.into() }
}

fn num(line: usize, s: &str) -> Result<usize, ParseError> {
    s.parse().map_err(|_| err(line, format!("expected a number, got `{s}`")))
}

/// Parses `v=c` pairs separated by commas or whitespace.
pub fn parse_precolor(n: usize, s: &str) -> Result<Coloring, String> {
    let mut phi = Coloring::empty(n);
    for item in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let (v, c) = item.split_once('=').ok_or_else(|| format!("expected v=c, got `{item}`"))?;
        let v: VertexId = v.parse().map_err(|_| format!("bad vertex `{v}`"))?;
        let c: Color = c.parse().map_err(|_| format!("bad colour `{c}`"))?;
        if v >= n {
            return Err(format!("vertex {v} out of range"));
        }
        if !(1..=3).contains(&c) {
            return Err(format!("colour {c} not in 1..3"));
        }
        phi.set(v, c);
    }
    Ok(phi)
}

pub fn parse(text: &str) -> Result<GraphFile, ParseError> {
    let mut n: Option<usize> = None;
    let mut rotation: Vec<Option<Vec<VertexId>>> = Vec::new();
    let mut rings = Vec::new();
    let mut outer = Vec::new();
    let mut pre: Vec<(usize, String)> = Vec::new();
    let mut header = false;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !header {
            if toks != ["g5", "1"] {
                return Err(err(line, "expected header `g5 1`"));
            }
            header = true;
            continue;
        }
        match toks[0] {
            "n" => {
                if n.is_some() || toks.len() != 2 {
                    return Err(err(line, "expected a single `n <count>`"));
                }
                let k = num(line, toks[1])?;
                n = Some(k);
                rotation = vec![None; k];
            }
            "rot" => {
                let k = n.ok_or_else(|| err(line, "`rot` before `n`"))?;
                let v =
                    toks.get(1).and_then(|t| t.strip_suffix(':')).ok_or_else(|| err(line, "expected `rot <v>:`"))?;
                let v = num(line, v)?;
                if v >= k {
                    return Err(err(line, format!("vertex {v} out of range")));
                }
                if rotation[v].is_some() {
                    return Err(err(line, format!("second rotation for {v}")));
                }
                rotation[v] = Some(toks[2..].iter().map(|t| num(line, t)).collect::<Result<_, _>>()?);
            }
            "ring" => match toks.get(1).copied() {
                Some("facial") => {
                    rings.push(RingDecl::Facial(toks[2..].iter().map(|t| num(line, t)).collect::<Result<_, _>>()?));
                }
                Some("vertex") => {
                    let vertex = num(line, toks.get(2).ok_or_else(|| err(line, "missing vertex"))?)?;
                    let mut weak = false;
                    let mut cuff = None;
                    let mut rest = toks[3..].iter();
                    while let Some(&t) = rest.next() {
                        match t {
                            "weak" => weak = true,
                            "cuff" => {
                                cuff = Some(num(line, rest.next().ok_or_else(|| err(line, "missing cuff vertex"))?)?)
                            }
                            other => return Err(err(line, format!("unknown ring flag `{other}`"))),
                        }
                    }
                    rings.push(RingDecl::Vertex { vertex, weak, cuff });
                }
                _ => return Err(err(line, "expected `ring facial` or `ring vertex`")),
            },
            "outer" => {
                if toks.len() != 3 {
                    return Err(err(line, "expected `outer <u> <v>`"));
                }
                outer.push((num(line, toks[1])?, num(line, toks[2])?));
            }
            "precolor" => pre.push((line, toks[1..].join(" "))),
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }
    if !header {
        return Err(err(last.max(1), "missing header `g5 1`"));
    }
    let k = n.ok_or_else(|| err(last, "missing `n <count>`"))?;
    let rotation: Vec<Vec<VertexId>> = rotation
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| err(last, format!("no rotation for vertex {v}"))))
        .collect::<Result<_, _>>()?;
    let graph = EmbeddedGraph::build_with_outer(rotation, rings, outer).map_err(|e| err(last, e.to_string()))?;
    let precolor = if pre.is_empty() {
        None
    } else {
        let mut phi = Coloring::empty(k);
        for (line, s) in pre {
            for (v, c) in parse_precolor(k, &s).map_err(|r| err(line, r))?.colored() {
                phi.set(v, c);
            }
        }
        Some(phi)
    };
    Ok(GraphFile { graph, precolor })
}

pub fn serialize(f: &GraphFile) -> String {
    let g = &f.graph;
    let mut s = String::from("g5 1\n");
    let _ = writeln!(s, "n {}", g.n());
    for v in 0..g.n() {
        let _ = write!(s, "rot {v}:");
        for u in g.rotation(v) {
            let _ = write!(s, " {u}");
        }
        s.push('\n');
    }
    for r in g.ring_decls() {
        match r {
            RingDecl::Facial(vs) => {
                let vs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(s, "ring facial {}", vs.join(" "));
            }
            RingDecl::Vertex { vertex, weak, cuff } => {
                let _ = write!(s, "ring vertex {vertex}");
                if *weak {
                    s.push_str(" weak");
                }
                if let Some(c) = cuff {
                    let _ = write!(s, " cuff {c}");
                }
                s.push('\n');
            }
        }
    }
    for (u, v) in g.outer_choices() {
        let _ = writeln!(s, "outer {u} {v}");
    }
    if let Some(phi) = &f.precolor {
        let pairs: Vec<String> = phi.colored().map(|(v, c)| format!("{v}={c}")).collect();
        if !pairs.is_empty() {
            let _ = writeln!(s, "precolor {}", pairs.join(" "));
        }
    }
    s
}

impl GraphFile {
    pub fn new(graph: EmbeddedGraph) -> Self {
        GraphFile { graph, precolor: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures;

    const C5: &str = "g5 1\nn 5\nrot 0: 1 4\nrot 1: 2 0\nrot 2: 3 1\nrot 3: 4 2\nrot 4: 0 3\nring facial 0 1 2 3 4\n";

    #[test]
    fn pentagon_round_trips() {
        let f = parse(C5).unwrap();
        assert_eq!(f.graph.n(), 5);
        assert_eq!(serialize(&f), C5);
    }

    #[test]
    fn prism_has_seven_faces() {
        let text = serialize(&GraphFile::new(fixtures::prism()));
        let f = parse(&text).unwrap();
        assert_eq!(f.graph.num_faces(), 7);
        assert_eq!(serialize(&f), text);
    }

    #[test]
    fn comments_precolouring_and_vertex_rings() {
        let g = fixtures::vertex_ring_wheel();
        let mut f = GraphFile::new(g);
        f.precolor = Some(Coloring::from_pairs(f.graph.n(), &[(0, 1), (9, 2)]));
        let text = serialize(&f);
        assert!(text.contains("ring vertex 9 cuff 10"));
        let commented = text.replace("n 13", "n 13 # thirteen\n# a comment line");
        assert_eq!(parse(&commented).unwrap(), f);
    }

    #[test]
    fn asymmetric_rotation_is_rejected() {
        let bad = C5.replace("rot 4: 0 3", "rot 4: 0");
        assert!(parse(&bad).is_err());
    }

    #[test]
    fn bad_header_and_keyword() {
        assert_eq!(parse("g4 1\n").unwrap_err().line, 1);
        assert_eq!(parse(&C5.replace("ring facial", "ring round")).unwrap_err().line, 8);
        assert_eq!(parse(&format!("{C5}precolor 0=4\n")).unwrap_err().line, 9);
    }
}
