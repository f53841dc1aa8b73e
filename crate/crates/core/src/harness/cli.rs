//! The `plane3c` command line.
//!
//! [`run`] does all the work and returns the exit code with the report, so
//! the binary only prints. Exit 0 means every check held, 1 a violation and
//! 2 a usage or parse error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::catalog::{self, exceptional_wheel, find_appearances, strengthen, Strength, Strengthened};
use crate::colorer::{extract_critical, Coloring};
use crate::colorer::{is_phi_critical, oracle_extend, solve_disk, CriticalityVerdict, ExtractError};
use crate::discharging::{audit_charges, capture_4cycles, Edge, Outcome};
use crate::graph::EmbeddedGraph;
use crate::invariants::{check_all, classify_exceptional, classify_face, planechar_case, Verdict};
use crate::reducer::reduce;
use crate::weights::{check_diskgirth5, fmt_q, fmt_q_over, graph_weight, parse_q, q, DiskBoundError, WeightFunction};

use super::file::{parse, parse_precolor, serialize, GraphFile};
use super::{enumerate_corpus, fixtures, CorpusSpec};

#[derive(Debug, Parser)]
#[command(name = "plane3c", about = "3-colouring extension for plane graphs of girth five")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Extend the precolouring of the rings.
    Color {
        file: PathBuf,
        #[arg(long)]
        precolor: Option<String>,
        #[arg(long)]
        oracle_only: bool,
    },
    /// List configuration appearances.
    FindConfigs {
        file: PathBuf,
        #[arg(long, default_value = "faint")]
        min_strength: String,
    },
    /// Apply the reduction of one appearance (an index from find-configs).
    Reduce {
        file: PathBuf,
        #[arg(long)]
        appearance: usize,
        #[arg(long)]
        precolor: Option<String>,
    },
    /// Run the discharging and audit the charge lemmas.
    AuditCharges {
        file: PathBuf,
        #[arg(long)]
        epsilon: Option<String>,
        /// `auto`, `null` or a file of `u v` edge lines.
        #[arg(long = "M", default_value = "auto")]
        m: String,
    },
    /// Weight of the internal faces and the applicable disk bound.
    Weight { file: PathBuf },
    /// Invariants, face classes and exceptional shapes.
    Classify { file: PathBuf },
    /// A critical subgraph for a precolouring that does not extend.
    ExtractCritical {
        file: PathBuf,
        #[arg(long)]
        precolor: String,
    },
    /// Disks with one facial ring, up to isomorphism.
    Enumerate {
        #[arg(long)]
        ring: usize,
        #[arg(long)]
        max_n: usize,
    },
    /// Catalogue and weight validation plus a quick acceptance pass.
    Selfcheck,
}

/// Exit code and report of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub text: String,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { code: 0, text }
    }

    fn violation(text: String) -> Self {
        Report { code: 1, text }
    }

    fn usage(text: impl Into<String>) -> Self {
        Report { code: 2, text: text.into() }
    }

    fn from_checks(mut text: String, ok: bool) -> Self {
        if !ok {
            text.push_str("VIOLATION\n");
        }
        Report { code: if ok { 0 } else { 1 }, text }
    }
}

/// Parses `args` (the program name first) and runs the command.
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Report { code, text: e.render().to_string() };
        }
    };
    match execute(cli.cmd) {
        Ok(r) => r,
        Err(r) => r,
    }
}

fn load(path: &PathBuf) -> Result<GraphFile, Report> {
    let text = std::fs::read_to_string(path).map_err(|e| Report::usage(format!("{}: {e}\n", path.display())))?;
    parse(&text).map_err(|e| Report::usage(format!("{}: {e}\n", path.display())))
}

fn precolor(f: &GraphFile, flag: &Option<String>) -> Result<Coloring, Report> {
    match (flag, &f.precolor) {
        (Some(s), _) => parse_precolor(f.graph.n(), s).map_err(|e| Report::usage(format!("--precolor: {e}\n"))),
        (None, Some(phi)) => Ok(phi.clone()),
        (None, None) => Err(Report::usage("no precolouring: pass --precolor or add a precolor line\n")),
    }
}

fn read_m(g: &EmbeddedGraph, spec: &str) -> Result<BTreeSet<Edge>, Report> {
    match spec {
        "auto" => Ok(capture_4cycles(g)),
        "null" => Ok(BTreeSet::new()),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Report::usage(format!("{path}: {e}\n")))?;
            let mut m = BTreeSet::new();
            for (i, line) in text.lines().enumerate() {
                let body = line.split('#').next().unwrap_or("").trim();
                if body.is_empty() {
                    continue;
                }
                let nums: Vec<usize> = body
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| Report::usage(format!("{path}:{}: expected `u v`\n", i + 1)))?;
                match nums[..] {
                    [u, v] if g.adjacent(u, v) => {
                        m.insert((u.min(v), u.max(v)));
                    }
                    _ => return Err(Report::usage(format!("{path}:{}: not an edge\n", i + 1))),
                }
            }
            Ok(m)
        }
    }
}

fn execute(cmd: Cmd) -> Result<Report, Report> {
    match cmd {
        Cmd::Color { file, precolor: flag, oracle_only } => {
            let f = load(&file)?;
            let g = &f.graph;
            let phi = precolor(&f, &flag)?;
            let got = if oracle_only { oracle_extend(g, &phi) } else { solve_disk(g, &phi) };
            match got.map_err(|e| Report::usage(format!("{e}\n")))? {
                None => Ok(Report::ok("NOT EXTENDABLE\n".into())),
                Some(c) => {
                    let ok = c.is_proper(g) && c.extends(g, &phi);
                    Ok(Report::from_checks(format!("EXTENDABLE\n{c}\n"), ok))
                }
            }
        }
        Cmd::FindConfigs { file, min_strength } => {
            let f = load(&file)?;
            let min = Strength::parse(&min_strength)
                .ok_or_else(|| Report::usage(format!("unknown strength `{min_strength}`\n")))?;
            let mut out = String::new();
            for (i, a) in find_appearances(&f.graph, min).iter().enumerate() {
                let _ = writeln!(out, "[{i}] {a}");
            }
            Ok(Report::ok(out))
        }
        Cmd::Reduce { file, appearance, precolor: flag } => {
            let f = load(&file)?;
            let g = &f.graph;
            let all = find_appearances(g, Strength::Faint);
            let a = all.get(appearance).ok_or_else(|| {
                Report::usage(format!("appearance {appearance} out of range ({} found)\n", all.len()))
            })?;
            let phi = match (&flag, &f.precolor) {
                (None, None) => None,
                _ => Some(precolor(&f, &flag)?),
            };
            match reduce(g, a, phi.as_ref()) {
                Err(e) => Ok(Report::violation(format!("REFUSED {a}: {e}\n"))),
                Ok(res) => {
                    let mut out = format!("{a}\ndeleted {:?}\n", res.deleted);
                    if let Some(e) = res.new_edge {
                        let _ = writeln!(out, "new edge {} {}", e.0, e.1);
                    }
                    for v in 0..res.graph.n() {
                        let _ = writeln!(out, "vertex {v} <- {}", res.old_of_new[v]);
                    }
                    out.push_str(&serialize(&GraphFile::new(res.graph)));
                    Ok(Report::ok(out))
                }
            }
        }
        Cmd::AuditCharges { file, epsilon, m } => {
            let f = load(&file)?;
            let g = &f.graph;
            let w = match epsilon {
                None => WeightFunction::standard(),
                Some(s) => {
                    let eps = parse_q(&s).ok_or_else(|| Report::usage(format!("bad epsilon `{s}`\n")))?;
                    let std = WeightFunction::standard();
                    let table = [5, 6, 7, 8].map(|l| std.s(l).expect("tabulated"));
                    let table = [eps * 2, table[1], table[2], table[3]];
                    WeightFunction::with_window(eps, table, 64)
                        .map_err(|e| Report::usage(format!("epsilon {s}: {e}\n")))?
                }
            };
            let m = read_m(g, &m)?;
            let rep = audit_charges(g, &m, &w);
            let ok = rep.lines.iter().all(|l| l.outcome != Outcome::Violated);
            Ok(Report::from_checks(rep.to_string(), ok))
        }
        Cmd::Weight { file } => {
            let f = load(&file)?;
            let g = &f.graph;
            let w = WeightFunction::standard();
            let mut out = format!("{}\n", fmt_q_over(graph_weight(g, &w), 4113));
            match check_diskgirth5(g, &w) {
                Ok(rep) => {
                    let _ = writeln!(out, "class {:?}", rep.class);
                    for c in &rep.checks {
                        let _ = writeln!(
                            out,
                            "bound {} = {} margin {}",
                            c.name,
                            fmt_q_over(c.bound, 4113),
                            fmt_q_over(c.margin, 4113)
                        );
                    }
                    Ok(Report::ok(out))
                }
                Err(DiskBoundError::PreconditionFailed(why)) => {
                    let _ = writeln!(out, "bounds not applicable: {why}");
                    Ok(Report::ok(out))
                }
                Err(e) => {
                    let _ = writeln!(out, "{e}");
                    Ok(Report::violation(out))
                }
            }
        }
        Cmd::Classify { file } => {
            let f = load(&file)?;
            let g = &f.graph;
            let mut out = String::new();
            for (inv, v) in check_all(g).entries {
                match v {
                    Verdict::Holds => {
                        let _ = writeln!(out, "{inv} holds");
                    }
                    Verdict::Fails(w) => {
                        let _ = writeln!(out, "{inv} fails {w:?}");
                    }
                }
            }
            for face in 0..g.num_faces() {
                let _ = writeln!(out, "face {face} length {} {:?}", g.face_length(face), classify_face(g, face));
            }
            if let Ok(c) = classify_exceptional(g) {
                let _ = writeln!(out, "exceptional {c:?}");
                let _ = writeln!(out, "planechar {:?}", planechar_case(g));
            }
            if let Some(wh) = exceptional_wheel(g) {
                let _ = writeln!(out, "wheel s={} cycle {:?}", wh.s, wh.cycle);
            }
            Ok(Report::ok(out))
        }
        Cmd::ExtractCritical { file, precolor: spec } => {
            let f = load(&file)?;
            let g = &f.graph;
            let phi = precolor(&f, &Some(spec))?;
            match extract_critical(g, &phi) {
                Ok((h, ids, psi)) => {
                    let cert = is_phi_critical(&h, &psi).map_err(|e| Report::usage(format!("{e}\n")))?;
                    let verified = matches!(cert.verdict, CriticalityVerdict::PhiCritical(_)) && cert.verify(&h);
                    let mut out = format!("vertices {:?}\n", ids);
                    out.push_str(&serialize(&GraphFile { graph: h, precolor: Some(psi) }));
                    Ok(Report::from_checks(out, verified))
                }
                Err(ExtractError::PrecoloringExtends) => Ok(Report::ok("EXTENDABLE\n".into())),
                Err(ExtractError::Color(e)) => Err(Report::usage(format!("{e}\n"))),
                Err(e) => Ok(Report::violation(format!("{e}\n"))),
            }
        }
        Cmd::Enumerate { ring, max_n } => {
            let gs = enumerate_corpus(&CorpusSpec::new(ring, max_n)).map_err(|e| Report::usage(format!("{e}\n")))?;
            let mut out = format!("# {} graphs\n", gs.len());
            for (i, g) in gs.into_iter().enumerate() {
                let _ = writeln!(out, "# graph {i}");
                out.push_str(&serialize(&GraphFile::new(g)));
            }
            Ok(Report::ok(out))
        }
        Cmd::Selfcheck => Ok(selfcheck()),
    }
}

/// Quick checks that each finish in well under a second.
fn selfcheck() -> Report {
    let mut out = String::new();
    let mut all = true;
    let mut check = |name: &str, ok: bool| {
        let _ = writeln!(out, "{} {name}", if ok { "PASS" } else { "FAIL" });
        all &= ok;
    };

    let loaded = catalog::load_catalog();
    check("catalogue loads", loaded.as_ref().map(|c| c.len() == 12).unwrap_or(false));
    check("catalogue validates", catalog::catalog().iter().all(|c| catalog::validate(c).is_ok()));

    let w = WeightFunction::new(q(2, 4113), q(4, 4113), q(72, 4113), q(540, 4113), q(2184, 4113));
    check("weight function validates", w.is_ok());
    let w = WeightFunction::standard();
    let s = |l| w.s(l).expect("defined");
    check("135 s(5) = s(7)", s(5) * 135 == s(7));
    check("epsilon within the disk theorem", w.epsilon_within_theorem());

    let e2 = fixtures::e2(9);
    check("E2 weight 12/4113", graph_weight(&e2, &w) == q(12, 4113));
    check("E2 meets s(l-4)+2s(5)", graph_weight(&e2, &w) == s(5) + s(5) * 2);
    let e1 = fixtures::c8_chord();
    check("E1 meets s(l-3)+s(5)", graph_weight(&e1, &w) == s(5) + s(5));

    let bad = Coloring::from_pairs(8, &[(0, 1), (1, 2), (2, 1), (3, 2), (4, 1), (5, 2), (6, 1), (7, 2)]);
    let blocked = e1.edges().iter().any(|&(u, v)| !e1.is_ring_edge(u, v) && bad.get(u) == bad.get(v));
    check("chord with equal ends does not extend", blocked && matches!(oracle_extend(&e1, &bad), Ok(None)));

    let prism = fixtures::prism();
    let wheel = find_appearances(&prism, Strength::Appears)
        .first()
        .and_then(|a| strengthen(&prism, a).ok())
        .map(|r| matches!(r, Strengthened::ExceptionalWheel(ref wh) if wh.s == 5))
        .unwrap_or(false);
    check("prism strengthens to the 5-wheel", wheel);

    for (name, g) in [("prism", fixtures::prism()), ("E2", fixtures::e2(9)), ("chord", fixtures::c8_chord())] {
        let rep = audit_charges(&g, &capture_4cycles(&g), &w);
        let conserved = rep.lines_for("conservation").all(|l| l.outcome == Outcome::Holds);
        let fine = rep.lines.iter().all(|l| l.outcome != Outcome::Violated);
        check(&format!("charges on {name}: conserved, no lemma violated"), conserved && fine);
    }

    let g = fixtures::prism_internal_spoke();
    let agree = crate::colorer::ring_precolorings(&g).iter().step_by(11).all(
        |phi| matches!((solve_disk(&g, phi), oracle_extend(&g, phi)), (Ok(a), Ok(b)) if a.is_some() == b.is_some()),
    );
    check("solver agrees with the oracle on a sample", agree);

    let five = enumerate_corpus(&CorpusSpec::new(5, 5)).map(|v| v.len()).unwrap_or(0);
    check("corpus l=5 n=5 is the bare pentagon", five == 1);
    let _ = writeln!(out, "epsilon {}", fmt_q(w.epsilon()));
    Report::from_checks(out, all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(name: &str, g: &EmbeddedGraph) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("plane3c-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::write(&p, serialize(&GraphFile::new(g.clone()))).unwrap();
        p
    }

    fn call(args: &[&str]) -> Report {
        run(std::iter::once("plane3c").chain(args.iter().copied()))
    }

    #[test]
    fn weight_of_the_tripod() {
        let p = write_tmp("e2.g5", &fixtures::e2(9));
        let r = call(&["weight", p.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{}", r.text);
        assert_eq!(r.text.lines().next(), Some("12/4113"));
    }

    #[test]
    fn chord_with_bad_precolouring() {
        // alternating colours give both ends of the chord 0-4 colour 1
        let p = write_tmp("c8.g5", &fixtures::c8_chord());
        let r = call(&["color", p.to_str().unwrap(), "--precolor", "0=1,1=2,2=1,3=2,4=1,5=2,6=1,7=2"]);
        assert_eq!(
            (r.code, r.text.as_str()),
            (
                0,
                "NOT EXTENDABLE
"
            )
        );
    }

    #[test]
    fn usage_and_parse_errors_exit_two() {
        assert_eq!(call(&["frobnicate"]).code, 2);
        assert_eq!(call(&["weight"]).code, 2);
        let dir = std::env::temp_dir().join(format!("plane3c-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("broken.g5");
        std::fs::write(&p, "g5 1\nn 2\nrot 0: 1\nrot 1:\n").unwrap();
        assert_eq!(call(&["classify", p.to_str().unwrap()]).code, 2);
        assert_eq!(call(&["enumerate", "--ring", "5", "--max-n", "40"]).code, 2);
    }

    #[test]
    fn selfcheck_passes() {
        let r = call(&["selfcheck"]);
        assert_eq!(r.code, 0, "{}", r.text);
        assert!(r.text.contains("PASS 135 s(5) = s(7)"));
    }

    #[test]
    fn find_reduce_and_audit_the_spoked_prism() {
        let p = write_tmp("spoke.g5", &fixtures::prism_internal_spoke());
        let path = p.to_str().unwrap();
        let r = call(&["find-configs", path, "--min-strength", "strong"]);
        assert_eq!(r.code, 0);
        let first = r.text.lines().next().expect("a strong appearance");
        let all = call(&["find-configs", path]);
        let idx = all
            .text
            .lines()
            .position(|l| l.split_once(' ').map(|x| x.1) == first.split_once(' ').map(|x| x.1))
            .unwrap();
        let red = call(&["reduce", path, "--appearance", &idx.to_string()]);
        assert_eq!(red.code, 0, "{}", red.text);
        assert!(red.text.contains("g5 1"));
        let aud = call(&["audit-charges", path, "--M", "null"]);
        assert_ne!(aud.code, 2, "{}", aud.text);
        assert!(aud.text.contains("initcharge"));
    }

    #[test]
    fn enumerate_and_extract() {
        let r = call(&["enumerate", "--ring", "8", "--max-n", "8"]);
        assert!(r.text.starts_with("# 2 graphs"));
        let p = write_tmp("c8b.g5", &fixtures::c8_chord());
        let g = fixtures::c8_chord();
        let phi = crate::colorer::ring_precolorings(&g)
            .into_iter()
            .find(|phi| matches!(oracle_extend(&g, phi), Ok(None)))
            .unwrap();
        let r = call(&["extract-critical", p.to_str().unwrap(), "--precolor", &phi.to_string()]);
        assert_eq!(r.code, 0, "{}", r.text);
    }
}
