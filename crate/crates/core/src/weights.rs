//! Face weights `s(l)`, graph weight `w(G, R)` and the disk weight bounds.

use std::fmt;
use std::ops::Add;

use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

use crate::colorer::{self, CriticalityVerdict};
use crate::graph::EmbeddedGraph;
use crate::invariants::{self, Exceptional};

pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// A rational extended by negative infinity; sums absorb `NegInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    NegInf,
    Finite(Q),
}

impl Ext {
    pub fn zero() -> Self {
        Ext::Finite(Q::zero())
    }

    pub fn finite(self) -> Option<Q> {
        match self {
            Ext::Finite(x) => Some(x),
            Ext::NegInf => None,
        }
    }
}

impl From<Q> for Ext {
    fn from(x: Q) -> Self {
        Ext::Finite(x)
    }
}

impl Add for Ext {
    type Output = Ext;
    fn add(self, rhs: Ext) -> Ext {
        match (self, rhs) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(a + b),
            _ => Ext::NegInf,
        }
    }
}

impl std::iter::Sum for Ext {
    fn sum<I: Iterator<Item = Ext>>(iter: I) -> Ext {
        iter.fold(Ext::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::Finite(x) => write!(f, "{}", fmt_q(*x)),
        }
    }
}

/// `p/q` with a unit denominator printed as `p/1`, so reports parse uniformly.
pub fn fmt_q(x: Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: i64 = a.trim().parse().ok()?;
            let d: i64 = b.trim().parse().ok()?;
            (d != 0).then(|| q(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Epsilon,
    S1,
    S2,
    S3,
    S4,
    S5,
    Increasing,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::Epsilon => "epsilon",
            Condition::S1 => "S1",
            Condition::S2 => "S2",
            Condition::S3 => "S3",
            Condition::S4 => "S4",
            Condition::S5 => "S5",
            Condition::Increasing => "increasing",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight condition {0} violated: {1}")]
    ConditionViolated(Condition, String),
}

/// Face weights: a table for lengths 5..=8 and `s(l) = l - 8` beyond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    epsilon: Q,
    table: [Q; 4],
    window: usize,
}

impl WeightFunction {
    pub fn new(epsilon: Q, s5: Q, s6: Q, s7: Q, s8: Q) -> Result<Self, WeightError> {
        Self::with_window(epsilon, [s5, s6, s7, s8], 64)
    }

    /// Like [`WeightFunction::new`], with the length bound used for the
    /// exhaustive convexity check.
    pub fn with_window(epsilon: Q, table: [Q; 4], window: usize) -> Result<Self, WeightError> {
        let w = WeightFunction { epsilon, table, window: window.max(10) };
        w.validate()?;
        Ok(w)
    }

    /// The constants used for the linear bound on critical graphs.
    pub fn standard() -> Self {
        Self::new(q(2, 4113), q(4, 4113), q(72, 4113), q(540, 4113), q(2184, 4113))
            .expect("standard constants are valid")
    }

    pub fn epsilon(&self) -> Q {
        self.epsilon
    }

    /// `s(l)`; undefined below 5.
    pub fn s(&self, l: usize) -> Option<Q> {
        match l {
            0..=4 => None,
            5..=8 => Some(self.table[l - 5]),
            _ => Some(Q::from_integer(l as i64 - 8)),
        }
    }

    fn s_(&self, l: usize) -> Q {
        self.s(l).expect("length at least five")
    }

    fn validate(&self) -> Result<(), WeightError> {
        let eps = self.epsilon;
        let fail = |c, msg: String| Err(WeightError::ConditionViolated(c, msg));
        if eps <= Q::zero() {
            return fail(Condition::Epsilon, format!("epsilon = {} is not positive", fmt_q(eps)));
        }
        if self.s_(5) != eps * 2 {
            return fail(Condition::S1, format!("s(5) = {} but 2*epsilon = {}", fmt_q(self.s_(5)), fmt_q(eps * 2)));
        }
        let s2 = q(4, 9) - eps * 644;
        if self.s_(7) > s2 {
            return fail(Condition::S2, format!("s(7) = {} exceeds {}", fmt_q(self.s_(7)), fmt_q(s2)));
        }
        let slope = q(10, 9) - eps * 92;
        let s3 = slope * 8 - 8;
        if self.s_(8) > s3 {
            return fail(Condition::S3, format!("s(8) = {} exceeds {}", fmt_q(self.s_(8)), fmt_q(s3)));
        }
        // l - 8 <= (10/9 - 92 eps) l - 8 for all l >= 9 iff eps <= 1/828
        if eps > q(1, 828) {
            return fail(Condition::S3, "tail l - 8 exceeds the bound (needs epsilon <= 1/828)".into());
        }
        let s = |l| self.s_(l);
        let s4 = [
            ("14 s(5) <= s(6)", s(5) * 14 <= s(6)),
            ("135 s(5) <= s(7)", s(5) * 135 <= s(7)),
            ("4 s(6) <= s(7)", s(6) * 4 <= s(7)),
            ("3 s(7) <= s(8)", s(7) * 3 <= s(8)),
            ("2 s(8) <= s(7) + s(9)", s(8) * 2 <= s(7) + s(9)),
        ];
        if let Some((name, _)) = s4.iter().find(|(_, ok)| !ok) {
            return fail(Condition::S4, (*name).into());
        }
        for l in 5..self.window {
            if s(l + 1) <= s(l) {
                return fail(Condition::Increasing, format!("s({}) <= s({})", l + 1, l));
            }
        }
        // exhaustive window, then the tail: increments are 1 from 9 on, so
        // non-decreasing increments up to 9 settle every larger triple
        for x in 5..=self.window {
            for y in x..=self.window {
                for a in 0..=self.window - y {
                    if s(x + a) - s(x) > s(y + a) - s(y) {
                        return fail(Condition::S5, format!("x={x} y={y} a={a}"));
                    }
                }
            }
        }
        for l in 5..9 {
            if s(l + 1) - s(l) > s(l + 2) - s(l + 1) {
                return fail(Condition::S5, format!("increment at {l}"));
            }
        }
        Ok(())
    }

    /// The bound on epsilon assumed by the disk weight theorem.
    pub fn epsilon_within_theorem(&self) -> bool {
        self.epsilon <= q(1, 1278)
    }

    /// The bound on epsilon assumed by the final charge lemma.
    pub fn epsilon_within_final_charges(&self) -> bool {
        self.epsilon < q(2, 2079)
    }
}

/// `w(f)` for one internal face.
pub fn face_weight(g: &EmbeddedGraph, f: usize, w: &WeightFunction) -> Q {
    let len = g.face_length(f);
    let open = invariants::is_open_2cell(g, f);
    match w.s(len) {
        Some(s) if open => s,
        _ => Q::from_integer(len as i64),
    }
}

/// `w(G, R)`: sum of face weights over internal faces.
pub fn graph_weight(g: &EmbeddedGraph, w: &WeightFunction) -> Q {
    g.internal_faces().map(|f| face_weight(g, f, w)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub bound: Q,
    pub holds: bool,
    /// `bound - w`
    pub margin: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskReport {
    pub ring_length: usize,
    pub weight: Q,
    pub class: Exceptional,
    pub checks: Vec<BoundCheck>,
}

impl DiskReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// The strongest clause that applies.
    pub fn applicable(&self) -> Option<&BoundCheck> {
        self.checks.last()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiskBoundError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
}

/// Checks the applicable weight bounds for a plane graph with one ring that
/// is critical and has no cycle of length at most four.
pub fn check_diskgirth5(g: &EmbeddedGraph, w: &WeightFunction) -> Result<DiskReport, DiskBoundError> {
    let pre = |s: &str| DiskBoundError::PreconditionFailed(s.to_string());
    if !w.epsilon_within_theorem() {
        return Err(pre("epsilon exceeds 1/1278"));
    }
    if g.rings().len() != 1 || !g.rings()[0].is_facial() || g.num_components() != 1 {
        return Err(pre("not a plane graph with one facial ring"));
    }
    let l = g.rings()[0].len();
    if l < 5 {
        return Err(pre("ring shorter than five"));
    }
    if !g.cycles_up_to(4).is_empty() {
        return Err(pre("cycle of length at most four"));
    }
    match colorer::is_r_critical(g, 12) {
        Ok(cert) if cert.verdict == CriticalityVerdict::RCritical => {}
        Ok(_) => return Err(pre("not critical")),
        Err(e) => return Err(pre(&e.to_string())),
    }
    let report = disk_bounds(g, w);
    match report.checks.iter().find(|c| !c.holds) {
        Some(c) => {
            Err(DiskBoundError::BoundViolated(format!("{}: w = {} > {}", c.name, fmt_q(report.weight), fmt_q(c.bound))))
        }
        None => Ok(report),
    }
}

/// Evaluates every clause whose hypothesis holds, without checking
/// criticality. A clause needing `s` below 5 is reported as failing.
pub fn disk_bounds(g: &EmbeddedGraph, w: &WeightFunction) -> DiskReport {
    let l = g.rings()[0].len();
    let weight = graph_weight(g, w);
    let class = invariants::classify_exceptional(g).unwrap_or(Exceptional::None);
    let s = |k: usize| l.checked_sub(k).and_then(|m| w.s(m));
    let s5 = w.s_(5);
    let mut checks = Vec::new();
    let mut push = |name, bound: Option<Q>| {
        let (bound, holds) = match bound {
            Some(b) => (b, weight <= b),
            None => (Q::zero(), false),
        };
        checks.push(BoundCheck { name, bound, holds, margin: bound - weight });
    };
    push("s(l-3)+s(5)", s(3).map(|x| x + s5));
    if class != Exceptional::E1 {
        push("s(l-4)+2s(5)", s(4).map(|x| x + s5 * 2));
    }
    if !class.very_exceptional() {
        push("s(l-5)+5s(5)", s(5).map(|x| x + s5 * 5));
    }
    if class == Exceptional::None {
        push("s(l-5)-5s(5)", s(5).map(|x| x - s5 * 5));
    }
    DiskReport { ring_length: l, weight, class, checks }
}

/// The size bound for critical subgraphs: `(5/s(5) + 2)/3` per ring vertex.
pub fn size_factor(w: &WeightFunction) -> Q {
    (w.s_(5).recip() * 5 + Q::from_integer(2)) / 3
}

/// Formats `x` over the denominator `d` when `d * x` is an integer.
pub fn fmt_q_over(x: Q, d: i64) -> String {
    let y = x * d;
    if y.is_integer() {
        format!("{}/{}", y.to_integer(), d)
    } else {
        fmt_q(x)
    }
}

impl WeightFunction {
    /// Common denominator of the table, used for printing weights.
    pub fn denominator(&self) -> i64 {
        use num_integer::Integer;
        self.table.iter().fold(*self.epsilon.denom(), |acc, x| acc.lcm(x.denom()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn standard_constants_are_tight() {
        let w = WeightFunction::standard();
        assert_eq!(w.s(5).unwrap() * 135, w.s(7).unwrap());
        assert_eq!(w.s(9), Some(Q::from_integer(1)));
        assert_eq!(w.s(12), Some(Q::from_integer(4)));
        assert_eq!(w.s(4), None);
        assert!(w.epsilon_within_theorem());
    }

    #[test]
    fn s1_violation() {
        let e = WeightFunction::new(q(2, 4113), q(5, 4113), q(72, 4113), q(540, 4113), q(2184, 4113));
        assert!(matches!(e, Err(WeightError::ConditionViolated(Condition::S1, _))));
    }

    #[test]
    fn s4_violation() {
        let e = WeightFunction::new(q(2, 4113), q(4, 4113), q(50, 4113), q(540, 4113), q(2184, 4113));
        assert!(matches!(e, Err(WeightError::ConditionViolated(Condition::S4, _))));
    }

    #[test]
    fn size_factor_is_under_1715() {
        let f = size_factor(&WeightFunction::standard());
        // (5 * 4113/4 + 2) / 3
        assert_eq!(f, q(20573, 12));
        assert!(f <= Q::from_integer(1715));
    }

    #[test]
    fn ext_absorbs_neg_inf() {
        let a = Ext::Finite(q(1, 2));
        assert_eq!(a + Ext::NegInf, Ext::NegInf);
        assert!(Ext::NegInf < Ext::Finite(q(-1000, 1)));
        assert_eq!([a, a].into_iter().sum::<Ext>(), Ext::Finite(Q::one()));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("2/4113"), Some(q(2, 4113)));
        assert_eq!(parse_q("3"), Some(Q::from_integer(3)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(q(12, 4113)), "4/1371");
        assert_eq!(fmt_q_over(q(12, 4113), 4113), "12/4113");
        assert_eq!(WeightFunction::standard().denominator(), 4113);
    }
}
