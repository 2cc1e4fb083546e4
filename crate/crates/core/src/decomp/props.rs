//! Executable property tables.
//!
//! Each property is a list of templates over a cycle position `i`; a
//! template is a predicate over sets addressed relative to `i`. A property
//! fails if any template fails at any `i`, passes if at least one instance
//! is non-vacuous, and is vacuous otherwise.
//!
//! Failure witnesses are small vertex sets chosen so that re-evaluating the
//! template on the decomposition restricted to the witness fails again.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

use super::{locate_forbidden, Decomposition, Family, SetId};
use crate::graph::{Graph, VertexSet};
use crate::pattern::Occurrence;

/// A set at offset `off` from the template position.
#[derive(Debug, Clone, Copy)]
struct Rel(Family, usize);

const fn t(o: usize) -> Rel {
    Rel(Family::T, o)
}
const fn x(o: usize) -> Rel {
    Rel(Family::X, o)
}
const fn y(o: usize) -> Rel {
    Rel(Family::Y, o)
}

#[derive(Debug, Clone)]
enum Pred {
    Join(Rel, Rel),
    CoJoin(Rel, Rel),
    /// Every vertex of the first set has at most `k` neighbours
    /// (`adjacent`) or non-neighbours in the union of the others.
    AtMost {
        from: Rel,
        to: Vec<Rel>,
        k: usize,
        adjacent: bool,
    },
    Empty(Rel),
    /// If all listed sets are non-empty, the consequence holds.
    If(Vec<Rel>, alloc::boxed::Box<Pred>),
    /// A vertex of the first set adjacent to `b` in the second and `c` in
    /// the third forces `b ~ c`.
    CommonNeighbours(Rel, Rel, Rel),
    /// No vertex of the first set has neighbours in both others.
    NotBoth(Rel, Rel, Rel),
    /// A vertex `y` of the first set with two non-neighbours in the second:
    /// one of them is complete to the rest of the first set, the other
    /// anticomplete to it.
    SplitPair(Rel, Rel),
    /// A vertex of the first set with neighbours in both others has a
    /// clique as its neighbourhood in their union.
    NeighbourClique(Rel, Rel, Rel),
    /// The union of the sets is a clique.
    Clique(Vec<Rel>),
}

impl Pred {
    fn rels(&self, out: &mut Vec<Rel>) {
        match self {
            Pred::Join(a, b) | Pred::CoJoin(a, b) | Pred::SplitPair(a, b) => out.extend([*a, *b]),
            Pred::AtMost { from, to, .. } => {
                out.push(*from);
                out.extend(to);
            }
            Pred::Empty(a) => out.push(*a),
            Pred::If(sets, then) => {
                out.extend(sets);
                then.rels(out);
            }
            Pred::CommonNeighbours(a, b, c) | Pred::NotBoth(a, b, c) | Pred::NeighbourClique(a, b, c) => {
                out.extend([*a, *b, *c])
            }
            Pred::Clique(sets) => out.extend(sets),
        }
    }
}

fn atmost(from: Rel, to: Rel, k: usize, adjacent: bool) -> Pred {
    Pred::AtMost { from, to: vec![to], k, adjacent }
}

fn cond(sets: &[Rel], p: Pred) -> Pred {
    Pred::If(sets.to_vec(), alloc::boxed::Box::new(p))
}

struct Property {
    id: u32,
    text: &'static str,
    templates: Vec<Pred>,
}

fn prop(id: u32, text: &'static str, templates: Vec<Pred>) -> Property {
    Property { id, text, templates }
}

/// `A <=1 B` in both directions, for each listed pair.
fn both(pairs: &[(Rel, Rel)], k: usize, adjacent: bool) -> Vec<Pred> {
    pairs.iter().flat_map(|&(a, b)| [atmost(a, b, k, adjacent), atmost(b, a, k, adjacent)]).collect()
}

use Pred::{CoJoin, Join};

fn seven_cycle_table() -> Vec<Property> {
    vec![
        prop(1, "X_i join X_{i+1}", vec![Join(x(0), x(1)), Join(x(0), x(6))]),
        prop(2, "X_i at most one neighbour in X_{i+2}, both ways", both(&[(x(0), x(2)), (x(0), x(5))], 1, true)),
        prop(3, "X_i co-join X_{i+3}", vec![CoJoin(x(0), x(3)), CoJoin(x(0), x(4))]),
        prop(
            4,
            "X_i at most one neighbour in X_{i+2} and X_{i+5} together",
            vec![Pred::AtMost { from: x(0), to: vec![x(2), x(5)], k: 1, adjacent: true }],
        ),
        prop(5, "no three consecutive non-empty X", vec![cond(&[x(0), x(1)], Pred::Empty(x(2)))]),
        prop(6, "Y_i at most one non-neighbour in Y_{i+1}, both ways", both(&[(y(0), y(1)), (y(0), y(6))], 1, false)),
        prop(
            7,
            "Y_i non-empty empties Y_{i+2}",
            vec![cond(&[y(0)], Pred::Empty(y(2))), cond(&[y(0)], Pred::Empty(y(5)))],
        ),
        prop(8, "Y_i co-join Y_{i+3}", vec![CoJoin(y(0), y(3)), CoJoin(y(0), y(4))]),
        prop(9, "Y_i join X_i and X_{i+1}", vec![Join(y(0), x(0)), Join(y(0), x(1))]),
        prop(
            10,
            "Y_i non-empty empties X_{i+2}",
            vec![cond(&[y(0)], Pred::Empty(x(2))), cond(&[y(0)], Pred::Empty(x(6)))],
        ),
        prop(11, "Y_i co-join X_{i+3}", vec![CoJoin(y(0), x(3)), CoJoin(y(0), x(5))]),
        prop(12, "Y_i co-join X_{i+4}", vec![CoJoin(y(0), x(4))]),
    ]
}

fn six_cycle_table() -> Vec<Property> {
    use Pred::{Empty, NotBoth};
    vec![
        prop(13, "T_i non-empty empties T_{i+1}", vec![cond(&[t(0)], Empty(t(1))), cond(&[t(0)], Empty(t(5)))]),
        prop(14, "T_i at most one neighbour in T_{i+2}, both ways", both(&[(t(0), t(2)), (t(0), t(4))], 1, true)),
        prop(15, "T_i non-empty empties T_{i+3}", vec![cond(&[t(0)], Empty(t(3)))]),
        prop(
            16,
            "neighbours of a T vertex in the other two T sets are adjacent",
            vec![
                Pred::CommonNeighbours(t(0), t(2), t(4)),
                Pred::CommonNeighbours(t(2), t(0), t(4)),
                Pred::CommonNeighbours(t(4), t(0), t(2)),
            ],
        ),
        prop(17, "X_i at most one non-neighbour in X_{i+1}, both ways", both(&[(x(0), x(1)), (x(0), x(5))], 1, false)),
        prop(18, "X_i at most one neighbour in X_{i+2}, both ways", both(&[(x(0), x(2)), (x(0), x(4))], 1, true)),
        prop(19, "X_i co-join X_{i+3}", vec![CoJoin(x(0), x(3))]),
        prop(20, "no three consecutive non-empty X", vec![cond(&[x(0), x(1)], Empty(x(2)))]),
        prop(21, "Y_i at most one non-neighbour in Y_{i+1}, both ways", both(&[(y(0), y(1)), (y(0), y(5))], 1, false)),
        prop(22, "Y_i non-empty empties Y_{i+2}", vec![cond(&[y(0)], Empty(y(2))), cond(&[y(0)], Empty(y(4)))]),
        prop(23, "Y_i at most one neighbour in Y_{i+3}, both ways", both(&[(y(0), y(3))], 1, true)),
        prop(24, "X_i join T_i and T_{i+1}", vec![Join(x(0), t(0)), Join(x(0), t(1))]),
        prop(25, "X_i at most one neighbour in T_{i+2}, both ways", both(&[(x(0), t(2)), (x(0), t(5))], 1, true)),
        prop(26, "X_i co-join T_{i+3} and T_{i+4}", vec![CoJoin(x(0), t(3)), CoJoin(x(0), t(4))]),
        prop(
            27,
            "X_i non-empty makes T_i co-join T_{i+2}",
            vec![cond(&[x(0)], CoJoin(t(0), t(2))), cond(&[x(0)], CoJoin(t(1), t(5)))],
        ),
        prop(
            28,
            "X_i and X_{i+1} non-empty empty T_i and T_{i+2}",
            vec![cond(&[x(0), x(1)], Empty(t(0))), cond(&[x(0), x(1)], Empty(t(2)))],
        ),
        prop(29, "T_i non-empty makes X_i co-join T_{i+2}", vec![cond(&[t(0)], CoJoin(x(0), t(2)))]),
        prop(30, "T_i non-empty makes X_{i+1} join X_{i+2}", vec![cond(&[t(0)], Join(x(1), x(2)))]),
        prop(
            31,
            "no X_i vertex sees both T_{i+2} and X_{i+2}",
            vec![NotBoth(x(0), t(2), x(2)), NotBoth(x(2), t(1), x(0))],
        ),
        prop(32, "no X_i vertex sees both X_{i+2} and T_{i+4}", vec![NotBoth(x(0), x(2), t(4))]),
        prop(33, "no X_{i+2} vertex sees both T_{i+4} and X_i", vec![NotBoth(x(2), t(4), x(0))]),
        prop(
            34,
            "X_i, T_{i+1}, T_{i+5} non-empty makes T_{i+1} co-join T_{i+5}",
            vec![cond(&[x(0), t(1), t(5)], CoJoin(t(1), t(5)))],
        ),
        prop(35, "Y_i join T_i and T_{i+2}", vec![Join(y(0), t(0)), Join(y(0), t(2))]),
        prop(36, "Y_i at most two non-neighbours in T_{i+1}", vec![atmost(y(0), t(1), 2, false)]),
        prop(37, "two non-neighbours in T_{i+1} of a Y_i vertex split Y_i", vec![Pred::SplitPair(y(0), t(1))]),
        prop(38, "Y_i co-join T_{i+3} and T_{i+5}", vec![CoJoin(y(0), t(3)), CoJoin(y(0), t(5))]),
        prop(39, "Y_i co-join T_{i+4}", vec![CoJoin(y(0), t(4))]),
        prop(40, "Y_i non-empty empties T_i or T_{i+2}", vec![cond(&[y(0), t(0)], Empty(t(2)))]),
        prop(
            41,
            "Y_i and Y_{i+1} non-empty empty T_i and T_{i+3}",
            vec![cond(&[y(0), y(1)], Empty(t(0))), cond(&[y(0), y(1)], Empty(t(3)))],
        ),
        prop(
            42,
            "Y_i with T_{i+3} or T_{i+5} non-empty makes Y_i join T_{i+1}",
            vec![cond(&[y(0), t(3)], Join(y(0), t(1))), cond(&[y(0), t(5)], Join(y(0), t(1)))],
        ),
        prop(
            43,
            "Y_{i+1} non-empty: Y_i at most one non-neighbour in T_{i+1}",
            vec![cond(&[y(1)], atmost(y(0), t(1), 1, false))],
        ),
        prop(
            44,
            "Y_i non-empty makes T_{i+1} co-join T_{i+5} and T_{i+3}",
            vec![cond(&[y(0)], CoJoin(t(1), t(5))), cond(&[y(0)], CoJoin(t(1), t(3)))],
        ),
        prop(45, "Y_i join X_i and X_{i+1}", vec![Join(y(0), x(0)), Join(y(0), x(1))]),
        prop(
            46,
            "Y_i non-empty empties X_{i+2} and X_{i+5}",
            vec![cond(&[y(0)], Empty(x(2))), cond(&[y(0)], Empty(x(5)))],
        ),
        prop(47, "Y_i co-join X_{i+3} and X_{i+4}", vec![CoJoin(y(0), x(3)), CoJoin(y(0), x(4))]),
        prop(
            48,
            "Y_i non-empty empties X_{i+2} or T_i, and X_i or T_{i+2}",
            vec![cond(&[y(0), x(2)], Empty(t(0))), cond(&[y(0), x(0)], Empty(t(2)))],
        ),
    ]
}

fn five_cycle_table() -> Vec<Property> {
    use Pred::Empty;
    vec![
        prop(49, "T_i co-join T_{i+1}", vec![CoJoin(t(0), t(1)), CoJoin(t(0), t(4))]),
        prop(50, "T_i at most one neighbour in T_{i+2}, both ways", both(&[(t(0), t(2)), (t(0), t(3))], 1, true)),
        prop(
            51,
            "T_i at most one neighbour in T_{i+2} and T_{i+3} together",
            vec![Pred::AtMost { from: t(0), to: vec![t(2), t(3)], k: 1, adjacent: true }],
        ),
        prop(52, "no three consecutive non-empty T", vec![cond(&[t(0), t(1)], Empty(t(2)))]),
        prop(53, "X_i at most one non-neighbour in X_{i+1}, both ways", both(&[(x(0), x(1)), (x(0), x(4))], 1, false)),
        prop(54, "X_i at most one neighbour in X_{i+2}, both ways", both(&[(x(0), x(2)), (x(0), x(3))], 1, true)),
        prop(55, "no three consecutive non-empty X", vec![cond(&[x(0), x(1)], Empty(x(2)))]),
        prop(
            56,
            "X_i and X_{i+1} non-empty make X_{i+3} co-join both",
            vec![cond(&[x(0), x(1)], CoJoin(x(3), x(0))), cond(&[x(0), x(1)], CoJoin(x(3), x(1)))],
        ),
        prop(57, "T_i join X_i and X_{i+4}", vec![Join(t(0), x(0)), Join(t(0), x(4))]),
        prop(58, "T_i at most one neighbour in X_{i+1}, both ways", both(&[(t(0), x(1)), (t(0), x(3))], 1, true)),
        prop(59, "T_i co-join X_{i+2}", vec![CoJoin(t(0), x(2))]),
        prop(
            60,
            "one of T_i, X_i, X_{i+1} is empty, and one of T_{i+2}, X_i, X_{i+1}",
            vec![cond(&[t(0), x(0)], Empty(x(1))), cond(&[t(2), x(0)], Empty(x(1)))],
        ),
        prop(61, "one of T_i, X_i, T_{i+1} is empty", vec![cond(&[t(0), x(0)], Empty(t(1)))]),
        prop(62, "T_{i+1} non-empty makes X_i join X_{i+1}", vec![cond(&[t(1)], Join(x(0), x(1)))]),
        prop(
            63,
            "T_{i+1} or T_{i+2} non-empty makes X_i co-join X_{i+2}",
            vec![cond(&[t(1)], CoJoin(x(0), x(2))), cond(&[t(2)], CoJoin(x(0), x(2)))],
        ),
        prop(64, "X_i non-empty makes T_i co-join T_{i+2}", vec![cond(&[x(0)], CoJoin(t(0), t(2)))]),
        prop(
            65,
            "an X_i vertex seeing X_{i+2} and T_{i+4} has a clique neighbourhood there",
            vec![Pred::NeighbourClique(x(0), x(2), t(4))],
        ),
        prop(
            66,
            "X_i, X_{i+1}, T_{i+1} non-empty form one clique",
            vec![cond(&[x(0), x(1), t(1)], Pred::Clique(vec![x(0), x(1), t(1)]))],
        ),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyEntry {
    /// `P1`..`P66`, or `obs:<name>` for the structural observations.
    pub id: String,
    pub statement: String,
    pub status: Status,
    /// Cycle position of the first failing instance.
    pub position: Option<usize>,
    pub witness: Vec<usize>,
    /// A forbidden pattern found among the cycle and the witness, which is
    /// what a proof of the property derives from a violation.
    pub predicted: Option<Occurrence>,
    #[serde(skip)]
    template: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub hole_length: usize,
    pub entries: Vec<PropertyEntry>,
}

impl PropertyReport {
    pub fn failures(&self) -> impl Iterator<Item = &PropertyEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn get(&self, id: &str) -> Option<&PropertyEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Re-evaluate a failing entry on the decomposition restricted to its
    /// witness; true when the failure reproduces.
    pub fn reverify(&self, g: &Graph, d: &Decomposition, id: &str) -> bool {
        let Some(e) = self.get(id) else { return false };
        let (Some((ti, _)), Some(pos)) = (e.template, e.position) else {
            return false;
        };
        let Some(p) = table(d.k()).into_iter().find(|p| format!("P{}", p.id) == id) else {
            return false;
        };
        let keep: BTreeSet<usize> = e.witness.iter().copied().collect();
        let ctx = Ctx { g, d, k: d.k(), keep: Some(&keep) };
        matches!(ctx.eval(&p.templates[ti], pos), Outcome::Fail(_))
    }

    /// Plain-text table: one row per property.
    pub fn render(&self, g: &Graph) -> String {
        let mut out = format!("properties around a {}-cycle\n", self.hole_length);
        for e in &self.entries {
            let status = match e.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Vacuous => "vacuous",
            };
            out.push_str(&format!("{:<22} {:<8} {}", e.id, status, e.statement));
            if e.status == Status::Fail {
                let names: Vec<String> = e.witness.iter().map(|&v| g.name(v)).collect();
                out.push_str(&format!("  [i={} witness {}]", e.position.unwrap_or(0), names.join(",")));
            }
            out.push('\n');
        }
        out
    }
}

fn table(k: usize) -> Vec<Property> {
    match k {
        7 => seven_cycle_table(),
        6 => six_cycle_table(),
        _ => five_cycle_table(),
    }
}

/// Emptiness implications of the table on a `k`-cycle, expanded over all
/// positions: (sets that are non-empty, set forced empty).
pub(crate) fn emptiness_rules(k: usize) -> Vec<(Vec<SetId>, SetId)> {
    let at = |r: &Rel, i: usize| SetId::new(r.0, (i + r.1) % k);
    let mut out = Vec::new();
    for p in table(k) {
        for tpl in &p.templates {
            let (premise, target): (&[Rel], &Rel) = match tpl {
                Pred::Empty(r) => (&[], r),
                Pred::If(sets, then) => match &**then {
                    Pred::Empty(r) => (sets, r),
                    _ => continue,
                },
                _ => continue,
            };
            for i in 0..k {
                out.push((premise.iter().map(|r| at(r, i)).collect(), at(target, i)));
            }
        }
    }
    out
}

/// A pairwise constraint from the table: `Join`/`CoJoin`, or a bound on
/// neighbours (`adjacent`) or non-neighbours of each vertex of `a` in `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PairRule {
    Join,
    CoJoin,
    AtMost { k: usize, adjacent: bool },
}

/// Pairwise constraints of the table on a `k`-cycle, expanded over all
/// positions: (sets that must be non-empty, `a`, `b`, rule).
pub(crate) fn pair_rules(k: usize) -> Vec<(Vec<SetId>, SetId, SetId, PairRule)> {
    let at = |r: &Rel, i: usize| SetId::new(r.0, (i + r.1) % k);
    let mut out = Vec::new();
    for p in table(k) {
        for tpl in &p.templates {
            let (premise, inner): (&[Rel], &Pred) = match tpl {
                Pred::If(sets, then) => (sets, then),
                other => (&[], other),
            };
            let (a, b, rule) = match inner {
                Pred::Join(a, b) => (a, b, PairRule::Join),
                Pred::CoJoin(a, b) => (a, b, PairRule::CoJoin),
                Pred::AtMost { from, to, k, adjacent } if to.len() == 1 => {
                    (from, &to[0], PairRule::AtMost { k: *k, adjacent: *adjacent })
                }
                _ => continue,
            };
            for i in 0..k {
                out.push((premise.iter().map(|r| at(r, i)).collect(), at(a, i), at(b, i), rule));
            }
        }
    }
    out
}

enum Outcome {
    Vacuous,
    Pass,
    Fail(Vec<usize>),
}

struct Ctx<'a> {
    g: &'a Graph,
    d: &'a Decomposition,
    k: usize,
    keep: Option<&'a BTreeSet<usize>>,
}

impl Ctx<'_> {
    fn set(&self, r: Rel, i: usize) -> VertexSet {
        let s = self.d.get(r.0, (i + r.1) % self.k);
        match self.keep {
            Some(keep) => s.iter().filter(|v| keep.contains(v)).collect(),
            None => s,
        }
    }

    fn eval(&self, p: &Pred, i: usize) -> Outcome {
        let g = self.g;
        match p {
            Pred::Join(a, b) | Pred::CoJoin(a, b) => {
                let want = matches!(p, Pred::Join(..));
                let (a, b) = (self.set(*a, i), self.set(*b, i));
                if a.is_empty() || b.is_empty() {
                    return Outcome::Vacuous;
                }
                for u in &a {
                    if let Some(v) = b.iter().find(|&v| g.has_edge(u, v) != want) {
                        return Outcome::Fail(vec![u, v]);
                    }
                }
                Outcome::Pass
            }
            Pred::AtMost { from, to, k, adjacent } => {
                let a = self.set(*from, i);
                let b: VertexSet = to.iter().fold(VertexSet::new(), |acc, r| acc.union(&self.set(*r, i)));
                if a.is_empty() || b.is_empty() {
                    return Outcome::Vacuous;
                }
                for u in &a {
                    let hits: Vec<usize> = b.iter().filter(|&v| g.has_edge(u, v) == *adjacent).take(k + 1).collect();
                    if hits.len() > *k {
                        let mut w = vec![u];
                        w.extend(hits);
                        return Outcome::Fail(w);
                    }
                }
                Outcome::Pass
            }
            Pred::Empty(a) => match self.set(*a, i).iter().next() {
                Some(v) => Outcome::Fail(vec![v]),
                None => Outcome::Pass,
            },
            Pred::If(sets, then) => {
                let mut reps = Vec::new();
                for r in sets {
                    match self.set(*r, i).iter().next() {
                        Some(v) => reps.push(v),
                        None => return Outcome::Vacuous,
                    }
                }
                match self.eval(then, i) {
                    Outcome::Fail(w) => {
                        reps.extend(w);
                        Outcome::Fail(reps)
                    }
                    other => other,
                }
            }
            Pred::CommonNeighbours(a, b, c) => {
                let (a, b, c) = (self.set(*a, i), self.set(*b, i), self.set(*c, i));
                if a.is_empty() || b.is_empty() || c.is_empty() {
                    return Outcome::Vacuous;
                }
                for u in &a {
                    for v in b.iter().filter(|&v| g.has_edge(u, v)) {
                        if let Some(w) = c.iter().find(|&w| g.has_edge(u, w) && !g.has_edge(v, w)) {
                            return Outcome::Fail(vec![u, v, w]);
                        }
                    }
                }
                Outcome::Pass
            }
            Pred::NotBoth(a, b, c) => {
                let (a, b, c) = (self.set(*a, i), self.set(*b, i), self.set(*c, i));
                if a.is_empty() || b.is_empty() || c.is_empty() {
                    return Outcome::Vacuous;
                }
                for u in &a {
                    let nb = b.iter().find(|&v| g.has_edge(u, v));
                    let nc = c.iter().find(|&v| g.has_edge(u, v));
                    if let (Some(v), Some(w)) = (nb, nc) {
                        return Outcome::Fail(vec![u, v, w]);
                    }
                }
                Outcome::Pass
            }
            Pred::SplitPair(ys, ts) => {
                let (ys, ts) = (self.set(*ys, i), self.set(*ts, i));
                if ys.is_empty() || ts.is_empty() {
                    return Outcome::Vacuous;
                }
                for yv in &ys {
                    let non: Vec<usize> = ts.iter().filter(|&t| !g.has_edge(yv, t)).collect();
                    for (p, &t1) in non.iter().enumerate() {
                        for &t2 in &non[p + 1..] {
                            let rest = || ys.iter().filter(move |&z| z != yv);
                            // A member of the rest against which `t` is not complete / not anticomplete.
                            let not_complete = |t: usize| rest().find(|&z| !g.has_edge(t, z));
                            let not_anti = |t: usize| rest().find(|&z| g.has_edge(t, z));
                            let split = |a: usize, b: usize| not_complete(a).is_none() && not_anti(b).is_none();
                            if !split(t1, t2) && !split(t2, t1) {
                                let mut w = vec![yv, t1, t2];
                                w.extend(
                                    [not_complete(t1), not_anti(t2), not_complete(t2), not_anti(t1)]
                                        .into_iter()
                                        .flatten(),
                                );
                                w.sort_unstable();
                                w.dedup();
                                return Outcome::Fail(w);
                            }
                        }
                    }
                }
                Outcome::Pass
            }
            Pred::NeighbourClique(a, b, c) => {
                let (a, b, c) = (self.set(*a, i), self.set(*b, i), self.set(*c, i));
                if a.is_empty() || b.is_empty() || c.is_empty() {
                    return Outcome::Vacuous;
                }
                let mut any = false;
                for u in &a {
                    let nb: Vec<usize> = b.iter().filter(|&v| g.has_edge(u, v)).collect();
                    let nc: Vec<usize> = c.iter().filter(|&v| g.has_edge(u, v)).collect();
                    if nb.is_empty() || nc.is_empty() {
                        continue;
                    }
                    any = true;
                    let all: Vec<usize> = nb.iter().chain(&nc).copied().collect();
                    for (p, &v) in all.iter().enumerate() {
                        if let Some(&w) = all[p + 1..].iter().find(|&&w| !g.has_edge(v, w)) {
                            let mut wit = vec![u, v, w, nb[0], nc[0]];
                            wit.sort_unstable();
                            wit.dedup();
                            return Outcome::Fail(wit);
                        }
                    }
                }
                if any {
                    Outcome::Pass
                } else {
                    Outcome::Vacuous
                }
            }
            Pred::Clique(sets) => {
                let all: Vec<usize> = sets.iter().flat_map(|r| self.set(*r, i).into_vec()).collect();
                for (p, &u) in all.iter().enumerate() {
                    if let Some(&v) = all[p + 1..].iter().find(|&&v| !g.has_edge(u, v)) {
                        return Outcome::Fail(vec![u, v]);
                    }
                }
                Outcome::Pass
            }
        }
    }
}

fn obs_entry(id: &str, statement: &str, failure: Option<Vec<usize>>, applies: bool) -> PropertyEntry {
    PropertyEntry {
        id: format!("obs:{id}"),
        statement: statement.into(),
        status: match (&failure, applies) {
            (Some(_), _) => Status::Fail,
            (None, true) => Status::Pass,
            (None, false) => Status::Vacuous,
        },
        position: None,
        witness: failure.unwrap_or_default(),
        predicted: None,
        template: None,
    }
}

/// Structural facts that hold around the cycle beyond the tables.
fn observations(g: &Graph, d: &Decomposition) -> Vec<PropertyEntry> {
    let sets = d.sets();
    let mut out = Vec::new();
    let mut bad = None;
    for s in sets.values() {
        let vs = s.as_slice();
        'outer: for (p, &u) in vs.iter().enumerate() {
            for &v in &vs[p + 1..] {
                if !g.has_edge(u, v) {
                    bad = Some(vec![u, v]);
                    break 'outer;
                }
            }
        }
        if bad.is_some() {
            break;
        }
    }
    out.push(obs_entry("sets-are-cliques", "every retained set is a clique", bad, !sets.is_empty()));
    let k = d.k();
    let of = |f: Family| -> Vec<usize> {
        sets.iter().filter(|(id, _)| id.family == f).flat_map(|(_, s)| s.iter()).collect()
    };
    if k == 5 {
        let ys = of(Family::Y);
        out.push(obs_entry("y-empty", "no retained Y set", ys.first().map(|&v| vec![v]), true));
        let z = d.set(SetId::bare(Family::Z));
        let tx: Vec<usize> = of(Family::T).into_iter().chain(of(Family::X)).collect();
        let fail = match (z.iter().next(), tx.first()) {
            (Some(a), Some(&b)) => Some(vec![a, b]),
            _ => None,
        };
        out.push(obs_entry("z-excludes-t-x", "a non-empty Z leaves every T and X empty", fail, !z.is_empty()));
        let r = d.set(SetId::bare(Family::R));
        let others: Vec<usize> = d.assignment.keys().copied().filter(|v| !r.contains(*v)).collect();
        let mut fail = None;
        'r: for u in &r {
            if let Some(&v) = others.iter().find(|&&v| g.has_edge(u, v)) {
                fail = Some(vec![u, v]);
                break 'r;
            }
        }
        out.push(obs_entry(
            "r-isolated",
            "R has no neighbours among the other retained sets",
            fail,
            !r.is_empty() && !others.is_empty(),
        ));
    } else {
        let z = of(Family::Z);
        out.push(obs_entry("z-empty", "no retained Z set", z.first().map(|&v| vec![v]), true));
    }
    out
}

/// Evaluate every property of the table for the hole length, followed by
/// the structural observations.
pub fn verify_properties(g: &Graph, d: &Decomposition) -> PropertyReport {
    let k = d.k();
    let ctx = Ctx { g, d, k, keep: None };
    let hole: VertexSet = d.hole.vertices().iter().copied().collect();
    let mut entries = Vec::new();
    for p in table(k) {
        let mut status = Status::Vacuous;
        let mut failure = None;
        'search: for i in 0..k {
            for (ti, tpl) in p.templates.iter().enumerate() {
                match ctx.eval(tpl, i) {
                    Outcome::Vacuous => {}
                    Outcome::Pass => status = Status::Pass,
                    Outcome::Fail(w) => {
                        failure = Some((ti, i, w));
                        break 'search;
                    }
                }
            }
        }
        let entry = match failure {
            None => PropertyEntry {
                id: format!("P{}", p.id),
                statement: p.text.into(),
                status,
                position: None,
                witness: Vec::new(),
                predicted: None,
                template: None,
            },
            Some((ti, i, w)) => {
                // Proofs may need more members of the sets involved than the
                // witness carries, so widen the search if needed.
                let near = hole.union(&w.iter().copied().collect());
                let predicted = locate_forbidden(g, &near, None, k).or_else(|| {
                    let mut rels = Vec::new();
                    p.templates[ti].rels(&mut rels);
                    let wide = rels.iter().fold(near.clone(), |acc, r| acc.union(&ctx.set(*r, i)));
                    locate_forbidden(g, &wide, None, k)
                });
                PropertyEntry {
                    id: format!("P{}", p.id),
                    statement: p.text.into(),
                    status: Status::Fail,
                    position: Some(i),
                    predicted,
                    witness: w,
                    template: Some((ti, i)),
                }
            }
        };
        entries.push(entry);
    }
    entries.extend(observations(g, d));
    PropertyReport { hole_length: k, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::classify;
    use crate::pattern::Hole;

    /// `k`-cycle on `0..k` plus cliques attached to cycle positions, with
    /// extra edges between clique members given by `cross`.
    fn planted(k: usize, sets: &[(&[usize], usize)], cross: impl Fn(usize, usize) -> bool) -> Graph {
        let mut owner: Vec<&[usize]> = Vec::new();
        let mut group: Vec<usize> = Vec::new();
        for (gi, (trace, size)) in sets.iter().enumerate() {
            for _ in 0..*size {
                owner.push(trace);
                group.push(gi);
            }
        }
        let n = k + owner.len();
        Graph::from_fn(n, |u, v| {
            if v < k {
                (u + 1) % k == v || (v + 1) % k == u
            } else if u < k {
                owner[v - k].contains(&u)
            } else {
                group[u - k] == group[v - k] || cross(u, v)
            }
        })
    }

    #[test]
    fn bare_cycles_are_vacuous() {
        for k in 5..=7 {
            let g = Graph::cycle(k);
            let d = classify(&g, &Hole((0..k).collect()), 5).unwrap();
            let r = verify_properties(&g, &d);
            let tables = r.entries.iter().filter(|e| e.id.starts_with('P'));
            for e in tables {
                assert_eq!(e.status, Status::Vacuous, "{}", e.id);
            }
            assert!(r.all_pass());
        }
        assert_eq!(
            verify_properties(&Graph::cycle(6), &classify(&Graph::cycle(6), &Hole((0..6).collect()), 5).unwrap())
                .entries
                .len(),
            36 + 2
        );
    }

    #[test]
    fn joined_consecutive_x_sets_pass() {
        // X0 = 7..12, X1 = 12..17, joined.
        let g = planted(7, &[(&[0, 1, 2], 5), (&[1, 2, 3], 5)], |u, v| u >= 7 && v >= 7);
        let d = classify(&g, &Hole((0..7).collect()), 5).unwrap();
        let r = verify_properties(&g, &d);
        assert_eq!(r.get("P1").unwrap().status, Status::Pass);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn y_with_x_two_ahead_fails() {
        // Y0 = 7..12 and X2 = 12..17, with no edges between them.
        let g = planted(7, &[(&[0, 1, 2, 3], 5), (&[2, 3, 4], 5)], |_, _| false);
        let d = classify(&g, &Hole((0..7).collect()), 5).unwrap();
        let r = verify_properties(&g, &d);
        let e = r.get("P10").unwrap();
        assert_eq!(e.status, Status::Fail);
        assert!(r.reverify(&g, &d, "P10"));
        assert!(e.predicted.as_ref().is_some_and(|o| o.verify(&g)));
    }

    #[test]
    fn witness_reverifies_for_structured_properties() {
        // Six-cycle with T0, T2, T4: a path of partners 6-11-16 without the
        // closing edge violates the common-neighbour property.
        let g = planted(6, &[(&[0, 1], 5), (&[2, 3], 5), (&[4, 5], 5)], |u, v| {
            let (u, v) = (u.min(v), u.max(v));
            (u, v) == (6, 11) || (u, v) == (6, 16)
        });
        let d = classify(&g, &Hole((0..6).collect()), 5).unwrap();
        let r = verify_properties(&g, &d);
        let e = r.get("P16").unwrap();
        assert_eq!(e.status, Status::Fail);
        assert_eq!(e.witness, vec![6, 11, 16]);
        assert!(r.reverify(&g, &d, "P16"));
    }
}
