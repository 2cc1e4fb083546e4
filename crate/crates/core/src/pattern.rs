//! Induced detection of small fixed patterns, holes and class membership.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::graph::{Graph, VertexSet};

/// The small graphs used by the class definition, plus the remaining
/// line-graph obstructions and chordless cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    Claw,
    FourK1,
    Bridge,
    C4Twin,
    P5Twin,
    C5Twin,
    CoR,
    CoA,
    FiveWheel,
    K5MinusE,
    Cycle(usize),
}

/// The four patterns whose absence defines the class.
pub const CLASS_PATTERNS: [Pattern; 4] = [Pattern::Claw, Pattern::FourK1, Pattern::Bridge, Pattern::C4Twin];

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Claw => f.write_str("claw"),
            Pattern::FourK1 => f.write_str("4K1"),
            Pattern::Bridge => f.write_str("bridge"),
            Pattern::C4Twin => f.write_str("C4-twin"),
            Pattern::P5Twin => f.write_str("P5-twin"),
            Pattern::C5Twin => f.write_str("C5-twin"),
            Pattern::CoR => f.write_str("co-R"),
            Pattern::CoA => f.write_str("co-A"),
            Pattern::FiveWheel => f.write_str("5-wheel"),
            Pattern::K5MinusE => f.write_str("K5-e"),
            Pattern::Cycle(k) => write!(f, "C{k}"),
        }
    }
}

impl Pattern {
    pub fn order(&self) -> usize {
        match self {
            Pattern::Claw | Pattern::FourK1 => 4,
            Pattern::C4Twin | Pattern::K5MinusE => 5,
            Pattern::Cycle(k) => *k,
            _ => 6,
        }
    }

    /// Template edges over `0..order`, numbered so every vertex after the
    /// first has an earlier neighbour (except in 4K1).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        // 1-based lists, shifted below.
        let one_based: &[(usize, usize)] = match self {
            Pattern::Claw => &[(1, 2), (1, 3), (1, 4)],
            Pattern::FourK1 => &[],
            Pattern::C4Twin => &[(1, 2), (1, 3), (4, 2), (4, 3), (2, 5), (3, 5), (1, 4)],
            Pattern::Bridge => {
                &[(1, 2), (1, 3), (1, 4), (4, 2), (4, 3), (1, 5), (2, 5), (4, 5), (1, 6), (3, 6), (4, 6)]
            }
            Pattern::P5Twin => &[(1, 2), (1, 3), (1, 4), (4, 2), (4, 3), (2, 5), (3, 6)],
            Pattern::CoR => &[(1, 2), (1, 3), (1, 4), (4, 2), (4, 3), (1, 5), (2, 5), (4, 5), (3, 6)],
            Pattern::C5Twin => &[(1, 2), (1, 3), (4, 2), (4, 3), (2, 5), (3, 6), (5, 6), (1, 4)],
            Pattern::FiveWheel => &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3), (3, 4), (4, 5), (5, 6), (6, 2)],
            Pattern::CoA => &[(1, 2), (1, 4), (2, 3), (2, 4), (2, 5), (3, 5), (3, 6), (4, 5), (5, 6)],
            Pattern::K5MinusE => &[(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5)],
            Pattern::Cycle(k) => {
                let k = *k;
                return (0..k).map(|i| (i, (i + 1) % k)).collect();
            }
        };
        one_based.iter().map(|&(a, b)| (a - 1, b - 1)).collect()
    }

    pub fn template(&self) -> Graph {
        Graph::from_edges(self.order(), self.edges()).expect("static template")
    }
}

/// An induced copy of `pattern`: template vertex `i` maps to `vertices[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub pattern: Pattern,
    pub vertices: Vec<usize>,
}

impl Occurrence {
    /// Re-check the embedding against `g`.
    pub fn verify(&self, g: &Graph) -> bool {
        let t = self.pattern.template();
        let v = &self.vertices;
        if v.len() != t.n() || v.iter().any(|&x| x >= g.n()) {
            return false;
        }
        let distinct: VertexSet = v.iter().copied().collect();
        distinct.len() == v.len()
            && (0..v.len()).all(|i| (i + 1..v.len()).all(|j| g.has_edge(v[i], v[j]) == t.has_edge(i, j)))
    }
}

struct Matcher<'a> {
    g: &'a Graph,
    t: Graph,
    deg_ok: Vec<Bits>,
    assigned: Vec<usize>,
}

impl Matcher<'_> {
    fn search(&mut self, fixed: Option<(usize, usize)>) -> bool {
        let i = self.assigned.len();
        if i == self.t.n() {
            return true;
        }
        let mut cand = self.deg_ok[i].clone();
        for (j, &w) in self.assigned.iter().enumerate() {
            if self.t.has_edge(i, j) {
                cand.intersect_with(self.g.row(w));
            } else {
                cand.difference_with(self.g.row(w));
                cand.remove(w);
            }
        }
        if let Some((pos, v)) = fixed {
            if pos == i {
                if !cand.contains(v) {
                    return false;
                }
                cand = Bits::from_iter_cap(self.g.n(), [v]);
            } else {
                cand.remove(v);
            }
        }
        for w in cand.iter() {
            self.assigned.push(w);
            if self.search(fixed) {
                return true;
            }
            self.assigned.pop();
        }
        false
    }
}

fn matcher(g: &Graph, p: Pattern) -> Matcher<'_> {
    let t = p.template();
    let k = t.n();
    let n = g.n();
    let deg_ok = (0..k)
        .map(|i| {
            let d = t.degree(i);
            let nd = k - 1 - d;
            Bits::from_iter_cap(n, (0..n).filter(|&v| g.degree(v) >= d && n - 1 - g.degree(v) >= nd))
        })
        .collect();
    Matcher { g, t, deg_ok, assigned: Vec::with_capacity(k) }
}

/// Lexicographically smallest induced embedding of `p` in `g`, if any.
pub fn find_induced(g: &Graph, p: Pattern) -> Option<Occurrence> {
    if p.order() > g.n() {
        return None;
    }
    let mut m = matcher(g, p);
    m.search(None).then_some(Occurrence { pattern: p, vertices: m.assigned })
}

/// Smallest embedding of `p` whose image contains `v`.
pub fn find_induced_containing(g: &Graph, p: Pattern, v: usize) -> Option<Occurrence> {
    if p.order() > g.n() || v >= g.n() {
        return None;
    }
    (0..p.order())
        .filter_map(|pos| {
            let mut m = matcher(g, p);
            m.search(Some((pos, v))).then_some(m.assigned)
        })
        .min()
        .map(|vertices| Occurrence { pattern: p, vertices })
}

/// An induced cycle, listed in cyclic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hole(pub Vec<usize>);

impl Hole {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Consecutive vertices adjacent, all other pairs non-adjacent.
    pub fn is_induced_in(&self, g: &Graph) -> bool {
        let k = self.0.len();
        if k < 4 || self.0.iter().any(|&v| v >= g.n()) {
            return false;
        }
        let set: VertexSet = self.0.iter().copied().collect();
        if set.len() != k {
            return false;
        }
        (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                g.has_edge(self.0[i], self.0[j]) == consecutive
            })
        })
    }
}

/// First induced `k`-cycle in canonical order: starts at its smallest
/// vertex and proceeds towards the smaller of that vertex's two cycle
/// neighbours.
pub fn find_hole(g: &Graph, k: usize) -> Option<Hole> {
    if k < 4 || g.n() < k {
        return None;
    }
    let n = g.n();
    let mut path = Vec::with_capacity(k);
    for s in 0..n {
        let mut above = Bits::full(n);
        for v in 0..=s {
            above.remove(v);
        }
        path.clear();
        path.push(s);
        if extend_hole(g, k, &above, &mut path) {
            return Some(Hole(path));
        }
    }
    None
}

fn extend_hole(g: &Graph, k: usize, above: &Bits, path: &mut Vec<usize>) -> bool {
    let len = path.len();
    let last = path[len - 1];
    let mut cand = above.clone();
    cand.intersect_with(g.row(last));
    for &p in path.iter().take(len.saturating_sub(1)).skip(1) {
        cand.difference_with(g.row(p));
    }
    for &p in path.iter() {
        cand.remove(p);
    }
    if len + 1 == k {
        cand.intersect_with(g.row(path[0]));
        cand = Bits::from_iter_cap(g.n(), cand.iter().filter(|&w| w > path[1]));
    } else if len > 1 {
        cand.difference_with(g.row(path[0]));
    }
    for w in cand.iter() {
        path.push(w);
        if len + 1 == k || extend_hole(g, k, above, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Result of testing the four class patterns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub claw: Option<Occurrence>,
    pub four_k1: Option<Occurrence>,
    pub bridge: Option<Occurrence>,
    pub c4_twin: Option<Occurrence>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.witnesses().next().is_none()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Occurrence> {
        [&self.claw, &self.four_k1, &self.bridge, &self.c4_twin].into_iter().flatten()
    }

    pub fn first_witness(&self) -> Option<Occurrence> {
        self.witnesses().next().cloned()
    }
}

pub fn is_class_member(g: &Graph) -> Membership {
    Membership {
        claw: find_induced(g, Pattern::Claw),
        four_k1: find_induced(g, Pattern::FourK1),
        bridge: find_induced(g, Pattern::Bridge),
        c4_twin: find_induced(g, Pattern::C4Twin),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassError {
    #[error("graph contains an induced {} on {:?}", .0.pattern, .0.vertices)]
    NotInClass(Occurrence),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perfection {
    pub perfect: bool,
    pub c5_witness: Option<Hole>,
    pub c7_witness: Option<Hole>,
}

/// Within the class, perfection is equivalent to having no induced C5 or C7.
pub fn is_perfect_in_class(g: &Graph) -> Result<Perfection, ClassError> {
    if let Some(w) = is_class_member(g).first_witness() {
        return Err(ClassError::NotInClass(w));
    }
    let c5 = find_hole(g, 5);
    let c7 = find_hole(g, 7);
    Ok(Perfection { perfect: c5.is_none() && c7.is_none(), c5_witness: c5, c7_witness: c7 })
}

/// Brute-force reference: is there any induced copy of `p`? Used by tests.
pub fn naive_contains(g: &Graph, p: Pattern) -> bool {
    let k = p.order();
    let t = p.template();
    let mut perm = vec![0; k];
    fn rec(g: &Graph, t: &Graph, perm: &mut Vec<usize>, i: usize, used: u128) -> bool {
        if i == perm.len() {
            return true;
        }
        for v in 0..g.n() {
            if used >> v & 1 == 1 {
                continue;
            }
            if (0..i).all(|j| g.has_edge(perm[j], v) == t.has_edge(j, i)) {
                perm[i] = v;
                if rec(g, t, perm, i + 1, used | 1 << v) {
                    return true;
                }
            }
        }
        false
    }
    g.n() <= 128 && rec(g, &t, &mut perm, 0, 0)
}
