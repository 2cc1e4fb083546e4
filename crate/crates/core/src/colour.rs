//! Maximum cliques, exact chromatic number, and colouring of class members.
//!
//! The chromatic number is found by DSATUR-ordered branch and bound, seeded
//! with the clique number as lower bound and a greedy DSATUR colouring as
//! upper bound. This is exponential in the worst case; at the sizes this
//! crate handles it is fast, and a node budget turns a hard instance into
//! an interval instead of a wrong answer.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::graph::{Graph, VertexSet};
use crate::pattern::Occurrence;
use crate::synth::{synthesize, PerfectCertificate, SynthError, Synthesis, SynthesisResult};

/// Largest clique by Bron–Kerbosch with pivoting.
pub fn max_clique(g: &Graph) -> (usize, VertexSet) {
    fn expand(g: &Graph, r: &mut Vec<usize>, mut p: Bits, mut x: Bits, best: &mut Vec<usize>) {
        if p.is_empty() {
            if x.is_empty() && r.len() > best.len() {
                *best = r.clone();
            }
            return;
        }
        if r.len() + p.count() <= best.len() {
            return;
        }
        // Pivot with the most neighbours in P.
        let mut px = p.clone();
        px.union_with(&x);
        let pivot = px.iter().max_by_key(|&u| g.row(u).intersection_count(&p)).expect("non-empty");
        let mut cand = p.clone();
        cand.difference_with(g.row(pivot));
        for v in cand.iter().collect::<Vec<_>>() {
            r.push(v);
            let mut np = p.clone();
            np.intersect_with(g.row(v));
            let mut nx = x.clone();
            nx.intersect_with(g.row(v));
            expand(g, r, np, nx, best);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    let n = g.n();
    let mut best = Vec::new();
    expand(g, &mut Vec::new(), Bits::full(n), Bits::new(n), &mut best);
    best.sort_unstable();
    (best.len(), VertexSet::from(best))
}

/// Renumber colours by first occurrence in vertex order.
pub fn canonical_colours(assignment: &[usize]) -> Vec<usize> {
    let mut map: Vec<Option<usize>> = vec![None; assignment.iter().max().map_or(0, |m| m + 1)];
    let mut next = 0;
    assignment
        .iter()
        .map(|&c| {
            *map[c].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

pub fn is_proper(g: &Graph, assignment: &[usize]) -> bool {
    assignment.len() == g.n() && g.edges().all(|(u, v)| assignment[u] != assignment[v])
}

/// Greedy DSATUR colouring.
pub fn dsatur(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colour: Vec<Option<usize>> = vec![None; n];
    let mut seen: Vec<Vec<bool>> = vec![Vec::new(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colour[v].is_none())
            .max_by_key(|&v| (seen[v].iter().filter(|&&b| b).count(), g.degree(v), core::cmp::Reverse(v)))
            .expect("uncoloured vertex");
        let c = (0..).find(|&c| !seen[v].get(c).copied().unwrap_or(false)).expect("unbounded");
        colour[v] = Some(c);
        for u in g.neighbours(v) {
            if seen[u].len() <= c {
                seen[u].resize(c + 1, false);
            }
            seen[u][c] = true;
        }
    }
    colour.into_iter().map(|c| c.unwrap_or(0)).collect()
}

/// Default node budget of [`exact_chromatic`].
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Chromatic number, or an interval when the node budget runs out. The
/// assignment always uses `upper` colours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticBounds {
    pub lower: usize,
    pub upper: usize,
    pub assignment: Vec<usize>,
    pub nodes: u64,
}

impl ChromaticBounds {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.upper)
    }
}

struct Search<'a> {
    g: &'a Graph,
    colour: Vec<Option<usize>>,
    /// `sat[v][c]`: neighbours of `v` coloured `c`.
    sat: Vec<Vec<u32>>,
    best: usize,
    best_assignment: Vec<usize>,
    lower: usize,
    nodes: u64,
    budget: u64,
    out_of_budget: bool,
}

impl Search<'_> {
    fn saturation(&self, v: usize) -> usize {
        self.sat[v].iter().filter(|&&k| k > 0).count()
    }

    fn set(&mut self, v: usize, c: Option<usize>) {
        if let Some(old) = self.colour[v] {
            for u in self.g.neighbours(v) {
                self.sat[u][old] -= 1;
            }
        }
        self.colour[v] = c;
        if let Some(new) = c {
            for u in self.g.neighbours(v) {
                self.sat[u][new] += 1;
            }
        }
    }

    fn run(&mut self, coloured: usize, used: usize) {
        if self.best <= self.lower || self.out_of_budget {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.out_of_budget = true;
            return;
        }
        let n = self.g.n();
        if coloured == n {
            self.best = used;
            self.best_assignment = self.colour.iter().map(|c| c.expect("coloured")).collect();
            return;
        }
        let v = (0..n)
            .filter(|&v| self.colour[v].is_none())
            .max_by_key(|&v| {
                let free_deg = self.g.neighbours(v).filter(|&u| self.colour[u].is_none()).count();
                (self.saturation(v), free_deg, core::cmp::Reverse(v))
            })
            .expect("uncoloured vertex");
        for c in 0..=used.min(self.best.saturating_sub(2)) {
            if self.sat[v][c] > 0 {
                continue;
            }
            self.set(v, Some(c));
            self.run(coloured + 1, used.max(c + 1));
            self.set(v, None);
            if self.best <= self.lower || self.out_of_budget {
                return;
            }
        }
    }
}

/// Exact chromatic number by branch and bound. `lower` is a known lower
/// bound (such as the clique number); `upper_hint` a known colourable
/// count. Returns an interval if more than `budget` nodes are needed.
pub fn exact_chromatic(g: &Graph, lower: usize, upper_hint: Option<usize>, budget: u64) -> ChromaticBounds {
    let n = g.n();
    let greedy = dsatur(g);
    let greedy_count = greedy.iter().max().map_or(0, |m| m + 1);
    let lower = lower.max(usize::from(n > 0)).min(greedy_count);
    let mut s = Search {
        g,
        colour: vec![None; n],
        sat: vec![vec![0; greedy_count + 1]; n],
        best: greedy_count,
        best_assignment: greedy,
        lower,
        nodes: 0,
        budget,
        out_of_budget: false,
    };
    if let Some(h) = upper_hint {
        // Only prunes: search for colourings with at most `h` colours.
        s.best = s.best.min(h.max(lower) + 1);
    }
    s.run(0, 0);
    let upper = s.best_assignment.iter().max().map_or(0, |m| m + 1);
    let lower = if s.out_of_budget {
        lower
    } else if s.best < upper {
        // A wrong hint: nothing exists below the pruning bound either.
        upper.min(s.best)
    } else {
        upper
    };
    ChromaticBounds { lower, upper, assignment: canonical_colours(&s.best_assignment), nodes: s.nodes }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Branch {
    Perfect,
    BoundedCwd { width: usize, hole_length: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Perfect(PerfectCertificate),
    Synthesis(Box<SynthesisResult>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouringResult {
    pub chi: usize,
    pub omega: usize,
    /// Colour of each vertex, by vertex index.
    pub assignment: Vec<usize>,
    pub branch: Branch,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColourError {
    #[error("graph is not a class member: {0:?}")]
    NotInClass(Occurrence),
    #[error("synthesis failed: {0}")]
    Synthesis(SynthError),
    #[error("node budget exhausted: chromatic number in [{lower}, {upper}]")]
    BudgetExceeded { lower: usize, upper: usize },
    #[error("perfect branch with chi {chi} but omega {omega}")]
    PerfectMismatch { chi: usize, omega: usize },
}

/// Colour a class member through the dichotomy: a member without 5-, 6-
/// and 7-holes is perfect and must have `chi = omega`; otherwise the
/// synthesized expression is attached as the bounded clique-width
/// certificate. Both branches use the exact solver for the assignment.
pub fn colour_class_member(g: &Graph) -> Result<ColouringResult, ColourError> {
    colour_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn colour_with_budget(g: &Graph, budget: u64) -> Result<ColouringResult, ColourError> {
    let synthesis = synthesize(g).map_err(|e| match e {
        SynthError::NotInClass(w) => ColourError::NotInClass(w),
        other => ColourError::Synthesis(other),
    })?;
    let (omega, _) = max_clique(g);
    let b = exact_chromatic(g, omega, None, budget);
    let Some(chi) = b.exact() else {
        return Err(ColourError::BudgetExceeded { lower: b.lower, upper: b.upper });
    };
    let (branch, certificate) = match synthesis {
        Synthesis::Perfect(c) => {
            if chi != omega {
                return Err(ColourError::PerfectMismatch { chi, omega });
            }
            (Branch::Perfect, Certificate::Perfect(c))
        }
        Synthesis::Expression(r) => {
            (Branch::BoundedCwd { width: r.width_achieved, hole_length: r.hole_length }, Certificate::Synthesis(r))
        }
    };
    Ok(ColouringResult { chi, omega, assignment: b.assignment, branch, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.random_bool(p)).collect();
        Graph::from_edges(n, edges).unwrap()
    }

    fn oracle_clique(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|m| {
                let s: VertexSet = (0..n).filter(|&v| m >> v & 1 == 1).collect();
                g.is_clique(&s)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Smallest k with a proper k-colouring, by trying every assignment.
    fn oracle_chromatic(g: &Graph) -> usize {
        let n = g.n();
        (1..=n.max(1))
            .find(|&k| {
                let mut a = vec![0usize; n];
                loop {
                    if is_proper(g, &a) {
                        return true;
                    }
                    let mut i = 0;
                    while i < n && a[i] + 1 == k {
                        a[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        return false;
                    }
                    a[i] += 1;
                }
            })
            .unwrap_or(0)
    }

    #[test]
    fn small_cliques() {
        assert_eq!(max_clique(&Graph::cycle(5)).0, 2);
        assert_eq!(max_clique(&Graph::complete(5)).0, 5);
        assert_eq!(max_clique(&Graph::empty(0)).0, 0);
    }

    #[test]
    fn clique_matches_subset_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let g = random_graph(15, rng.random_range(0.2..0.8), &mut rng);
            let (w, s) = max_clique(&g);
            assert!(g.is_clique(&s));
            assert_eq!(w, s.len());
            assert_eq!(w, oracle_clique(&g));
        }
    }

    #[test]
    fn odd_cycles_need_three() {
        for k in [5, 7] {
            assert_eq!(exact_chromatic(&Graph::cycle(k), 2, None, DEFAULT_NODE_BUDGET).exact(), Some(3));
        }
        assert_eq!(exact_chromatic(&Graph::empty(0), 0, None, 10).exact(), Some(0));
    }

    #[test]
    fn chromatic_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.random_range(1..=9);
            let g = random_graph(n, rng.random_range(0.1..0.9), &mut rng);
            let b = exact_chromatic(&g, max_clique(&g).0, None, DEFAULT_NODE_BUDGET);
            assert!(is_proper(&g, &b.assignment));
            assert_eq!(b.exact(), Some(oracle_chromatic(&g)));
            assert_eq!(b.assignment, canonical_colours(&b.assignment));
        }
    }

    #[test]
    fn budget_gives_interval() {
        // Greedy may already be optimal; with no nodes allowed the answer is
        // either exact because lower meets upper, or an honest interval.
        let g = Graph::cycle(7).complement();
        let b = exact_chromatic(&g, 1, None, 0);
        assert!(b.lower <= b.upper);
        assert!(is_proper(&g, &b.assignment));
        assert_eq!(b.assignment.iter().max().unwrap() + 1, b.upper);
        if b.lower < b.upper {
            assert_eq!(b.exact(), None);
        }
    }

    #[test]
    fn canonical_renumbering() {
        assert_eq!(canonical_colours(&[2, 0, 2, 1]), vec![0, 1, 0, 2]);
    }

    #[test]
    fn dichotomy_branches() {
        let r = colour_class_member(&Graph::cycle(4)).unwrap();
        assert_eq!((r.chi, r.omega, r.branch.clone()), (2, 2, Branch::Perfect));
        let r = colour_class_member(&Graph::cycle(7)).unwrap();
        assert_eq!(r.chi, 3);
        assert!(matches!(r.branch, Branch::BoundedCwd { hole_length: 7, .. }));
        assert!(matches!(colour_class_member(&Graph::empty(4)), Err(ColourError::NotInClass(_))));
    }
}
