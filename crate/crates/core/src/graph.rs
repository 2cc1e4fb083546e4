//! Immutable simple undirected graphs and relations between vertex sets.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} lies in both sets")]
    OverlappingSets(usize),
    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },
}

/// Sorted, duplicate-free list of vertex indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> core::iter::Copied<core::slice::Iter<'_, usize>> {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) {
        if let Err(pos) = self.0.binary_search(&v) {
            self.0.insert(pos, v);
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(v: [usize; N]) -> Self {
        v.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = core::iter::Copied<core::slice::Iter<'a, usize>>;
    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// Simple undirected graph on vertices `0..n` with optional external names.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<Bits>,
    names: Option<Vec<String>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n()).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph { rows: (0..n).map(|_| Bits::new(n)).collect(), names: None }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check(u)?;
            g.check(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.rows[u].insert(v);
            g.rows[v].insert(u);
        }
        Ok(g)
    }

    /// Graph whose adjacency is given by a symmetric predicate.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if adjacent(u, v) {
                    g.rows[u].insert(v);
                    g.rows[v].insert(u);
                }
            }
        }
        g
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, GraphError> {
        if names.len() != self.n() {
            return Err(GraphError::NameCount { expected: self.n(), got: names.len() });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_fn(n, |_, _| true)
    }

    /// The chordless cycle `0-1-...-(k-1)-0`.
    pub fn cycle(k: usize) -> Self {
        Graph::from_fn(k, |u, v| v - u == 1 || (u == 0 && v == k - 1 && k > 2))
    }

    pub fn path(k: usize) -> Self {
        Graph::from_fn(k, |u, v| v - u == 1)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Bits::count).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    /// Adjacency row of `v` as a bitset.
    #[inline]
    pub fn row(&self, v: usize) -> &Bits {
        &self.rows[v]
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].iter()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.rows[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// External name of `v`, falling back to its index.
    pub fn name(&self, v: usize) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => format!("{v}"),
        }
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        s.iter().try_for_each(|v| self.check(v))
    }

    /// Subgraph induced by `s`; vertex `i` of the result is `s[i]`, and its
    /// name is the name of `s[i]` in `self`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph, GraphError> {
        self.check_set(s)?;
        let verts = s.as_slice();
        let mut g = Graph::from_fn(verts.len(), |a, b| self.has_edge(verts[a], verts[b]));
        g.names = Some(verts.iter().map(|&v| self.name(v)).collect());
        Ok(g)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::from_fn(self.n(), |u, v| !self.has_edge(u, v));
        g.names = self.names.clone();
        g
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let v = s.as_slice();
        v.iter().enumerate().all(|(i, &a)| v[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        let v = s.as_slice();
        v.iter().enumerate().all(|(i, &a)| v[i + 1..].iter().all(|&b| !self.has_edge(a, b)))
    }

    /// True if the two graphs have the same vertex count and edge set.
    pub fn same_edges(&self, other: &Graph) -> bool {
        self.rows == other.rows
    }

    /// Bitset of the members of `s`, sized for this graph.
    pub fn bits_of(&self, s: &VertexSet) -> Bits {
        Bits::from_iter_cap(self.n(), s.iter())
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = Bits::new(self.n());
        let mut stack = alloc::vec![0];
        seen.insert(0);
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen.count() == self.n()
    }

    /// Relation between disjoint sets `a` and `b`, in both directions.
    pub fn relation_between(&self, a: &VertexSet, b: &VertexSet) -> Result<RelationReport, GraphError> {
        self.check_set(a)?;
        self.check_set(b)?;
        if let Some(v) = a.iter().find(|&v| b.contains(v)) {
            return Err(GraphError::OverlappingSets(v));
        }
        Ok(RelationReport { forward: self.directed(a, b), backward: self.directed(b, a) })
    }

    fn directed(&self, a: &VertexSet, b: &VertexSet) -> DirectedRelation {
        let bb = self.bits_of(b);
        let mut max_nb = 0;
        let mut max_non = 0;
        let mut all_join = true;
        let mut all_cojoin = true;
        for v in a {
            let k = self.rows[v].intersection_count(&bb);
            max_nb = max_nb.max(k);
            max_non = max_non.max(b.len() - k);
            all_join &= k == b.len();
            all_cojoin &= k == 0;
        }
        let kind = if all_join {
            Relation::Join
        } else if all_cojoin {
            Relation::CoJoin
        } else if max_nb.min(max_non) == b.len() {
            Relation::Mixed
        } else if max_nb <= max_non {
            Relation::AtMostNeighbours(max_nb)
        } else {
            Relation::AtMostNonNeighbours(max_non)
        };
        DirectedRelation { max_neighbours: max_nb, max_non_neighbours: max_non, kind }
    }
}

/// Classification of how one set sees another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "k")]
pub enum Relation {
    Join,
    CoJoin,
    /// Every vertex has at most `k` neighbours on the other side.
    AtMostNeighbours(usize),
    /// Every vertex has at most `k` non-neighbours on the other side.
    AtMostNonNeighbours(usize),
    /// Some vertex sees all of the other side and some vertex sees none of it.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedRelation {
    pub max_neighbours: usize,
    pub max_non_neighbours: usize,
    pub kind: Relation,
}

/// Relation of `a` towards `b` (`forward`) and of `b` towards `a` (`backward`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub forward: DirectedRelation,
    pub backward: DirectedRelation,
}

impl RelationReport {
    pub fn is_join(&self) -> bool {
        self.forward.max_non_neighbours == 0
    }

    pub fn is_cojoin(&self) -> bool {
        self.forward.max_neighbours == 0
    }

    /// At most `k` neighbours in both directions.
    pub fn neighbours_both(&self, k: usize) -> bool {
        self.forward.max_neighbours <= k && self.backward.max_neighbours <= k
    }

    /// At most `k` non-neighbours in both directions.
    pub fn non_neighbours_both(&self, k: usize) -> bool {
        self.forward.max_non_neighbours <= k && self.backward.max_non_neighbours <= k
    }
}
