//! Exact clique-width of small graphs by dynamic programming over vertex
//! subsets, with a witness expression.
//!
//! A state is a subset `S` with a partition of `S` into at most `k` label
//! classes such that some `k`-expression produces exactly `G[S]` with that
//! labelling. Restricting to exact induced subgraphs loses nothing: a join
//! applied later that adds an edge inside `S` can be moved down to the top
//! of the subexpression for `S`. Classes must also be uniform towards the
//! outside of `S`, since every later operation treats a class as a whole.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{CwdExpr, Label};
use crate::graph::Graph;

/// Largest order accepted by [`exact_clique_width`].
pub const EXACT_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("exact clique-width is limited to {limit} vertices, got {n}")]
pub struct TooLarge {
    pub n: usize,
    pub limit: usize,
}

#[derive(Debug, Clone)]
pub struct ExactWidth {
    pub width: usize,
    /// An expression of that width (none for the empty graph).
    pub witness: Option<CwdExpr>,
}

type Partition = Vec<u64>;

#[derive(Clone)]
enum Origin {
    Create(usize),
    /// Union of two states, with matched classes sharing a label.
    Union {
        left: (u64, Partition),
        right: (u64, Partition),
    },
    /// Two classes of `from` merged by a relabel.
    Merge {
        from: Partition,
        a: usize,
        b: usize,
    },
}

struct Solver<'g> {
    g: &'g Graph,
    k: usize,
    adj: Vec<u64>,
    full: u64,
    reach: BTreeMap<u64, BTreeMap<Partition, Origin>>,
}

fn normalise(mut p: Partition) -> Partition {
    p.sort_unstable();
    p
}

impl Solver<'_> {
    fn outside(&self, v: usize, s: u64) -> u64 {
        self.adj[v] & !s & self.full
    }

    fn uniform_outside(&self, class: u64, s: u64) -> bool {
        let mut it = bits(class);
        let first = match it.next() {
            Some(v) => self.outside(v, s),
            None => return true,
        };
        it.all(|v| self.outside(v, s) == first)
    }

    fn complete(&self, a: u64, b: u64) -> bool {
        bits(a).all(|v| self.adj[v] & b == b)
    }

    fn insert(&mut self, s: u64, p: Partition, o: Origin) -> bool {
        let m = self.reach.entry(s).or_default();
        if m.contains_key(&p) {
            return false;
        }
        m.insert(p, o);
        true
    }

    /// Add `p` and every coarsening reachable by merging outside-equal
    /// classes.
    fn insert_closed(&mut self, s: u64, p: Partition, o: Origin) {
        if !self.insert(s, p.clone(), o) {
            return;
        }
        let mut stack = alloc::vec![p];
        while let Some(p) = stack.pop() {
            for a in 0..p.len() {
                for b in a + 1..p.len() {
                    let va = p[a].trailing_zeros() as usize;
                    let vb = p[b].trailing_zeros() as usize;
                    if self.outside(va, s) != self.outside(vb, s) {
                        continue;
                    }
                    let mut q: Partition =
                        p.iter().enumerate().filter(|&(i, _)| i != a && i != b).map(|(_, &c)| c).collect();
                    q.push(p[a] | p[b]);
                    let q = normalise(q);
                    if self.insert(s, q.clone(), Origin::Merge { from: p.clone(), a, b }) {
                        stack.push(q);
                    }
                }
            }
        }
    }

    fn combine(&mut self, s1: u64, p1: &Partition, s2: u64, p2: &Partition) {
        let s = s1 | s2;
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut used = alloc::vec![false; p2.len()];
        self.matchings(s, s1, p1, p2, 0, &mut pairs, &mut used);
    }

    #[allow(clippy::too_many_arguments)]
    fn matchings(
        &mut self,
        s: u64,
        s1: u64,
        p1: &Partition,
        p2: &Partition,
        i: usize,
        pairs: &mut Vec<(usize, usize)>,
        used: &mut Vec<bool>,
    ) {
        if p1.len() + p2.len() - pairs.len() > self.k + (p1.len() - i) {
            return;
        }
        if i == p1.len() {
            self.try_union(s, s1, p1, p2, pairs);
            return;
        }
        self.matchings(s, s1, p1, p2, i + 1, pairs, used);
        for j in 0..p2.len() {
            if !used[j] {
                used[j] = true;
                pairs.push((i, j));
                self.matchings(s, s1, p1, p2, i + 1, pairs, used);
                pairs.pop();
                used[j] = false;
            }
        }
    }

    fn try_union(&mut self, s: u64, s1: u64, p1: &Partition, p2: &Partition, pairs: &[(usize, usize)]) {
        let s2 = s & !s1;
        let mut classes: Vec<u64> = Vec::new();
        let mut matched2 = alloc::vec![false; p2.len()];
        for (i, &c) in p1.iter().enumerate() {
            match pairs.iter().find(|&&(a, _)| a == i) {
                Some(&(_, j)) => {
                    matched2[j] = true;
                    classes.push(c | p2[j]);
                }
                None => classes.push(c),
            }
        }
        for (j, &c) in p2.iter().enumerate() {
            if !matched2[j] {
                classes.push(c);
            }
        }
        if classes.len() > self.k {
            return;
        }
        for (x, &c) in classes.iter().enumerate() {
            if !self.uniform_outside(c, s) {
                return;
            }
            // No cross edge may fall inside a merged class.
            if bits(c & s1).any(|v| self.adj[v] & c & s2 != 0) {
                return;
            }
            for &d in &classes[x + 1..] {
                let cross =
                    bits(c & s1).any(|v| self.adj[v] & d & s2 != 0) || bits(c & s2).any(|v| self.adj[v] & d & s1 != 0);
                if cross && !self.complete(c, d) {
                    return;
                }
            }
        }
        let origin = Origin::Union { left: (s1, p1.clone()), right: (s2, p2.clone()) };
        self.insert_closed(s, normalise(classes), origin);
    }

    fn run(&mut self) -> bool {
        let n = self.g.n();
        for v in 0..n {
            self.insert_closed(1 << v, alloc::vec![1u64 << v], Origin::Create(v));
        }
        let mut subsets: Vec<u64> = (1..=self.full).collect();
        subsets.sort_by_key(|s| s.count_ones());
        for &s in &subsets {
            if s.count_ones() < 2 {
                continue;
            }
            let low = s & s.wrapping_neg();
            // Proper subsets containing the lowest vertex.
            let rest = s & !low;
            let mut sub = rest;
            loop {
                let s1 = low | sub;
                if s1 != s {
                    let s2 = s & !s1;
                    let left: Vec<Partition> =
                        self.reach.get(&s1).map(|m| m.keys().cloned().collect()).unwrap_or_default();
                    let right: Vec<Partition> =
                        self.reach.get(&s2).map(|m| m.keys().cloned().collect()).unwrap_or_default();
                    for p1 in &left {
                        for p2 in &right {
                            self.combine(s1, p1, s2, p2);
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        self.reach.get(&self.full).is_some_and(|m| !m.is_empty())
    }

    /// Expression for state `(s, p)` whose class `i` ends with `labels[i]`.
    fn build(&self, s: u64, p: &Partition, labels: &[u32]) -> CwdExpr {
        match &self.reach[&s][p] {
            Origin::Create(v) => CwdExpr::create(Label::Int(labels[0]), *v),
            Origin::Merge { from, a, b } => {
                // `from` minus a and b, plus a|b, normalised, gives p.
                let merged = from[*a] | from[*b];
                let label_of = |c: u64| labels[p.iter().position(|&x| x == c).expect("class")];
                let target = label_of(merged);
                let mut child = Vec::with_capacity(from.len());
                let others: Vec<u32> =
                    from.iter().enumerate().filter(|&(i, _)| i != *a && i != *b).map(|(_, &c)| label_of(c)).collect();
                let spare = (1..=self.k as u32).find(|l| *l != target && !others.contains(l)).expect("free label");
                for (i, &c) in from.iter().enumerate() {
                    child.push(if i == *a {
                        target
                    } else if i == *b {
                        spare
                    } else {
                        label_of(c)
                    });
                }
                CwdExpr::relabel(Label::Int(spare), Label::Int(target), self.build(s, from, &child))
            }
            Origin::Union { left, right } => {
                let label_of = |c: u64| -> u32 {
                    let i = p.iter().position(|&x| x & c == c).expect("class");
                    labels[i]
                };
                let l1: Vec<u32> = left.1.iter().map(|&c| label_of(c)).collect();
                let l2: Vec<u32> = right.1.iter().map(|&c| label_of(c)).collect();
                let mut e = CwdExpr::union(self.build(left.0, &left.1, &l1), self.build(right.0, &right.1, &l2));
                for (x, &c) in p.iter().enumerate() {
                    for (y, &d) in p.iter().enumerate().skip(x + 1) {
                        let cross = bits(c & left.0).any(|v| self.adj[v] & d & right.0 != 0)
                            || bits(c & right.0).any(|v| self.adj[v] & d & left.0 != 0);
                        if cross {
                            e = CwdExpr::join(Label::Int(labels[x]), Label::Int(labels[y]), e);
                        }
                    }
                }
                e
            }
        }
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// A `k`-expression for `g` if its clique-width is at most `k`.
pub fn expression_within(g: &Graph, k: usize) -> Result<Option<CwdExpr>, TooLarge> {
    let n = g.n();
    if n > EXACT_LIMIT {
        return Err(TooLarge { n, limit: EXACT_LIMIT });
    }
    if n == 0 || k == 0 {
        return Ok(None);
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbours(v).fold(0u64, |m, w| m | 1 << w)).collect();
    let mut solver = Solver { g, k, adj, full: (1u64 << n) - 1, reach: BTreeMap::new() };
    if !solver.run() {
        return Ok(None);
    }
    let full = solver.full;
    let p = solver.reach[&full].keys().next().expect("reached").clone();
    let labels: Vec<u32> = (1..=p.len() as u32).collect();
    Ok(Some(solver.build(full, &p, &labels)))
}

/// Smallest `k` admitting a `k`-expression, with a witness.
pub fn exact_clique_width(g: &Graph) -> Result<ExactWidth, TooLarge> {
    if g.n() == 0 {
        return Ok(ExactWidth { width: 0, witness: None });
    }
    for k in 1..=g.n() {
        if let Some(e) = expression_within(g, k)? {
            return Ok(ExactWidth { width: k, witness: Some(e) });
        }
    }
    unreachable!("n labels always suffice")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(g: &Graph, expect: usize) {
        let r = exact_clique_width(g).unwrap();
        assert_eq!(r.width, expect);
        let e = r.witness.unwrap();
        assert!(e.width() <= expect);
        assert!(e.evaluate().unwrap().matches(g));
    }

    #[test]
    fn small_named_graphs() {
        check(&Graph::empty(1), 1);
        check(&Graph::empty(3), 1);
        check(&Graph::complete(4), 2);
        check(&Graph::path(3), 2);
        check(&Graph::path(4), 3);
        check(&Graph::cycle(5), 3);
        check(&Graph::cycle(6), 3);
        assert_eq!(exact_clique_width(&Graph::empty(0)).unwrap().width, 0);
        assert!(exact_clique_width(&Graph::empty(EXACT_LIMIT + 1)).is_err());
    }

    fn has_induced_p4(g: &Graph) -> bool {
        let n = g.n();
        // a-b-c-d with exactly those three edges among the four.
        (0..n).any(|a| {
            (0..n).any(|b| {
                (0..n).any(|c| {
                    (0..n).any(|d| {
                        let vs = [a, b, c, d];
                        let distinct = (0..4).all(|i| (i + 1..4).all(|j| vs[i] != vs[j]));
                        distinct
                            && g.has_edge(a, b)
                            && g.has_edge(b, c)
                            && g.has_edge(c, d)
                            && !g.has_edge(a, c)
                            && !g.has_edge(a, d)
                            && !g.has_edge(b, d)
                    })
                })
            })
        })
    }

    /// Width at most two exactly on induced-P4-free graphs.
    #[test]
    fn width_two_iff_cograph() {
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
                let g = Graph::from_edges(n, edges).unwrap();
                let within_two = expression_within(&g, 2).unwrap();
                assert_eq!(within_two.is_some(), !has_induced_p4(&g), "graph mask {mask} on {n}");
                if let Some(e) = within_two {
                    assert!(e.evaluate().unwrap().matches(&g));
                }
            }
        }
    }
}
