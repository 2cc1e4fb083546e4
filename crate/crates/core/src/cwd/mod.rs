//! Clique-width expressions: labels, the expression tree, evaluation and
//! width accounting. Builders for labelled cliques live in [`builders`].

pub mod builders;
pub mod exact;
pub mod program;
pub mod text;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};

pub use builders::{
    attach_extra_vertices, label_clique_partition, label_via_nonpairs, label_via_pairs, label_via_rows, Bond,
    BuildError, NamedSet, PairMode, RowsSpec,
};
pub use program::{Program, Step};

/// Phase component of a set label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    New,
    New2,
    Old,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::New => "new",
            Phase::New2 => "new2",
            Phase::Old => "old",
        }
    }
}

/// A label: either a plain integer or a `(set, phase)` pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Int(u32),
    Tag { set: String, phase: Phase },
}

impl Label {
    pub fn tag(set: impl Into<String>, phase: Phase) -> Label {
        Label::Tag { set: set.into(), phase }
    }

    pub fn new_of(set: &str) -> Label {
        Label::tag(set, Phase::New)
    }

    pub fn old_of(set: &str) -> Label {
        Label::tag(set, Phase::Old)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(n) => write!(f, "int:{n}"),
            Label::Tag { set, phase } => write!(f, "tag:{set}.{}", phase.as_str()),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        text::parse_label(&s).map_err(serde::de::Error::custom)
    }
}

/// A clique-width expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CwdExpr {
    Create { label: Label, vertex: usize },
    Union(Box<CwdExpr>, Box<CwdExpr>),
    Relabel { from: Label, to: Label, child: Box<CwdExpr> },
    Join { a: Label, b: Label, child: Box<CwdExpr> },
}

impl CwdExpr {
    pub fn create(label: Label, vertex: usize) -> CwdExpr {
        CwdExpr::Create { label, vertex }
    }

    pub fn union(left: CwdExpr, right: CwdExpr) -> CwdExpr {
        CwdExpr::Union(Box::new(left), Box::new(right))
    }

    pub fn relabel(from: Label, to: Label, child: CwdExpr) -> CwdExpr {
        CwdExpr::Relabel { from, to, child: Box::new(child) }
    }

    pub fn join(a: Label, b: Label, child: CwdExpr) -> CwdExpr {
        CwdExpr::Join { a, b, child: Box::new(child) }
    }

    fn children(&self) -> impl Iterator<Item = &CwdExpr> {
        let (a, b): (Option<&CwdExpr>, Option<&CwdExpr>) = match self {
            CwdExpr::Create { .. } => (None, None),
            CwdExpr::Union(l, r) => (Some(l), Some(r)),
            CwdExpr::Relabel { child, .. } | CwdExpr::Join { child, .. } => (Some(child), None),
        };
        a.into_iter().chain(b)
    }

    /// Nodes in pre-order, without recursion.
    pub fn nodes(&self) -> impl Iterator<Item = &CwdExpr> {
        let mut stack = alloc::vec![self];
        core::iter::from_fn(move || {
            let node = stack.pop()?;
            let kids: Vec<_> = node.children().collect();
            stack.extend(kids.into_iter().rev());
            Some(node)
        })
    }

    /// Every label mentioned anywhere in the expression.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        for node in self.nodes() {
            match node {
                CwdExpr::Create { label, .. } => {
                    out.insert(label.clone());
                }
                CwdExpr::Union(..) => {}
                CwdExpr::Relabel { from, to, .. } => {
                    out.insert(from.clone());
                    out.insert(to.clone());
                }
                CwdExpr::Join { a, b, .. } => {
                    out.insert(a.clone());
                    out.insert(b.clone());
                }
            }
        }
        out
    }

    /// Number of distinct labels in the expression.
    pub fn width(&self) -> usize {
        self.labels().len()
    }

    /// Vertex ids created by the expression (duplicates included).
    pub fn created(&self) -> Vec<usize> {
        self.nodes()
            .filter_map(|n| match n {
                CwdExpr::Create { vertex, .. } => Some(*vertex),
                _ => None,
            })
            .collect()
    }

    pub fn evaluate(&self) -> Result<LabeledGraph, EvalError> {
        evaluate(self)
    }
}

/// Serialised as its text form.
impl Serialize for CwdExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&text::serialize(self))
    }
}

impl<'de> Deserialize<'de> for CwdExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        text::parse(&s).map_err(serde::de::Error::custom)
    }
}

// Long caterpillar expressions would overflow the stack with the derived
// recursive drop.
impl Drop for CwdExpr {
    fn drop(&mut self) {
        let mut stack: Vec<Box<CwdExpr>> = Vec::new();
        take_children(self, &mut stack);
        while let Some(mut node) = stack.pop() {
            take_children(&mut node, &mut stack);
        }
    }
}

// Moving the boxes avoids copying each node out of its allocation.
#[allow(clippy::vec_box)]
fn take_children(node: &mut CwdExpr, out: &mut Vec<Box<CwdExpr>>) {
    let leaf = || Box::new(CwdExpr::Create { label: Label::Int(0), vertex: 0 });
    match node {
        CwdExpr::Create { .. } => {}
        CwdExpr::Union(l, r) => {
            out.push(core::mem::replace(l, leaf()));
            out.push(core::mem::replace(r, leaf()));
        }
        CwdExpr::Relabel { child, .. } | CwdExpr::Join { child, .. } => {
            out.push(core::mem::replace(child, leaf()));
        }
    }
}

impl fmt::Display for CwdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::serialize(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("vertex {0} is created more than once")]
    DuplicateVertex(usize),
    #[error("join between a label and itself ({0})")]
    JoinSameLabel(Label),
}

/// Result of evaluating an expression: a graph on the created vertex ids,
/// each carrying its final label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub vertices: VertexSet,
    pub edges: BTreeSet<(usize, usize)>,
    pub labels: BTreeMap<usize, Label>,
}

impl LabeledGraph {
    /// The graph on `vertices` (position `i` is `vertices[i]`), with the
    /// vertex ids as names.
    pub fn graph(&self) -> Graph {
        let idx: BTreeMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let g = Graph::from_edges(self.vertices.len(), self.edges.iter().map(|(u, v)| (idx[u], idx[v])))
            .expect("edges reference created vertices");
        g.with_names(self.vertices.iter().map(|v| v.to_string()).collect()).expect("one name per vertex")
    }

    /// Exact equality with `g` on vertex ids `0..g.n()`.
    pub fn matches(&self, g: &Graph) -> bool {
        self.vertices.len() == g.n()
            && self.vertices.iter().enumerate().all(|(i, v)| i == v)
            && self.edges.len() == g.edge_count()
            && self.edges.iter().all(|&(u, v)| g.has_edge(u, v))
    }

    /// Exact equality with the subgraph of `g` induced by `s`, keeping ids.
    pub fn matches_induced(&self, g: &Graph, s: &VertexSet) -> bool {
        if self.vertices != *s || s.iter().any(|v| v >= g.n()) {
            return false;
        }
        let expected: BTreeSet<(usize, usize)> = s
            .iter()
            .flat_map(|u| s.iter().filter(move |&v| v > u).map(move |v| (u, v)))
            .filter(|&(u, v)| g.has_edge(u, v))
            .collect();
        expected == self.edges
    }

    /// Label classes at the end of evaluation.
    pub fn classes(&self) -> BTreeMap<Label, VertexSet> {
        let mut out: BTreeMap<Label, VertexSet> = BTreeMap::new();
        for (&v, l) in &self.labels {
            out.entry(l.clone()).or_default().insert(v);
        }
        out
    }
}

/// Evaluate `e` bottom-up with an explicit stack.
pub fn evaluate(e: &CwdExpr) -> Result<LabeledGraph, EvalError> {
    type Classes = BTreeMap<Label, Vec<usize>>;
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    // Each finished subtree leaves its label classes on `done`.
    let mut done: Vec<(usize, Classes)> = Vec::new();
    let mut todo: Vec<(&CwdExpr, bool)> = alloc::vec![(e, false)];
    while let Some((node, expanded)) = todo.pop() {
        if !expanded {
            todo.push((node, true));
            for child in node.children() {
                todo.push((child, false));
            }
            continue;
        }
        match node {
            CwdExpr::Create { label, vertex } => {
                if !seen.insert(*vertex) {
                    return Err(EvalError::DuplicateVertex(*vertex));
                }
                let mut c = Classes::new();
                c.insert(label.clone(), alloc::vec![*vertex]);
                done.push((1, c));
            }
            CwdExpr::Union(..) => {
                let (na, mut a) = done.pop().expect("left operand");
                let (nb, mut b) = done.pop().expect("right operand");
                if na < nb {
                    core::mem::swap(&mut a, &mut b);
                }
                for (l, vs) in b {
                    a.entry(l).or_default().extend(vs);
                }
                done.push((na + nb, a));
            }
            CwdExpr::Relabel { from, to, .. } => {
                let classes = &mut done.last_mut().expect("operand").1;
                if from != to {
                    if let Some(mut moved) = classes.remove(from) {
                        let target = classes.entry(to.clone()).or_default();
                        if target.len() < moved.len() {
                            core::mem::swap(target, &mut moved);
                        }
                        target.extend(moved);
                    }
                }
            }
            CwdExpr::Join { a, b, .. } => {
                if a == b {
                    return Err(EvalError::JoinSameLabel(a.clone()));
                }
                let classes = &done.last().expect("operand").1;
                if let (Some(xs), Some(ys)) = (classes.get(a), classes.get(b)) {
                    for &u in xs {
                        for &v in ys {
                            edges.insert((u.min(v), u.max(v)));
                        }
                    }
                }
            }
        }
    }
    let (_, classes) = done.pop().expect("root result");
    let labels: BTreeMap<usize, Label> =
        classes.into_iter().flat_map(|(l, vs)| vs.into_iter().map(move |v| (v, l.clone()))).collect();
    let vertices: VertexSet = seen.into_iter().collect();
    Ok(LabeledGraph { vertices, edges, labels })
}
