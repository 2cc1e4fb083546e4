//! Labelled constructions for unions of cliques whose cross relations are
//! close to join or co-join, and the attachment of a few extra vertices.
//!
//! All builders place vertices one at a time through the same engine: a
//! vertex keeps a private `(set, new)` label while some partner (an
//! exceptional neighbour or non-neighbour) is still unplaced, then moves to
//! `(set, old)`. The builders differ in their preconditions, the order in
//! which vertices are placed, and the width they promise.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::program::{run_engine, spare_label, Block, EngineError, Mode, Program, Step};
use super::{CwdExpr, Label, Phase};
use crate::graph::{Graph, VertexSet};

/// A clique with the name used in its labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedSet {
    pub name: String,
    pub vertices: VertexSet,
}

impl NamedSet {
    pub fn new(name: impl Into<String>, vertices: impl Into<VertexSet>) -> Self {
        NamedSet { name: name.into(), vertices: vertices.into() }
    }

    pub fn old(&self) -> Label {
        Label::old_of(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("{set} is not a clique: {u} and {v} are non-adjacent")]
    NotAClique { set: String, u: usize, v: usize },
    #[error("vertex {0} belongs to two sets")]
    Overlap(usize),
    #[error("vertex {vertex} has two partners {first} and {second} in {set}")]
    TwoPartners { vertex: usize, set: String, first: usize, second: usize },
    #[error("{a} and {b} are neither joined nor co-joined as declared")]
    NotJoinOrCojoin { a: String, b: String },
    #[error("neighbours {u} and {w} of vertex {vertex} in other cliques are non-adjacent")]
    ForeignNeighbourhood { vertex: usize, u: usize, w: usize },
    #[error("rows need at least three cliques and one mode per consecutive pair")]
    RowsShape,
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("no vertices to label")]
    Empty,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("width {width} exceeds the bound {bound}")]
    WidthExceeded { width: usize, bound: usize },
}

/// Which cross pairs of a consecutive row pair are exceptional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    /// Each vertex has at most one neighbour on the other side.
    Adjacent,
    /// Each vertex has at most one non-neighbour on the other side.
    NonAdjacent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bond {
    Join,
    CoJoin,
}

/// Relations declared for a cyclic sequence of cliques: a mode for each
/// pair `(i, i+1 mod t)` and a bond for every other pair `(i, j)`, `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowsSpec {
    pub consecutive: Vec<PairMode>,
    pub others: BTreeMap<(usize, usize), Bond>,
}

impl RowsSpec {
    /// The spec that `g` satisfies, if any.
    pub fn infer(g: &Graph, cliques: &[NamedSet]) -> Option<RowsSpec> {
        let t = cliques.len();
        if t < 3 {
            return None;
        }
        let mut consecutive = Vec::new();
        for i in 0..t {
            let r = g.relation_between(&cliques[i].vertices, &cliques[(i + 1) % t].vertices).ok()?;
            consecutive.push(if r.neighbours_both(1) {
                PairMode::Adjacent
            } else if r.non_neighbours_both(1) {
                PairMode::NonAdjacent
            } else {
                return None;
            });
        }
        let mut others = BTreeMap::new();
        for i in 0..t {
            for j in i + 2..t {
                if i == 0 && j == t - 1 {
                    continue;
                }
                let r = g.relation_between(&cliques[i].vertices, &cliques[j].vertices).ok()?;
                others.insert(
                    (i, j),
                    if r.is_join() {
                        Bond::Join
                    } else if r.is_cojoin() {
                        Bond::CoJoin
                    } else {
                        return None;
                    },
                );
            }
        }
        Some(RowsSpec { consecutive, others })
    }
}

pub(crate) fn check_sets(g: &Graph, sets: &[&NamedSet]) -> Result<(), BuildError> {
    let mut seen = BTreeSet::new();
    for s in sets {
        for v in &s.vertices {
            if v >= g.n() {
                return Err(BuildError::OutOfRange(v));
            }
            if !seen.insert(v) {
                return Err(BuildError::Overlap(v));
            }
        }
        let vs = s.vertices.as_slice();
        for (i, &u) in vs.iter().enumerate() {
            if let Some(&v) = vs[i + 1..].iter().find(|&&v| !g.has_edge(u, v)) {
                return Err(BuildError::NotAClique { set: s.name.clone(), u, v });
            }
        }
    }
    Ok(())
}

/// Every vertex of `a` has at most one partner in `b` (a neighbour when
/// `adjacent`, a non-neighbour otherwise).
fn check_partners(g: &Graph, a: &NamedSet, b: &NamedSet, adjacent: bool) -> Result<(), BuildError> {
    for v in &a.vertices {
        let mut ps = b.vertices.iter().filter(|&w| g.has_edge(v, w) == adjacent);
        if let (Some(first), Some(second)) = (ps.next(), ps.next()) {
            return Err(BuildError::TwoPartners { vertex: v, set: b.name.clone(), first, second });
        }
    }
    Ok(())
}

fn check_bond(g: &Graph, a: &NamedSet, b: &NamedSet, bond: Bond) -> Result<(), BuildError> {
    let ok = a.vertices.iter().all(|u| b.vertices.iter().all(|v| g.has_edge(u, v) == (bond == Bond::Join)));
    if ok {
        Ok(())
    } else {
        Err(BuildError::NotJoinOrCojoin { a: a.name.clone(), b: b.name.clone() })
    }
}

/// One unit of a block: vertices sharing a live label and a relation mode
/// towards every other unit. `homes` gives each vertex's permanent label.
#[derive(Debug, Clone)]
pub(crate) struct Unit {
    pub live: String,
    pub homes: Vec<(usize, Label)>,
}

impl Unit {
    pub fn of_set(s: &NamedSet) -> Unit {
        Unit { live: s.name.clone(), homes: s.vertices.iter().map(|v| (v, s.old())).collect() }
    }
}

/// Partner graph traversal: components by smallest vertex, each walked
/// depth-first from a vertex of least partner degree. Along paths and
/// cycles of partners this is the walk that keeps at most three vertices
/// live.
pub(crate) fn partner_order(block: &Block<'_>) -> Vec<usize> {
    let verts: Vec<usize> = block.unit_of.keys().copied().collect();
    let partners =
        |v: usize| -> Vec<usize> { verts.iter().copied().filter(|&w| w != v && block_partners(block, v, w)).collect() };
    let adj: BTreeMap<usize, Vec<usize>> = verts.iter().map(|&v| (v, partners(v))).collect();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut order = Vec::with_capacity(verts.len());
    for &root in &verts {
        if seen.contains(&root) {
            continue;
        }
        // Collect the component, then pick its start.
        let mut comp = Vec::new();
        let mut stack = alloc::vec![root];
        let mut in_comp: BTreeSet<usize> = [root].into();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in &adj[&v] {
                if in_comp.insert(w) {
                    stack.push(w);
                }
            }
        }
        let start = *comp.iter().min_by_key(|&&v| (adj[&v].len(), v)).expect("non-empty component");
        let mut stack = alloc::vec![start];
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            order.push(v);
            for &w in adj[&v].iter().rev() {
                if !seen.contains(&w) {
                    stack.push(w);
                }
            }
        }
    }
    order
}

fn block_partners(b: &Block<'_>, v: usize, w: usize) -> bool {
    let (a, c) = (b.unit_of[&v], b.unit_of[&w]);
    let e = b.g.has_edge(v, w);
    if a == c {
        return !e;
    }
    match b.mode[a][c] {
        Mode::Join | Mode::CoJoin => false,
        Mode::Adj => e,
        Mode::NonAdj => !e,
    }
}

/// Run the engine over `units`; `order` defaults to [`partner_order`].
pub(crate) fn build_units(
    g: &Graph,
    units: &[Unit],
    mode: Vec<Vec<Mode>>,
    spare: bool,
    order: Option<Vec<usize>>,
) -> Result<Program, BuildError> {
    let mut unit_of = BTreeMap::new();
    let mut home_of = BTreeMap::new();
    for (i, u) in units.iter().enumerate() {
        for (v, h) in &u.homes {
            if unit_of.insert(*v, i).is_some() {
                return Err(BuildError::Overlap(*v));
            }
            home_of.insert(*v, h.clone());
        }
    }
    let mut block = Block {
        g,
        unit_of,
        home_of,
        live_labels: units.iter().map(|u| alloc::vec![Label::new_of(&u.live)]).collect(),
        spare_labels: if spare { alloc::vec![spare_label()] } else { Vec::new() },
        mode,
        order: Vec::new(),
    };
    block.order = order.unwrap_or_else(|| partner_order(&block));
    Ok(run_engine(&block)?)
}

fn finish(p: Program, bound: usize) -> Result<CwdExpr, BuildError> {
    let width = p.width();
    if width > bound {
        return Err(BuildError::WidthExceeded { width, bound });
    }
    p.to_expr().ok_or(BuildError::Empty)
}

fn two_sets(g: &Graph, s: &NamedSet, a: &NamedSet, adjacent: bool) -> Result<Program, BuildError> {
    check_sets(g, &[s, a])?;
    check_partners(g, s, a, adjacent)?;
    check_partners(g, a, s, adjacent)?;
    let m = if adjacent { Mode::Adj } else { Mode::NonAdj };
    let modes = alloc::vec![alloc::vec![m, m], alloc::vec![m, m]];
    build_units(g, &[Unit::of_set(s), Unit::of_set(a)], modes, false, None)
}

pub(crate) fn pairs_program(g: &Graph, s: &NamedSet, a: &NamedSet) -> Result<Program, BuildError> {
    two_sets(g, s, a, true)
}

pub(crate) fn nonpairs_program(g: &Graph, s: &NamedSet, a: &NamedSet) -> Result<Program, BuildError> {
    two_sets(g, s, a, false)
}

/// Two cliques where every vertex has at most one neighbour on the other
/// side. Width at most 4; the final labels are `(s, old)` and `(a, old)`.
/// Both sets must be non-empty.
pub fn label_via_pairs(g: &Graph, s: &NamedSet, a: &NamedSet) -> Result<CwdExpr, BuildError> {
    finish(pairs_program(g, s, a)?, 4)
}

/// Two cliques where every vertex has at most one non-neighbour on the
/// other side. Width at most 4.
pub fn label_via_nonpairs(g: &Graph, s: &NamedSet, a: &NamedSet) -> Result<CwdExpr, BuildError> {
    finish(nonpairs_program(g, s, a)?, 4)
}

pub(crate) fn rows_program(g: &Graph, cliques: &[NamedSet], spec: &RowsSpec) -> Result<Program, BuildError> {
    let t = cliques.len();
    if t < 3 || spec.consecutive.len() != t {
        return Err(BuildError::RowsShape);
    }
    check_sets(g, &cliques.iter().collect::<Vec<_>>())?;
    let mut modes = alloc::vec![alloc::vec![Mode::CoJoin; t]; t];
    for (i, m) in spec.consecutive.iter().enumerate() {
        let j = (i + 1) % t;
        let adjacent = *m == PairMode::Adjacent;
        check_partners(g, &cliques[i], &cliques[j], adjacent)?;
        check_partners(g, &cliques[j], &cliques[i], adjacent)?;
        let mode = if adjacent { Mode::Adj } else { Mode::NonAdj };
        modes[i][j] = mode;
        modes[j][i] = mode;
    }
    for i in 0..t {
        for j in i + 2..t {
            if i == 0 && j == t - 1 {
                continue;
            }
            let bond = *spec.others.get(&(i, j)).ok_or_else(|| BuildError::NotJoinOrCojoin {
                a: cliques[i].name.clone(),
                b: cliques[j].name.clone(),
            })?;
            check_bond(g, &cliques[i], &cliques[j], bond)?;
            let mode = if bond == Bond::Join { Mode::Join } else { Mode::CoJoin };
            modes[i][j] = mode;
            modes[j][i] = mode;
        }
    }
    let units: Vec<Unit> = cliques.iter().map(Unit::of_set).collect();
    build_units(g, &units, modes, true, None)
}

/// `t >= 3` cliques in cyclic order: consecutive pairs have at most one
/// partner per vertex as declared, all other pairs are joined or
/// co-joined. Partners form paths and cycles, which are walked in order;
/// a shared second live label covers re-entry into the starting clique.
/// Width at most `2t + 1`.
pub fn label_via_rows(g: &Graph, cliques: &[NamedSet], spec: &RowsSpec) -> Result<CwdExpr, BuildError> {
    finish(rows_program(g, cliques, spec)?, 2 * cliques.len() + 1)
}

pub(crate) fn partition_program(g: &Graph, cliques: &[NamedSet]) -> Result<Program, BuildError> {
    let k = cliques.len();
    check_sets(g, &cliques.iter().collect::<Vec<_>>())?;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                check_partners(g, &cliques[i], &cliques[j], true)?;
            }
        }
    }
    for (i, c) in cliques.iter().enumerate() {
        for x in &c.vertices {
            let foreign: Vec<usize> = cliques
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, d)| d.vertices.iter())
                .filter(|&w| g.has_edge(x, w))
                .collect();
            for (a, &u) in foreign.iter().enumerate() {
                if let Some(&w) = foreign[a + 1..].iter().find(|&&w| !g.has_edge(u, w)) {
                    return Err(BuildError::ForeignNeighbourhood { vertex: x, u, w });
                }
            }
        }
    }
    let modes = alloc::vec![alloc::vec![Mode::Adj; k]; k];
    let units: Vec<Unit> = cliques.iter().map(Unit::of_set).collect();
    build_units(g, &units, modes, false, None)
}

/// Cliques where each vertex has at most one neighbour in every other
/// clique and its neighbours outside its own clique form a clique. Each
/// group of mutually adjacent cross vertices is placed together. Width at
/// most `2k`.
pub fn label_clique_partition(g: &Graph, cliques: &[NamedSet]) -> Result<CwdExpr, BuildError> {
    finish(partition_program(g, cliques)?, 2 * cliques.len())
}

/// Rewrite a linear program so that `extras` (which it does not create)
/// come first with private labels, and each later vertex is joined to its
/// extra neighbours through a temporary label before taking its own.
pub(crate) fn attach_program(p: &Program, g: &Graph, extras: &[usize]) -> Program {
    let labels = p.labels();
    let first_int = labels
        .iter()
        .filter_map(|l| match l {
            Label::Int(n) => Some(*n + 1),
            Label::Tag { .. } => None,
        })
        .max()
        .unwrap_or(1);
    let tmp = (0..)
        .map(|i| if i == 0 { Label::tag("tmp", Phase::New) } else { Label::tag(alloc::format!("tmp{i}"), Phase::New) })
        .find(|l| !labels.contains(l))
        .expect("unbounded supply");
    let ext: BTreeMap<usize, Label> =
        extras.iter().enumerate().map(|(i, &x)| (x, Label::Int(first_int + i as u32))).collect();
    let mut out = Program::new();
    for &x in extras {
        out.create(ext[&x].clone(), x);
    }
    for (i, &x) in extras.iter().enumerate() {
        for &y in &extras[i + 1..] {
            if g.has_edge(x, y) {
                out.join(ext[&x].clone(), ext[&y].clone());
            }
        }
    }
    for s in &p.steps {
        match s {
            Step::Create(l, v) => {
                let adj: Vec<usize> = extras.iter().copied().filter(|&x| g.has_edge(*v, x)).collect();
                if adj.is_empty() {
                    out.create(l.clone(), *v);
                } else {
                    out.create(tmp.clone(), *v);
                    for x in adj {
                        out.join(tmp.clone(), ext[&x].clone());
                    }
                    out.relabel(tmp.clone(), l.clone());
                }
            }
            other => out.steps.push(other.clone()),
        }
    }
    out
}

/// Extend an expression for `g - extras` to one for `g`. Each extra vertex
/// gets its own permanent integer label; every other vertex is created
/// under a temporary label, joined to its extra neighbours, then renamed.
/// For expressions that sequentialise without renaming (all builder
/// outputs do) the width grows by at most `|extras| + 1`.
pub fn attach_extra_vertices(e: &CwdExpr, g: &Graph, extras: &VertexSet) -> CwdExpr {
    if extras.is_empty() {
        return e.clone();
    }
    let p = Program::from_expr(e);
    attach_program(&p, g, extras.as_slice()).to_expr().expect("extras are created")
}
