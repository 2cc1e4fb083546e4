//! Linear expressions: a sequence of create / join / relabel steps applied
//! to one growing labelled graph. Every builder emits a [`Program`]; it
//! folds into a left-deep [`CwdExpr`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{CwdExpr, Label, Phase};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Add a vertex with a label (a union with a single-vertex expression).
    Create(Label, usize),
    Join(Label, Label),
    Relabel(Label, Label),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub steps: Vec<Step>,
}

impl Program {
    pub fn new() -> Self {
        Program::default()
    }

    pub fn create(&mut self, l: Label, v: usize) {
        self.steps.push(Step::Create(l, v));
    }

    pub fn join(&mut self, a: Label, b: Label) {
        debug_assert_ne!(a, b);
        self.steps.push(Step::Join(a, b));
    }

    pub fn relabel(&mut self, from: Label, to: Label) {
        if from != to {
            self.steps.push(Step::Relabel(from, to));
        }
    }

    pub fn extend(&mut self, other: Program) {
        self.steps.extend(other.steps);
    }

    pub fn is_empty(&self) -> bool {
        self.steps.iter().all(|s| !matches!(s, Step::Create(..)))
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        for s in &self.steps {
            match s {
                Step::Create(l, _) => {
                    out.insert(l.clone());
                }
                Step::Join(a, b) | Step::Relabel(a, b) => {
                    out.insert(a.clone());
                    out.insert(b.clone());
                }
            }
        }
        out
    }

    pub fn width(&self) -> usize {
        self.labels().len()
    }

    /// Labels carried by vertices once all steps have run.
    pub fn final_labels(&self) -> BTreeSet<Label> {
        let mut live: BTreeMap<Label, usize> = BTreeMap::new();
        for s in &self.steps {
            match s {
                Step::Create(l, _) => *live.entry(l.clone()).or_default() += 1,
                Step::Join(..) => {}
                Step::Relabel(a, b) => {
                    if let Some(k) = live.remove(a) {
                        *live.entry(b.clone()).or_default() += k;
                    }
                }
            }
        }
        live.into_keys().collect()
    }

    /// Left-deep expression, or `None` when no vertex is created. Steps
    /// before the first create are dropped (they act on an empty graph).
    pub fn to_expr(&self) -> Option<CwdExpr> {
        let mut acc: Option<CwdExpr> = None;
        for s in &self.steps {
            acc = match (acc, s) {
                (None, Step::Create(l, v)) => Some(CwdExpr::create(l.clone(), *v)),
                (None, _) => None,
                (Some(e), Step::Create(l, v)) => Some(CwdExpr::union(e, CwdExpr::create(l.clone(), *v))),
                (Some(e), Step::Join(a, b)) => Some(CwdExpr::join(a.clone(), b.clone(), e)),
                (Some(e), Step::Relabel(a, b)) => Some(CwdExpr::relabel(a.clone(), b.clone(), e)),
            };
        }
        acc
    }

    /// Sequentialise an arbitrary expression. A union is flattened by
    /// running one operand after the other, which is sound when the later
    /// operand never mentions a label the earlier one ends with. When
    /// neither order works, the later operand is renamed into fresh labels
    /// and relabelled back at the end (this can add labels).
    pub fn from_expr(e: &CwdExpr) -> Program {
        struct Part {
            steps: Vec<Step>,
            finals: BTreeSet<Label>,
            mentioned: BTreeSet<Label>,
        }
        let all = e.labels();
        let mut fresh = 0usize;
        let mut done: Vec<Part> = Vec::new();
        let mut todo: Vec<(&CwdExpr, bool)> = alloc::vec![(e, false)];
        while let Some((node, expanded)) = todo.pop() {
            if !expanded {
                todo.push((node, true));
                for c in node.children() {
                    todo.push((c, false));
                }
                continue;
            }
            match node {
                CwdExpr::Create { label, vertex } => done.push(Part {
                    steps: alloc::vec![Step::Create(label.clone(), *vertex)],
                    finals: [label.clone()].into(),
                    mentioned: [label.clone()].into(),
                }),
                CwdExpr::Relabel { from, to, .. } | CwdExpr::Join { a: from, b: to, .. } => {
                    let p = done.last_mut().expect("operand");
                    if let CwdExpr::Relabel { .. } = node {
                        p.steps.push(Step::Relabel(from.clone(), to.clone()));
                        if p.finals.remove(from) {
                            p.finals.insert(to.clone());
                        }
                    } else {
                        p.steps.push(Step::Join(from.clone(), to.clone()));
                    }
                    p.mentioned.insert(from.clone());
                    p.mentioned.insert(to.clone());
                }
                CwdExpr::Union(..) => {
                    let left = done.pop().expect("left");
                    let right = done.pop().expect("right");
                    let (mut first, mut second) = if right.mentioned.is_disjoint(&left.finals) {
                        (left, right)
                    } else if left.mentioned.is_disjoint(&right.finals) {
                        (right, left)
                    } else {
                        let mut rename: BTreeMap<Label, Label> = BTreeMap::new();
                        for l in &right.mentioned {
                            let f = loop {
                                let cand = Label::tag(alloc::format!("lin{fresh}"), Phase::New);
                                fresh += 1;
                                if !all.contains(&cand) {
                                    break cand;
                                }
                            };
                            rename.insert(l.clone(), f);
                        }
                        let r = |l: &Label| rename[l].clone();
                        let mut steps: Vec<Step> = right
                            .steps
                            .iter()
                            .map(|s| match s {
                                Step::Create(l, v) => Step::Create(r(l), *v),
                                Step::Join(a, b) => Step::Join(r(a), r(b)),
                                Step::Relabel(a, b) => Step::Relabel(r(a), r(b)),
                            })
                            .collect();
                        for l in &right.finals {
                            steps.push(Step::Relabel(r(l), l.clone()));
                        }
                        let mut mentioned: BTreeSet<Label> = rename.values().cloned().collect();
                        mentioned.extend(right.mentioned.iter().cloned());
                        (left, Part { steps, finals: right.finals, mentioned })
                    };
                    first.steps.append(&mut second.steps);
                    first.finals.append(&mut second.finals);
                    first.mentioned.append(&mut second.mentioned);
                    done.push(first);
                }
            }
        }
        Program { steps: done.pop().expect("root").steps }
    }
}

/// How a pair of units relates inside one block. The mode says which
/// cross pairs are exceptional ("partners"): edges for `Adj`, non-edges
/// for `NonAdj`, none for `Join`/`CoJoin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Join,
    CoJoin,
    Adj,
    NonAdj,
}

/// Input to [`run_engine`]: the vertices of one block grouped into units.
pub(crate) struct Block<'a> {
    pub g: &'a Graph,
    /// Unit index of each vertex of the block.
    pub unit_of: BTreeMap<usize, usize>,
    /// Permanent label of each vertex once retired.
    pub home_of: BTreeMap<usize, Label>,
    /// Labels a unit may use for its live vertices, in preference order.
    pub live_labels: Vec<Vec<Label>>,
    /// Extra live labels any unit may borrow.
    pub spare_labels: Vec<Label>,
    /// `mode[a][b]` for units `a != b`.
    pub mode: Vec<Vec<Mode>>,
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("vertex {vertex} sees the retired class {class} only partially")]
    NonUniform { vertex: usize, class: Label },
    #[error("no free live label for vertex {0}")]
    OutOfLabels(usize),
}

impl Block<'_> {
    fn partners(&self, v: usize, w: usize) -> bool {
        let (a, b) = (self.unit_of[&v], self.unit_of[&w]);
        let e = self.g.has_edge(v, w);
        if a == b {
            return !e;
        }
        match self.mode[a][b] {
            Mode::Join | Mode::CoJoin => false,
            Mode::Adj => e,
            Mode::NonAdj => !e,
        }
    }
}

/// Place the block's vertices one at a time. A placed vertex stays live
/// (with a private label) until all its partners are placed, then takes
/// its permanent label. Edges to live vertices are joined individually;
/// edges to a retired class are joined as a whole and must be uniform,
/// which is checked, so the output is always exact.
pub(crate) fn run_engine(b: &Block<'_>) -> Result<Program, EngineError> {
    let mut prog = Program::new();
    let mut placed: BTreeSet<usize> = BTreeSet::new();
    let mut live: Vec<(usize, Label)> = Vec::new();
    let mut retired: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
    for &v in &b.order {
        let unit = b.unit_of[&v];
        let in_use = |l: &Label| live.iter().any(|(_, x)| x == l);
        let label = b.live_labels[unit]
            .iter()
            .chain(&b.spare_labels)
            .find(|l| !in_use(l))
            .cloned()
            .ok_or(EngineError::OutOfLabels(v))?;
        prog.create(label.clone(), v);
        for (u, lu) in &live {
            if b.g.has_edge(v, *u) {
                prog.join(label.clone(), lu.clone());
            }
        }
        for (class, members) in &retired {
            let k = members.iter().filter(|&&u| b.g.has_edge(v, u)).count();
            if k == members.len() {
                prog.join(label.clone(), class.clone());
            } else if k != 0 {
                return Err(EngineError::NonUniform { vertex: v, class: class.clone() });
            }
        }
        placed.insert(v);
        live.push((v, label));
        let mut keep = Vec::new();
        for (u, lu) in live.drain(..) {
            let pending = b.order.iter().any(|&w| !placed.contains(&w) && b.partners(u, w));
            if pending {
                keep.push((u, lu));
            } else {
                let home = b.home_of[&u].clone();
                prog.relabel(lu, home.clone());
                retired.entry(home).or_default().push(u);
            }
        }
        live = keep;
    }
    Ok(prog)
}

/// Name used for the shared overflow live label.
pub(crate) const SPARE: &str = "spare";

pub(crate) fn spare_label() -> Label {
    Label::tag(String::from(SPARE), Phase::New2)
}
