//! Partition of the vertices around an induced 5-, 6- or 7-cycle by their
//! neighbourhood on the cycle, removal of small sets, and the property
//! tables that the partition satisfies inside the class.

mod props;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};
use crate::pattern::{find_hole, find_induced, find_induced_containing, Hole, Occurrence, Pattern};

pub(crate) use props::{emptiness_rules, pair_rules, PairRule};
pub use props::{verify_properties, PropertyEntry, PropertyReport, Status};

/// Default bigness threshold: sets with fewer members are removed.
pub const DEFAULT_THRESHOLD: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Two consecutive cycle neighbours.
    T,
    /// Three consecutive.
    X,
    /// Four consecutive.
    Y,
    /// `i, i+1, i+3, i+4` on the 6- and 7-cycle; all five on the 5-cycle.
    Z,
    /// No cycle neighbour (5-cycle only).
    R,
    Hole,
}

/// A named set. `index` is a cycle position (0-based), absent for the
/// index-free sets `Z` of the 5-cycle and `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SetId {
    pub family: Family,
    pub index: Option<usize>,
}

impl SetId {
    pub const fn new(family: Family, index: usize) -> SetId {
        SetId { family, index: Some(index) }
    }

    pub const fn bare(family: Family) -> SetId {
        SetId { family, index: None }
    }

    /// Lower-case name used in labels: `x3`, `z`, `r`.
    pub fn label_name(&self) -> String {
        let mut s = alloc::format!("{self}");
        s.make_ascii_lowercase();
        s
    }
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::T => "T",
            Family::X => "X",
            Family::Y => "Y",
            Family::Z => "Z",
            Family::R => "R",
            Family::Hole => "H",
        };
        match self.index {
            Some(i) => write!(f, "{fam}{i}"),
            None => f.write_str(fam),
        }
    }
}

impl core::str::FromStr for SetId {
    type Err = String;

    /// Parses the display form (`X3`, `T0`, `Z`, `R`), any case.
    fn from_str(s: &str) -> Result<SetId, String> {
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('T') => Family::T,
            Some('X') => Family::X,
            Some('Y') => Family::Y,
            Some('Z') => Family::Z,
            Some('R') => Family::R,
            _ => return Err(alloc::format!("unknown set '{s}'")),
        };
        let rest = chars.as_str();
        if rest.is_empty() {
            return Ok(SetId::bare(family));
        }
        rest.parse().map(|i| SetId::new(family, i)).map_err(|_| alloc::format!("bad index in set '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub hole: Hole,
    /// Set of every retained off-cycle vertex.
    pub assignment: BTreeMap<usize, SetId>,
    /// Vertices of sets smaller than the threshold, with their set.
    pub removed: Vec<(usize, SetId)>,
    pub threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("the given vertices do not form an induced 5-, 6- or 7-cycle")]
    NotAHole,
    #[error("vertex {vertex} sees cycle positions {trace:?}, which match no set")]
    UnclassifiableVertex { vertex: usize, trace: Vec<usize>, witness: Option<Occurrence> },
    #[error("set {set} has {size} members but must be empty at this threshold")]
    StructureViolation { set: SetId, size: usize, witness: Option<Occurrence> },
}

/// Cycle positions adjacent to `v`, ascending.
pub fn trace_of(g: &Graph, hole: &Hole, v: usize) -> Vec<usize> {
    hole.vertices().iter().enumerate().filter(|&(_, &h)| g.has_edge(v, h)).map(|(i, _)| i).collect()
}

/// Start of the run if `trace` is a run of consecutive positions mod `k`.
fn run_start(trace: &[usize], k: usize) -> Option<usize> {
    let s = trace.len();
    if s == 0 || s >= k {
        return None;
    }
    (0..k).find(|&i| (0..s).all(|j| trace.contains(&((i + j) % k))))
}

/// The set a trace belongs to on a `k`-cycle, if any.
pub fn set_of_trace(trace: &[usize], k: usize) -> Option<SetId> {
    match (k, trace.len()) {
        (5, 0) => Some(SetId::bare(Family::R)),
        (5, 5) => Some(SetId::bare(Family::Z)),
        (5 | 6, 2) => run_start(trace, k).map(|i| SetId::new(Family::T, i)),
        (_, 3) => run_start(trace, k).map(|i| SetId::new(Family::X, i)),
        (_, 4) => {
            if let Some(i) = run_start(trace, k) {
                return Some(SetId::new(Family::Y, i));
            }
            let i = (0..k).find(|&i| [0, 1, 3, 4].iter().all(|d| trace.contains(&((i + d) % k))))?;
            // On the 6-cycle the pattern repeats after three steps.
            Some(SetId::new(Family::Z, if k == 6 { i % 3 } else { i }))
        }
        _ => None,
    }
}

/// Members of `sub` mapped back from positions in `g[verts]`.
fn lift(occ: Occurrence, verts: &VertexSet) -> Occurrence {
    let vs = verts.as_slice();
    Occurrence { pattern: occ.pattern, vertices: occ.vertices.iter().map(|&i| vs[i]).collect() }
}

/// A forbidden pattern inside `g[verts]`, preferring ones through `through`.
/// Holes longer than `k` count as forbidden too (the 6- and 5-cycle cases
/// assume there are none).
pub(crate) fn locate_forbidden(g: &Graph, verts: &VertexSet, through: Option<usize>, k: usize) -> Option<Occurrence> {
    let sub = g.induced_subgraph(verts).ok()?;
    // A stable set first: it is the usual certificate for a vertex seeing
    // too little of the cycle.
    let mut patterns: Vec<Pattern> = alloc::vec![Pattern::FourK1, Pattern::Claw, Pattern::Bridge, Pattern::C4Twin];
    patterns.extend((k + 1..=7).map(Pattern::Cycle));
    if let Some(v) = through {
        let pos = verts.as_slice().iter().position(|&x| x == v)?;
        for &p in &patterns {
            if let Some(o) = find_induced_containing(&sub, p, pos) {
                return Some(lift(o, verts));
            }
        }
    }
    patterns.iter().find_map(|&p| find_induced(&sub, p)).map(|o| lift(o, verts))
}

/// Classify every vertex off `hole` and remove sets below `threshold`.
///
/// Membership depends only on the neighbourhood on the cycle, so removing
/// one set never shrinks another and a single pass is already a fixpoint.
pub fn classify(g: &Graph, hole: &Hole, threshold: usize) -> Result<Decomposition, ClassifyError> {
    let k = hole.len();
    if !(5..=7).contains(&k) || !hole.is_induced_in(g) {
        return Err(ClassifyError::NotAHole);
    }
    let on_hole: VertexSet = hole.vertices().iter().copied().collect();
    let mut groups: BTreeMap<SetId, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n() {
        if on_hole.contains(v) {
            continue;
        }
        let trace = trace_of(g, hole, v);
        match set_of_trace(&trace, k) {
            Some(id) => groups.entry(id).or_default().push(v),
            None => {
                let mut verts = on_hole.clone();
                verts.insert(v);
                let witness = locate_forbidden(g, &verts, Some(v), k);
                return Err(ClassifyError::UnclassifiableVertex { vertex: v, trace, witness });
            }
        }
    }
    let mut assignment = BTreeMap::new();
    let mut removed = Vec::new();
    for (id, members) in groups {
        if members.len() < threshold {
            removed.extend(members.into_iter().map(|v| (v, id)));
            continue;
        }
        let must_be_empty = match id.family {
            Family::Z => k != 5,
            Family::Y => k == 5,
            _ => false,
        };
        if must_be_empty {
            let verts: VertexSet = on_hole.union(&members.iter().copied().collect());
            let witness = locate_forbidden(g, &verts, None, k);
            return Err(ClassifyError::StructureViolation { set: id, size: members.len(), witness });
        }
        assignment.extend(members.into_iter().map(|v| (v, id)));
    }
    removed.sort_unstable();
    Ok(Decomposition { hole: hole.clone(), assignment, removed, threshold })
}

/// The hole the pipeline works with: a 7-cycle if present, else a 6-cycle,
/// else a 5-cycle.
pub fn preferred_hole(g: &Graph) -> Option<Hole> {
    [7, 6, 5].into_iter().find_map(|k| find_hole(g, k))
}

impl Decomposition {
    pub fn k(&self) -> usize {
        self.hole.len()
    }

    /// Members of a retained set (empty if the set is absent).
    pub fn set(&self, id: SetId) -> VertexSet {
        self.assignment.iter().filter(|&(_, s)| *s == id).map(|(&v, _)| v).collect()
    }

    /// Members of `family` at cycle position `i` (taken mod the length).
    pub fn get(&self, family: Family, i: usize) -> VertexSet {
        let k = self.k();
        let id = match (family, k) {
            (Family::Z, 5) | (Family::R, _) => SetId::bare(family),
            (Family::Z, 6) => SetId::new(family, i % 3),
            _ => SetId::new(family, i % k),
        };
        self.set(id)
    }

    /// Retained sets with their members.
    pub fn sets(&self) -> BTreeMap<SetId, VertexSet> {
        let mut out: BTreeMap<SetId, Vec<usize>> = BTreeMap::new();
        for (&v, &id) in &self.assignment {
            out.entry(id).or_default().push(v);
        }
        out.into_iter().map(|(id, vs)| (id, VertexSet::from(vs))).collect()
    }

    pub fn removed_vertices(&self) -> VertexSet {
        self.removed.iter().map(|&(v, _)| v).collect()
    }
}

/// Checks on the removal ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub removed: usize,
    /// Number of candidate sets times the threshold.
    pub ledger_cap: usize,
    pub within_cap: bool,
    /// Hole, retained and removed vertices partition the vertex set.
    pub partition_ok: bool,
    /// Every removed set is below the threshold and every retained one is
    /// at or above it.
    pub sizes_ok: bool,
    /// Re-adding the removed vertices gives back `g`: each was classified
    /// by its trace to the set recorded in the ledger.
    pub reproduces_input: bool,
}

impl ReductionReport {
    pub fn ok(&self) -> bool {
        self.within_cap && self.partition_ok && self.sizes_ok && self.reproduces_input
    }
}

/// Number of candidate sets on a `k`-cycle.
pub fn family_count(k: usize) -> usize {
    match k {
        5 => 5 + 5 + 5 + 1 + 1,
        6 => 6 + 6 + 6 + 3,
        _ => 7 + 7 + 7,
    }
}

pub fn reduction_consistency(g: &Graph, d: &Decomposition) -> ReductionReport {
    let k = d.k();
    let mut seen = alloc::vec![0u8; g.n()];
    let mut bump = |v: usize| {
        if let Some(c) = seen.get_mut(v) {
            *c += 1;
        }
    };
    d.hole.vertices().iter().for_each(|&v| bump(v));
    d.assignment.keys().for_each(|&v| bump(v));
    d.removed.iter().for_each(|&(v, _)| bump(v));
    let partition_ok = seen.iter().all(|&c| c == 1);
    let mut removed_sizes: BTreeMap<SetId, usize> = BTreeMap::new();
    for &(_, id) in &d.removed {
        *removed_sizes.entry(id).or_default() += 1;
    }
    let sizes_ok = removed_sizes.values().all(|&s| s < d.threshold)
        && d.sets().values().all(|s| s.len() >= d.threshold)
        && removed_sizes.keys().all(|id| !d.assignment.values().any(|r| r == id));
    let reproduces_input = d.removed.iter().all(|&(v, id)| set_of_trace(&trace_of(g, &d.hole, v), k) == Some(id))
        && d.assignment.iter().all(|(&v, &id)| set_of_trace(&trace_of(g, &d.hole, v), k) == Some(id));
    let ledger_cap = family_count(k) * d.threshold;
    ReductionReport {
        removed: d.removed.len(),
        ledger_cap,
        within_cap: d.removed.len() <= ledger_cap,
        partition_ok,
        sizes_ok,
        reproduces_input,
    }
}
