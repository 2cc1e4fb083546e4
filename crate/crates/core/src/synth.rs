//! Clique-width expressions for class members that contain a 5-, 6- or
//! 7-hole.
//!
//! The retained sets of a decomposition are grouped into blocks: connected
//! components of the graph whose edges are the set pairs that are neither
//! complete nor anticomplete to each other. A block is built by the
//! placement engine with one live label per unit and one permanent label
//! per set. Blocks are then joined through their permanent labels, and the
//! hole and the removed vertices are attached with private labels.
//!
//! Symmetric configurations are reported in a canonical rotation of the
//! hole so that the case trace names one representative per case.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

use crate::cwd::builders::{build_units, Unit};
use crate::cwd::program::Mode;
use crate::cwd::{CwdExpr, Label, Program};
use crate::decomp::{
    classify, preferred_hole, verify_properties, ClassifyError, Decomposition, Family, SetId, DEFAULT_THRESHOLD,
};
use crate::graph::{Graph, VertexSet};
use crate::pattern::{find_hole, is_class_member, Hole, Occurrence};

/// A symmetry of the hole: positions map to `shift + p`, or to `shift - p`
/// when `reflected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rotation {
    pub shift: usize,
    pub reflected: bool,
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation { shift: 0, reflected: false };

    /// Image of a set under the symmetry on a `k`-cycle.
    pub fn apply(&self, id: SetId, k: usize) -> SetId {
        let Some(i) = id.index else { return id };
        let span = match id.family {
            Family::T => 2,
            Family::X => 3,
            Family::Y => 4,
            Family::Z => 5,
            _ => 1,
        };
        let j = if self.reflected { (self.shift + 3 * k + 1 - i - span) % k } else { (i + self.shift) % k };
        let j = if id.family == Family::Z && k == 6 { j % 3 } else { j };
        SetId::new(id.family, j)
    }
}

/// The symmetry whose image of `ids` is lexicographically smallest.
pub fn canonical_rotation(k: usize, ids: &[SetId]) -> Rotation {
    let mut best: Option<(Vec<SetId>, Rotation)> = None;
    for reflected in [false, true] {
        for shift in 0..k {
            let r = Rotation { shift, reflected };
            let mut key: Vec<SetId> = ids.iter().map(|&id| r.apply(id, k)).collect();
            key.sort();
            if best.as_ref().map_or(true, |(b, _)| key < *b) {
                best = Some((key, r));
            }
        }
    }
    best.map_or(Rotation::IDENTITY, |(_, r)| r)
}

/// One step of the case analysis that fired.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub case: String,
    pub sets: Vec<String>,
    pub builder: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn entry(case: impl Into<String>, sets: Vec<String>, builder: impl Into<String>, note: Option<String>) -> TraceEntry {
    TraceEntry { case: case.into(), sets, builder: builder.into(), note }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockBound {
    pub builder: String,
    pub sets: Vec<String>,
    /// One live label per unit.
    pub live: usize,
    /// Permanent labels.
    pub homes: usize,
}

/// How the declared bound is made up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundBreakdown {
    pub blocks: Vec<BlockBound>,
    /// Shared overflow label (0 or 1).
    pub spare: usize,
    /// Labels of the expression before attaching the hole.
    pub core: usize,
    /// Largest `core` the case tree can need for this hole length.
    pub static_core_cap: usize,
    pub hole: usize,
    pub removed: usize,
    /// Temporary label used while attaching.
    pub attach: usize,
    pub declared: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub expr: CwdExpr,
    pub width_achieved: usize,
    pub declared_bound: usize,
    pub hole_length: usize,
    pub rotation: Rotation,
    pub case_trace: Vec<TraceEntry>,
    pub bound: BoundBreakdown,
}

/// Evidence that a class member is perfect: it has no induced cycle of
/// length 5, 6 or 7, and inside the class longer holes contain a 4K1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectCertificate {
    pub checked_hole_lengths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Synthesis {
    Expression(Box<SynthesisResult>),
    Perfect(PerfectCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("graph is not a class member: {0:?}")]
    NotInClass(Occurrence),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("decomposition is around a {found}-hole, expected {expected}")]
    WrongHole { expected: usize, found: usize },
    #[error("properties fail: {0:?}")]
    PropertyFailure(Vec<String>),
    #[error("graph contains a longer hole {0:?}")]
    ContainsLongerHole(Hole),
    #[error("case not covered for {sets:?}: {reason}")]
    CaseNotCovered { sets: Vec<String>, reason: String },
    #[error("internal defect: {0}")]
    Defect(String),
}

/// Largest number of labels the block stage can use on a `k`-hole: two per
/// set that can be non-empty together, four more per `T` set (a `T` set
/// may be split in three against a `Y` set) and one spare.
pub const fn static_core_cap(k: usize) -> usize {
    match k {
        7 => 2 * MAX_SETS[2] + 1,
        6 => 2 * MAX_SETS[1] + 4 * MAX_T[1] + 1,
        _ => 2 * MAX_SETS[0] + 4 * MAX_T[0] + 1,
    }
}

/// Most sets that can be non-empty together, per hole length 5, 6, 7.
/// Derived from the emptiness rules by exhaustive search (see tests).
const MAX_SETS: [usize; 3] = [6, 7, 6];
/// Most `T` sets that can be non-empty together, per hole length 5, 6, 7.
const MAX_T: [usize; 3] = [3, 3, 0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rel {
    Join,
    CoJoin,
    Adj,
    NonAdj,
    Other,
}

impl Rel {
    fn trivial(self) -> bool {
        matches!(self, Rel::Join | Rel::CoJoin)
    }

    fn mode(self) -> Mode {
        match self {
            Rel::Join => Mode::Join,
            Rel::CoJoin => Mode::CoJoin,
            Rel::Adj => Mode::Adj,
            Rel::NonAdj | Rel::Other => Mode::NonAdj,
        }
    }
}

fn relation(g: &Graph, a: &VertexSet, b: &VertexSet) -> Rel {
    let r = g.relation_between(a, b).expect("disjoint sets");
    if r.is_join() {
        Rel::Join
    } else if r.is_cojoin() {
        Rel::CoJoin
    } else if r.neighbours_both(1) {
        Rel::Adj
    } else if r.non_neighbours_both(1) {
        Rel::NonAdj
    } else {
        Rel::Other
    }
}

/// A piece of a set with its own permanent label. Pieces other than the
/// whole set come from splitting and are renamed to the set at the end.
#[derive(Debug, Clone)]
struct Part {
    set: SetId,
    name: String,
    vertices: VertexSet,
}

impl Part {
    fn home(&self) -> Label {
        Label::old_of(&self.name)
    }

    fn is_split(&self) -> bool {
        self.name != self.set.label_name()
    }
}

/// Vertices sharing a live label: one part, or several merged parts whose
/// union is a clique.
#[derive(Debug, Clone)]
struct PUnit {
    name: String,
    parts: Vec<Part>,
}

impl PUnit {
    fn vertices(&self) -> VertexSet {
        self.parts.iter().fold(VertexSet::new(), |acc, p| acc.union(&p.vertices))
    }
}

/// Split the single-part unit `u` against `other` into the piece
/// anticomplete to it, the piece complete to it and the rest.
fn split_against(g: &Graph, u: &PUnit, other: &PUnit) -> Option<Vec<PUnit>> {
    let [part] = u.parts.as_slice() else { return None };
    let ov = other.vertices();
    let (mut none, mut all, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for v in part.vertices.iter() {
        let k = ov.iter().filter(|&w| g.has_edge(v, w)).count();
        if k == 0 {
            none.push(v);
        } else if k == ov.len() {
            all.push(v);
        } else {
            rest.push(v);
        }
    }
    if none.is_empty() && all.is_empty() {
        return None;
    }
    let rest = VertexSet::from(rest);
    if !rest.is_empty() && relation(g, &rest, &ov) == Rel::Other {
        return None;
    }
    let mut out = Vec::new();
    for (suffix, vs) in [("", rest), ("_no_", none.into()), ("_all_", all.into())] {
        if vs.is_empty() {
            continue;
        }
        let name = if suffix.is_empty() { u.name.clone() } else { format!("{}{suffix}{}", u.name, other.name) };
        out.push(PUnit { name: name.clone(), parts: vec![Part { set: part.set, name, vertices: vs }] });
    }
    Some(out)
}

fn split_units(g: &Graph, units: &mut Vec<PUnit>) -> Result<Vec<String>, SynthError> {
    let mut notes = Vec::new();
    for _ in 0..64 {
        let n = units.len();
        let pair = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| relation(g, &units[a].vertices(), &units[b].vertices()) == Rel::Other);
        let Some((a, b)) = pair else { return Ok(notes) };
        // Prefer splitting a T set.
        let order = if units[b].parts[0].set.family == Family::T { [(b, a), (a, b)] } else { [(a, b), (b, a)] };
        let mut done = false;
        for (s, o) in order {
            if let Some(pieces) = split_against(g, &units[s], &units[o]) {
                notes.push(format!("{} split against {}", units[s].name, units[o].name));
                units.splice(s..=s, pieces);
                done = true;
                break;
            }
        }
        if !done {
            return Err(SynthError::CaseNotCovered {
                sets: vec![units[a].name.clone(), units[b].name.clone()],
                reason: "relation is neither complete, anticomplete nor a matching in either direction".into(),
            });
        }
    }
    Err(SynthError::Defect("splitting did not terminate".into()))
}

fn components(g: &Graph, units: &[PUnit]) -> Vec<Vec<usize>> {
    let n = units.len();
    let verts: Vec<VertexSet> = units.iter().map(PUnit::vertices).collect();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], mut i: usize) -> usize {
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for a in 0..n {
        for b in a + 1..n {
            if !relation(g, &verts[a], &verts[b]).trivial() {
                let (ra, rb) = (root(&mut comp, a), root(&mut comp, b));
                comp[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = root(&mut comp, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Clique,
    Pairs,
    NonPairs,
    Partition,
    Rows,
    PartnerWalk,
}

impl Shape {
    fn name(self) -> &'static str {
        match self {
            Shape::Clique => "clique",
            Shape::Pairs => "pairs",
            Shape::NonPairs => "non-pairs",
            Shape::Partition => "clique-partition",
            Shape::Rows => "rows",
            Shape::PartnerWalk => "partner-walk",
        }
    }

    fn spare(self) -> bool {
        matches!(self, Shape::Rows | Shape::PartnerWalk)
    }
}

fn shape_of(g: &Graph, units: &[PUnit], rels: &[Vec<Rel>]) -> Shape {
    let m = units.len();
    match m {
        1 => return Shape::Clique,
        2 => {
            return match rels[0][1] {
                Rel::Adj => Shape::Pairs,
                Rel::NonAdj => Shape::NonPairs,
                _ => Shape::PartnerWalk,
            }
        }
        _ => {}
    }
    let pairs = || (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b)));
    if pairs().all(|(a, b)| matches!(rels[a][b], Rel::Adj | Rel::CoJoin)) {
        // Each vertex's neighbours in the other units must form a clique.
        let verts: Vec<VertexSet> = units.iter().map(PUnit::vertices).collect();
        let foreign_ok = (0..m).all(|a| {
            verts[a].iter().all(|v| {
                let nb: VertexSet = (0..m)
                    .filter(|&b| b != a)
                    .flat_map(|b| verts[b].iter().filter(|&w| g.has_edge(v, w)).collect::<Vec<_>>())
                    .collect();
                g.is_clique(&nb)
            })
        });
        if foreign_ok {
            return Shape::Partition;
        }
    }
    let degree = |a: usize| (0..m).filter(|&b| b != a && !rels[a][b].trivial()).count();
    let edges = pairs().filter(|&(a, b)| !rels[a][b].trivial()).count();
    if (0..m).all(|a| degree(a) <= 2) && (edges == m - 1 || edges == m) {
        return Shape::Rows;
    }
    Shape::PartnerWalk
}

struct Planned {
    units: Vec<PUnit>,
    builder: String,
    spare: bool,
    program: Program,
}

fn rel_matrix(g: &Graph, units: &[PUnit]) -> Vec<Vec<Rel>> {
    let verts: Vec<VertexSet> = units.iter().map(PUnit::vertices).collect();
    let m = units.len();
    (0..m)
        .map(|a| (0..m).map(|b| if a == b { Rel::Join } else { relation(g, &verts[a], &verts[b]) }).collect())
        .collect()
}

fn run_block(g: &Graph, units: &[PUnit], rels: &[Vec<Rel>], spare: bool) -> Option<Program> {
    let eu: Vec<Unit> = units
        .iter()
        .map(|u| Unit {
            live: u.name.clone(),
            homes: u.parts.iter().flat_map(|p| p.vertices.iter().map(|v| (v, p.home()))).collect(),
        })
        .collect();
    let modes = rels.iter().map(|row| row.iter().map(|r| r.mode()).collect()).collect();
    build_units(g, &eu, modes, spare, None).ok()
}

fn builder_name(units: &[PUnit], shape: Shape) -> String {
    let split = units.iter().flat_map(|u| &u.parts).any(Part::is_split);
    let merged = units.iter().any(|u| u.parts.len() > 1);
    let ys: BTreeSet<SetId> =
        units.iter().flat_map(|u| &u.parts).filter(|p| p.set.family == Family::Y).map(|p| p.set).collect();
    let mut name = String::from(shape.name());
    if split {
        name = format!("{}/{}", if ys.len() >= 2 { "interleaved" } else { "one-sided-split" }, name);
    }
    if merged {
        name = format!("merged-clique/{name}");
    }
    name
}

/// Plan one component, merging joined units when the plain shape fails.
fn plan_component(g: &Graph, units: Vec<PUnit>, depth: usize) -> Option<Vec<Planned>> {
    let rels = rel_matrix(g, &units);
    let shape = shape_of(g, &units, &rels);
    let split = units.iter().flat_map(|u| &u.parts).any(Part::is_split);
    let spare = shape.spare() || split;
    if shape != Shape::PartnerWalk {
        if let Some(program) = run_block(g, &units, &rels, spare) {
            return Some(vec![Planned { builder: builder_name(&units, shape), units, spare, program }]);
        }
    }
    if depth > 0 {
        let m = units.len();
        for a in 0..m {
            for b in a + 1..m {
                if rels[a][b] != Rel::Join {
                    continue;
                }
                let mut merged =
                    PUnit { name: format!("{}_{}", units[a].name, units[b].name), parts: units[a].parts.clone() };
                merged.parts.extend(units[b].parts.iter().cloned());
                let mv = merged.vertices();
                let rest: Vec<PUnit> =
                    units.iter().enumerate().filter(|&(i, _)| i != a && i != b).map(|(_, u)| u.clone()).collect();
                if rest.iter().any(|u| relation(g, &mv, &u.vertices()) == Rel::Other) {
                    continue;
                }
                let mut next = vec![merged];
                next.extend(rest);
                if let Some(p) = plan_all(g, next, depth - 1) {
                    return Some(p);
                }
            }
        }
    }
    let program = run_block(g, &units, &rels, true)?;
    Some(vec![Planned { builder: builder_name(&units, Shape::PartnerWalk), units, spare: true, program }])
}

fn plan_all(g: &Graph, units: Vec<PUnit>, depth: usize) -> Option<Vec<Planned>> {
    let mut out = Vec::new();
    for comp in components(g, &units) {
        let members: Vec<PUnit> = comp.iter().map(|&i| units[i].clone()).collect();
        out.extend(plan_component(g, members, depth)?);
    }
    Some(out)
}

fn index_pattern(k: usize, idx: &[usize]) -> String {
    if idx.len() == 1 {
        return "single".into();
    }
    let mut dist = BTreeSet::new();
    for (n, &a) in idx.iter().enumerate() {
        for &b in &idx[n + 1..] {
            let d = (b + k - a) % k;
            dist.insert(d.min(k - d));
        }
    }
    let words: Vec<&str> = dist
        .iter()
        .map(|d| match d {
            1 => "consecutive",
            2 => "gap-two",
            _ => "gap-three",
        })
        .collect();
    words.join("-and-")
}

/// Outcome of the block stage, before the hole is attached.
struct Core {
    program: Program,
    blocks: Vec<Planned>,
    joins: Vec<String>,
    notes: Vec<String>,
}

fn build_core(g: &Graph, d: &Decomposition) -> Result<Core, SynthError> {
    let mut units: Vec<PUnit> = d
        .sets()
        .into_iter()
        .map(|(id, vs)| {
            let name = id.label_name();
            PUnit { name: name.clone(), parts: vec![Part { set: id, name, vertices: vs }] }
        })
        .collect();
    let notes = split_units(g, &mut units)?;
    let blocks = plan_all(g, units.clone(), 2).ok_or_else(|| SynthError::CaseNotCovered {
        sets: units.iter().map(|u| u.name.clone()).collect(),
        reason: "no block shape places these sets within the label budget".into(),
    })?;
    let mut program = Program::new();
    let mut classes: Vec<(usize, Label, VertexSet)> = Vec::new();
    for (bi, b) in blocks.iter().enumerate() {
        program.extend(b.program.clone());
        for p in b.units.iter().flat_map(|u| &u.parts) {
            classes.push((bi, p.home(), p.vertices.clone()));
        }
    }
    let mut joins = Vec::new();
    for (n, (ba, la, va)) in classes.iter().enumerate() {
        for (bb, lb, vb) in &classes[n + 1..] {
            if ba == bb {
                continue;
            }
            match relation(g, va, vb) {
                Rel::Join => {
                    program.join(la.clone(), lb.clone());
                    joins.push(format!("{la}-{lb}"));
                }
                Rel::CoJoin => {}
                _ => return Err(SynthError::Defect(format!("{la} and {lb} are related across blocks"))),
            }
        }
    }
    for p in blocks.iter().flat_map(|b| &b.units).flat_map(|u| &u.parts) {
        if p.is_split() {
            program.relabel(p.home(), Label::old_of(&p.set.label_name()));
        }
    }
    Ok(Core { program, blocks, joins, notes })
}

/// Case entries for the non-empty sets, in canonical coordinates.
fn case_entries(g: &Graph, d: &Decomposition, rot: Rotation, core: &Core) -> Result<Vec<TraceEntry>, SynthError> {
    let k = d.k();
    let ids: Vec<SetId> = d.sets().into_keys().collect();
    let canon = |f: Family| -> Vec<usize> {
        let mut v: Vec<usize> =
            ids.iter().map(|&id| rot.apply(id, k)).filter(|c| c.family == f).filter_map(|c| c.index).collect();
        v.sort_unstable();
        v
    };
    let names = |fams: &[Family]| -> Vec<String> {
        ids.iter().filter(|id| fams.contains(&id.family)).map(|id| id.to_string()).collect()
    };
    let builders = |fams: &[Family]| -> String {
        let mut seen: Vec<&str> = Vec::new();
        for b in &core.blocks {
            if b.units.iter().flat_map(|u| &u.parts).any(|p| fams.contains(&p.set.family))
                && !seen.contains(&b.builder.as_str())
            {
                seen.push(&b.builder);
            }
        }
        seen.join("+")
    };
    let prefix = format!("c{k}");
    let mut out = Vec::new();
    let fams: &[(Family, &str)] = &[(Family::T, "t-sets"), (Family::X, "x-sets"), (Family::Y, "y-sets")];
    if k == 5 && !canon(Family::Z).is_empty() || ids.iter().any(|id| id.family == Family::Z && id.index.is_none()) {
        out.push(entry("c5/z-clique", names(&[Family::Z]), builders(&[Family::Z]), None));
    }
    for &(f, word) in fams {
        let idx = canon(f);
        if !idx.is_empty() {
            out.push(entry(format!("{prefix}/{word}/{}", index_pattern(k, &idx)), names(&[f]), builders(&[f]), None));
        }
    }
    let present = |f: Family| ids.iter().any(|id| id.family == f);
    for (a, b, word) in [(Family::X, Family::T, "x-t"), (Family::T, Family::Y, "t-y"), (Family::X, Family::Y, "x-y")] {
        if present(a) && present(b) {
            out.push(entry(format!("{prefix}/{word}"), names(&[a, b]), builders(&[a, b]), None));
        }
    }
    if present(Family::R) {
        out.push(entry("c5/r-component", names(&[Family::R]), builders(&[Family::R]), None));
    }
    // Six-cycle sub-case with X0, X1, X3, T1, T3, T5 non-empty: X0 and X1
    // must be complete to each other.
    if k == 6 {
        let canon_ids: BTreeSet<SetId> = ids.iter().map(|&id| rot.apply(id, k)).collect();
        let need = [(Family::X, 0), (Family::X, 1), (Family::X, 3), (Family::T, 1), (Family::T, 3), (Family::T, 5)];
        if need.iter().all(|&(f, i)| canon_ids.contains(&SetId::new(f, i))) {
            let orig = |c: SetId| *ids.iter().find(|&&id| rot.apply(id, k) == c).expect("present");
            let (a, b) = (orig(SetId::new(Family::X, 0)), orig(SetId::new(Family::X, 1)));
            if relation(g, &d.set(a), &d.set(b)) != Rel::Join {
                return Err(SynthError::CaseNotCovered {
                    sets: vec![a.to_string(), b.to_string()],
                    reason: "derived join fails in the X0 X1 X3 T1 T3 T5 sub-case".into(),
                });
            }
            out.push(entry(
                "c6/x-t/three-t-sets",
                need.iter().map(|&(f, i)| orig(SetId::new(f, i)).to_string()).collect(),
                builders(&[Family::X, Family::T]),
                Some(format!("derived join {a}-{b} holds")),
            ));
        }
    }
    Ok(out)
}

fn check_no_longer_hole(g: &Graph, k: usize) -> Result<(), SynthError> {
    for len in (k + 1)..=7 {
        if let Some(h) = find_hole(g, len) {
            return Err(SynthError::ContainsLongerHole(h));
        }
    }
    Ok(())
}

fn synth_ck(g: &Graph, d: &Decomposition, k: usize) -> Result<SynthesisResult, SynthError> {
    if d.k() != k {
        return Err(SynthError::WrongHole { expected: k, found: d.k() });
    }
    let report = verify_properties(g, d);
    if !report.all_pass() {
        return Err(SynthError::PropertyFailure(report.failures().map(|e| e.id.clone()).collect()));
    }
    check_no_longer_hole(g, k)?;
    assemble(g, d)
}

/// Blocks, joins and attachment, without the precondition checks.
fn assemble(g: &Graph, d: &Decomposition) -> Result<SynthesisResult, SynthError> {
    let k = d.k();
    let ids: Vec<SetId> = d.sets().into_keys().collect();
    let rot = canonical_rotation(k, &ids);
    let core = build_core(g, d)?;

    let canonical = ids.iter().map(|&id| rot.apply(id, k).to_string()).collect::<Vec<_>>().join(" ");
    let mut trace = vec![entry(
        format!("c{k}/dispatch"),
        ids.iter().map(|id| id.to_string()).collect(),
        "canonical-rotation",
        Some(format!(
            "shift {} reflected {}; canonical sets {}",
            rot.shift,
            rot.reflected,
            if canonical.is_empty() { "none" } else { &canonical }
        )),
    )];
    trace.extend(case_entries(g, d, rot, &core)?);
    for note in &core.notes {
        trace.push(entry("split", Vec::new(), "split-by-neighbourhood", Some(note.clone())));
    }
    let mut blocks = Vec::new();
    for b in &core.blocks {
        let sets: Vec<String> = b.units.iter().flat_map(|u| &u.parts).map(|p| p.name.clone()).collect();
        let homes: BTreeSet<Label> = b.units.iter().flat_map(|u| &u.parts).map(Part::home).collect();
        trace.push(entry("block", sets.clone(), b.builder.clone(), None));
        blocks.push(BlockBound { builder: b.builder.clone(), sets, live: b.units.len(), homes: homes.len() });
    }
    if !core.joins.is_empty() {
        trace.push(entry("joins", core.joins.clone(), "inter-block-join", None));
    }

    let spare = usize::from(core.blocks.iter().any(|b| b.spare));
    let core_labels: usize = blocks.iter().map(|b| b.live + b.homes).sum::<usize>() + spare;
    let cap = static_core_cap(k);
    if core_labels > cap {
        return Err(SynthError::Defect(format!("core uses {core_labels} labels, static cap is {cap}")));
    }
    let mut removed: Vec<usize> = d.removed_vertices().into_vec();
    removed.sort_unstable();
    let mut extras: Vec<usize> = d.hole.vertices().to_vec();
    extras.extend(&removed);
    let full = crate::cwd::builders::attach_program(&core.program, g, &extras);
    trace.push(entry(
        "attach",
        vec!["hole".into(), "removed".into()],
        "attach-extra-vertices",
        Some(format!("{k} hole vertices, {} removed", removed.len())),
    ));
    let expr = full.to_expr().ok_or_else(|| SynthError::Defect("empty expression".into()))?;
    let declared = core_labels + k + removed.len() + 1;
    let width = expr.width();
    match expr.evaluate() {
        Ok(lg) if lg.matches(g) => {}
        _ => return Err(SynthError::Defect("expression does not evaluate to the input".into())),
    }
    if width > declared {
        return Err(SynthError::Defect(format!("width {width} exceeds declared {declared}")));
    }
    Ok(SynthesisResult {
        expr,
        width_achieved: width,
        declared_bound: declared,
        hole_length: k,
        rotation: rot,
        case_trace: trace,
        bound: BoundBreakdown {
            blocks,
            spare,
            core: core_labels,
            static_core_cap: cap,
            hole: k,
            removed: removed.len(),
            attach: 1,
            declared,
        },
    })
}

/// Expression for a class member decomposed around a 7-hole.
pub fn synth_c7(g: &Graph, d: &Decomposition) -> Result<SynthesisResult, SynthError> {
    synth_ck(g, d, 7)
}

/// Expression for a class member without a 7-hole, decomposed around a
/// 6-hole.
pub fn synth_c6(g: &Graph, d: &Decomposition) -> Result<SynthesisResult, SynthError> {
    synth_ck(g, d, 6)
}

/// Expression for a class member without 6- and 7-holes, decomposed
/// around a 5-hole.
pub fn synth_c5(g: &Graph, d: &Decomposition) -> Result<SynthesisResult, SynthError> {
    synth_ck(g, d, 5)
}

/// Synthesis around whatever hole `d` uses, without requiring the absence
/// of longer holes. A vertex seeing two consecutive hole vertices closes a
/// hole one longer, so `T` sets only show up here. Properties are still
/// verified and the expression is still checked by evaluation.
pub fn synth_around(g: &Graph, d: &Decomposition) -> Result<SynthesisResult, SynthError> {
    let report = verify_properties(g, d);
    if !report.all_pass() {
        return Err(SynthError::PropertyFailure(report.failures().map(|e| e.id.clone()).collect()));
    }
    assemble(g, d)
}

/// Full pipeline: membership, hole choice (7, then 6, then 5), default
/// threshold decomposition, synthesis.
pub fn synthesize(g: &Graph) -> Result<Synthesis, SynthError> {
    if let Some(w) = is_class_member(g).first_witness() {
        return Err(SynthError::NotInClass(w));
    }
    let Some(hole) = preferred_hole(g) else {
        return Ok(Synthesis::Perfect(PerfectCertificate { checked_hole_lengths: vec![5, 6, 7] }));
    };
    let d = classify(g, &hole, DEFAULT_THRESHOLD)?;
    let r = synth_ck(g, &d, hole.len())?;
    Ok(Synthesis::Expression(Box::new(r)))
}

impl SynthError {
    /// Short machine-readable kind.
    pub fn kind(&self) -> &'static str {
        match self {
            SynthError::NotInClass(_) => "not-in-class",
            SynthError::Classify(_) => "classify",
            SynthError::WrongHole { .. } => "wrong-hole",
            SynthError::PropertyFailure(_) => "property-failure",
            SynthError::ContainsLongerHole(_) => "contains-longer-hole",
            SynthError::CaseNotCovered { .. } => "case-not-covered",
            SynthError::Defect(_) => "defect",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::emptiness_rules;

    /// Hole on `0..k`, then each set as a clique adjacent to its trace.
    fn planted(k: usize, sets: &[(&[usize], usize)], extra: &dyn Fn(usize, usize) -> bool) -> (Graph, Vec<Vec<usize>>) {
        let mut groups = Vec::new();
        let mut next = k;
        for (_, size) in sets {
            groups.push((next..next + size).collect::<Vec<_>>());
            next += size;
        }
        let n = next;
        let group_of = |v: usize| groups.iter().position(|gr| gr.contains(&v));
        let g = Graph::from_fn(n, |u, v| {
            let (u, v) = (u.min(v), u.max(v));
            match (group_of(u), group_of(v)) {
                (None, None) => (v - u) % k == 1 || (v - u) % k == k - 1,
                (None, Some(b)) => sets[b].0.contains(&u),
                (Some(a), Some(b)) if a == b => true,
                _ => extra(u, v),
            }
        });
        (g, groups)
    }

    fn run(g: &Graph) -> SynthesisResult {
        assert!(is_class_member(g).is_member(), "{:?}", is_class_member(g).first_witness());
        match synthesize(g).unwrap() {
            Synthesis::Expression(r) => {
                assert!(r.expr.evaluate().unwrap().matches(g));
                assert!(r.width_achieved <= r.declared_bound);
                *r
            }
            Synthesis::Perfect(_) => panic!("expected a hole"),
        }
    }

    #[test]
    fn bare_cycles() {
        for k in [5, 6, 7] {
            let r = run(&Graph::cycle(k));
            assert_eq!(r.hole_length, k);
            assert_eq!(r.bound.core, 0);
            assert_eq!(r.declared_bound, k + 1);
        }
    }

    #[test]
    fn perfect_branch() {
        assert!(matches!(synthesize(&Graph::cycle(4)).unwrap(), Synthesis::Perfect(_)));
        assert!(matches!(synthesize(&Graph::from_fn(4, |_, _| false)), Err(SynthError::NotInClass(_))));
    }

    #[test]
    fn seven_hole_with_one_clique() {
        let (g, _) = planted(7, &[(&[0, 1, 2], 5)], &|_, _| false);
        let r = run(&g);
        assert!(r.case_trace.iter().any(|e| e.case == "c7/x-sets/single"));
        assert_eq!(r.bound.core, 2);
    }

    #[test]
    fn six_hole_partner_triangles() {
        let sets: [(&[usize], usize); 3] = [(&[0, 1], 5), (&[2, 3], 5), (&[4, 5], 5)];
        // Vertex j of each T set forms a triangle with vertex j of the others.
        let (g, _) = planted(6, &sets, &|u, v| (u - 6) % 5 == (v - 6) % 5);
        let r = run(&g);
        assert!(r.case_trace.iter().any(|e| e.builder == "clique-partition"), "{:#?}", r.case_trace);
        assert!(r.bound.core <= 6);
    }

    #[test]
    fn six_hole_split_t_set() {
        // Y0 on 0..=3, T1 on 1, 2: one T1 vertex sees none of Y0, the rest all.
        // Any Y0 vertex with a neighbour in the middle T set is the centre
        // of a claw with cycle positions 0 and 3, so this is not a class
        // member; the splitting path still has to be exact.
        let sets: [(&[usize], usize); 2] = [(&[0, 1, 2, 3], 5), (&[1, 2], 5)];
        let (g, _) = planted(6, &sets, &|_, v| v != 11);
        assert!(is_class_member(&g).claw.is_some());
        let d = classify(&g, &Hole((0..6).collect()), DEFAULT_THRESHOLD).unwrap();
        let r = assemble(&g, &d).unwrap();
        assert!(r.expr.evaluate().unwrap().matches(&g));
        assert!(r.case_trace.iter().any(|e| e.case == "split"), "{:#?}", r.case_trace);
    }

    #[test]
    fn five_hole_z_clique() {
        let (g, _) = planted(5, &[(&[0, 1, 2, 3, 4], 6)], &|_, _| false);
        let r = run(&g);
        assert!(r.case_trace.iter().any(|e| e.case == "c5/z-clique"));
    }

    #[test]
    fn five_hole_isolated_clique() {
        let (g, _) = planted(5, &[(&[], 5), (&[0, 1, 2], 5)], &|_, _| false);
        let r = run(&g);
        assert!(r.case_trace.iter().any(|e| e.case == "c5/r-component"));
    }

    #[test]
    fn five_hole_x_and_t_clique() {
        // X0, X1 and T1 (on 1, 2) together form one clique.
        let sets: [(&[usize], usize); 3] = [(&[0, 1, 2], 5), (&[1, 2, 3], 5), (&[1, 2], 5)];
        let (g, _) = planted(5, &sets, &|_, _| true);
        run(&g);
    }

    #[test]
    fn removed_vertices_are_attached() {
        // X0 has only two members and is removed at the default threshold.
        let (g, _) = planted(7, &[(&[0, 1, 2], 2), (&[3, 4, 5], 5)], &|_, _| false);
        let r = run(&g);
        assert_eq!(r.bound.removed, 2);
    }

    #[test]
    fn rotation_maps_sets_consistently() {
        for k in [5, 6, 7] {
            for shift in 0..k {
                for reflected in [false, true] {
                    let r = Rotation { shift, reflected };
                    for fam in [Family::T, Family::X, Family::Y] {
                        for i in 0..k {
                            let id = SetId::new(fam, i);
                            let span = match fam {
                                Family::T => 2,
                                Family::X => 3,
                                _ => 4,
                            };
                            let img: BTreeSet<usize> = (0..span)
                                .map(|j| {
                                    let p = (i + j) % k;
                                    if reflected {
                                        (shift + k - p) % k
                                    } else {
                                        (p + shift) % k
                                    }
                                })
                                .collect();
                            let out = r.apply(id, k).index.unwrap();
                            let want: BTreeSet<usize> = (0..span).map(|j| (out + j) % k).collect();
                            assert_eq!(img, want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn static_caps_match_emptiness_rules() {
        for (slot, k) in [(0usize, 5usize), (1, 6), (2, 7)] {
            let mut fams = vec![Family::X, Family::Y];
            if k < 7 {
                fams.push(Family::T);
            }
            if k == 5 {
                // Y is always empty on the 5-cycle.
                fams.retain(|&f| f != Family::Y);
            }
            let all: Vec<SetId> = fams.iter().flat_map(|&f| (0..k).map(move |i| SetId::new(f, i))).collect();
            let rules = emptiness_rules(k);
            let (mut best, mut best_t) = (0, 0);
            for mask in 0u32..(1 << all.len()) {
                let on = |id: &SetId| all.iter().position(|a| a == id).is_some_and(|p| mask >> p & 1 == 1);
                if rules.iter().any(|(pre, tgt)| pre.iter().all(on) && on(tgt)) {
                    continue;
                }
                let count = mask.count_ones() as usize;
                let ts = all.iter().filter(|id| id.family == Family::T && on(id)).count();
                best = best.max(count);
                best_t = best_t.max(ts);
            }
            if k == 5 {
                // The isolated clique can join any admissible pattern.
                best += 1;
            }
            assert_eq!((MAX_SETS[slot], MAX_T[slot]), (best, best_t), "hole {k}");
        }
    }
}
