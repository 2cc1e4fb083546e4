//! Test instances: class members planted around a hole, and rejection
//! sampling of random graphs.
//!
//! Planting builds the hole, makes every requested set a clique attached
//! to its trace, and then fixes the relation between each pair of sets in
//! turn. A pair takes an explicitly requested relation or tries join,
//! anticomplete, a partial matching and a co-matching in random order,
//! keeping the first that leaves the partial graph in the class. A run
//! that gets stuck, or whose result fails the final checks, is retried
//! with fresh random choices.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::{
    classify, emptiness_rules, pair_rules, verify_properties, Family, PairRule, SetId, DEFAULT_THRESHOLD,
};
use crate::graph::{Graph, VertexSet};
use crate::pattern::{is_class_member, Hole};

/// Relation between two planted sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    Join,
    CoJoin,
    /// A partial matching: every vertex has at most one neighbour across.
    Matching,
    /// The complement of a partial matching.
    CoMatching,
}

const ALL_KINDS: [RelationKind; 4] =
    [RelationKind::Join, RelationKind::CoJoin, RelationKind::Matching, RelationKind::CoMatching];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationChoice {
    pub a: String,
    pub b: String,
    pub kind: RelationKind,
}

fn default_attempts() -> usize {
    40
}

/// What to plant. Set names use the display form (`X0`, `T3`, `Z`, `R`).
/// Sets below the threshold are allowed; they end up removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantSpec {
    pub hole: usize,
    pub sizes: BTreeMap<String, usize>,
    #[serde(default)]
    pub relations: Vec<RelationChoice>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_attempts")]
    pub attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("hole length {0} is not 5, 6 or 7")]
    BadHole(usize),
    #[error("{0}")]
    BadSet(String),
    #[error("sets {premise:?} non-empty force {empty} to be empty")]
    Inconsistent { premise: Vec<String>, empty: String },
    #[error("no class member found in {attempts} attempts")]
    InfeasibleSpec { attempts: usize },
}

/// Cycle positions a set is attached to.
fn trace(id: SetId, k: usize) -> Vec<usize> {
    let offs: &[usize] = match (id.family, k) {
        (Family::T, _) => &[0, 1],
        (Family::X, _) => &[0, 1, 2],
        (Family::Y, _) => &[0, 1, 2, 3],
        (Family::Z, 5) => return (0..5).collect(),
        (Family::Z, _) => &[0, 1, 3, 4],
        _ => &[],
    };
    let i = id.index.unwrap_or(0);
    offs.iter().map(|o| (i + o) % k).collect()
}

fn check_set(id: SetId, k: usize) -> Result<(), GenError> {
    let ok = match (id.family, id.index) {
        (Family::T, Some(i)) => k != 7 && i < k,
        (Family::X, Some(i)) => i < k,
        (Family::Y, Some(i)) => k != 5 && i < k,
        (Family::Z, None) | (Family::R, None) => k == 5,
        (Family::Z, Some(i)) => k != 5 && i < k,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(GenError::BadSet(format!("set {id} does not exist around a {k}-hole")))
    }
}

/// Checks the requested non-empty pattern against the emptiness rules,
/// counting only sets at or above the default threshold.
pub fn check_pattern(k: usize, sets: &BTreeMap<SetId, usize>) -> Result<(), GenError> {
    let big = |id: &SetId| sets.get(id).is_some_and(|&n| n >= DEFAULT_THRESHOLD);
    for (pre, tgt) in emptiness_rules(k) {
        if pre.iter().all(big) && big(&tgt) {
            return Err(GenError::Inconsistent {
                premise: pre.iter().map(|s| format!("{s}")).collect(),
                empty: format!("{tgt}"),
            });
        }
    }
    // Families that must vanish outright.
    for (&id, &n) in sets {
        let vanish = match (k, id.family) {
            (6 | 7, Family::Z) | (5, Family::Y) => true,
            (5, Family::T | Family::X) => sets.get(&SetId::bare(Family::Z)).is_some_and(|&z| z >= DEFAULT_THRESHOLD),
            _ => false,
        };
        if vanish && n >= DEFAULT_THRESHOLD {
            return Err(GenError::Inconsistent { premise: Vec::new(), empty: format!("{id}") });
        }
    }
    Ok(())
}

fn parse_spec(spec: &PlantSpec) -> Result<BTreeMap<SetId, usize>, GenError> {
    if !(5..=7).contains(&spec.hole) {
        return Err(GenError::BadHole(spec.hole));
    }
    let mut sets = BTreeMap::new();
    for (name, &size) in &spec.sizes {
        let id: SetId = name.parse().map_err(GenError::BadSet)?;
        check_set(id, spec.hole)?;
        if size > 0 {
            sets.insert(id, size);
        }
    }
    check_pattern(spec.hole, &sets)?;
    Ok(sets)
}

struct Builder {
    adj: Vec<Vec<bool>>,
}

impl Builder {
    fn set(&mut self, u: usize, v: usize, e: bool) {
        self.adj[u][v] = e;
        self.adj[v][u] = e;
    }

    fn graph_on(&self, verts: &[usize]) -> Graph {
        Graph::from_fn(verts.len(), |a, b| self.adj[verts[a]][verts[b]])
    }
}

fn relation_edges(kind: RelationKind, a: &[usize], b: &[usize], rng: &mut ChaCha8Rng) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    match kind {
        RelationKind::Join | RelationKind::CoJoin => {
            let e = kind == RelationKind::Join;
            for &u in a {
                for &v in b {
                    out.push((u, v, e));
                }
            }
        }
        RelationKind::Matching | RelationKind::CoMatching => {
            let base = kind == RelationKind::CoMatching;
            let mut bs = b.to_vec();
            bs.shuffle(rng);
            let m = rng.random_range(1..=a.len().min(b.len()));
            for &u in a {
                for &v in b {
                    out.push((u, v, base));
                }
            }
            let mut as_ = a.to_vec();
            as_.shuffle(rng);
            for (&u, &v) in as_.iter().zip(&bs).take(m) {
                out.push((u, v, !base));
            }
        }
    }
    out
}

fn satisfies(kind: RelationKind, rule: PairRule) -> bool {
    use RelationKind as K;
    match rule {
        PairRule::Join => kind == K::Join,
        PairRule::CoJoin => kind == K::CoJoin,
        PairRule::AtMost { adjacent: true, k } => kind == K::CoJoin || (kind == K::Matching && k >= 1),
        PairRule::AtMost { adjacent: false, k } => kind == K::Join || (kind == K::CoMatching && k >= 1),
    }
}

/// Relations between two big sets that the table allows; all of them when
/// a set is small or the table rules everything out.
fn allowed_kinds(
    rules: &[(Vec<SetId>, SetId, SetId, PairRule)],
    big: &dyn Fn(&SetId) -> bool,
    a: SetId,
    b: SetId,
) -> Vec<RelationKind> {
    if !big(&a) || !big(&b) {
        return ALL_KINDS.to_vec();
    }
    let applicable: Vec<PairRule> = rules
        .iter()
        .filter(|(pre, x, y, _)| ((*x, *y) == (a, b) || (*x, *y) == (b, a)) && pre.iter().all(big))
        .map(|r| r.3)
        .collect();
    let ks: Vec<RelationKind> =
        ALL_KINDS.iter().copied().filter(|&kind| applicable.iter().all(|&r| satisfies(kind, r))).collect();
    if ks.is_empty() {
        ALL_KINDS.to_vec()
    } else {
        ks
    }
}

fn attempt(
    k: usize,
    sets: &BTreeMap<SetId, usize>,
    fixed: &BTreeMap<(SetId, SetId), RelationKind>,
    rng: &mut ChaCha8Rng,
) -> Option<Graph> {
    let mut groups: Vec<(SetId, Vec<usize>)> = Vec::new();
    let mut n = k;
    for (&id, &size) in sets {
        groups.push((id, (n..n + size).collect()));
        n += size;
    }
    let mut b = Builder { adj: vec![vec![false; n]; n] };
    for i in 0..k {
        b.set(i, (i + 1) % k, true);
    }
    for (id, vs) in &groups {
        for (x, &u) in vs.iter().enumerate() {
            for &v in &vs[x + 1..] {
                b.set(u, v, true);
            }
            for p in trace(*id, k) {
                b.set(u, p, true);
            }
        }
    }
    let rules = pair_rules(k);
    let big = |id: &SetId| sets.get(id).is_some_and(|&n| n >= DEFAULT_THRESHOLD);
    for (gi, (ida, va)) in groups.iter().enumerate() {
        // Only relations already decided are checked: the hole, the
        // groups up to the current partner, and the group being placed.
        let mut placed: Vec<usize> = (0..k).collect();
        placed.extend(va);
        for (idb, vb) in &groups[..gi] {
            placed.extend(vb);
            let kinds = match fixed.get(&(*idb, *ida)).or_else(|| fixed.get(&(*ida, *idb))) {
                Some(&kind) => vec![kind],
                None => {
                    let mut ks = allowed_kinds(&rules, &big, *ida, *idb);
                    ks.shuffle(rng);
                    ks
                }
            };
            let mut ok = false;
            for kind in kinds {
                for (u, v, e) in relation_edges(kind, va, vb, rng) {
                    b.set(u, v, e);
                }
                if is_class_member(&b.graph_on(&placed)).is_member() {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return None;
            }
        }
    }
    let mut names: Vec<String> = (0..k).map(|i| format!("h{i}")).collect();
    for (id, vs) in &groups {
        names.extend((0..vs.len()).map(|j| format!("{}_{j}", id.label_name())));
    }
    let all: Vec<usize> = (0..n).collect();
    b.graph_on(&all).with_names(names).ok()
}

/// Final acceptance of a planted graph: class member, classified around
/// the planted hole with every property passing. A non-empty `T` set closes
/// a longer hole, so longer holes are not excluded here.
pub fn accept_planted(g: &Graph, k: usize) -> bool {
    if !is_class_member(g).is_member() {
        return false;
    }
    match classify(g, &Hole((0..k).collect()), DEFAULT_THRESHOLD) {
        Ok(d) => verify_properties(g, &d).all_pass(),
        Err(_) => false,
    }
}

/// Plant a class member. The hole is on vertices `0..hole`, followed by
/// the sets in name order.
pub fn plant(spec: &PlantSpec) -> Result<Graph, GenError> {
    let sets = parse_spec(spec)?;
    let mut fixed = BTreeMap::new();
    for r in &spec.relations {
        let a: SetId = r.a.parse().map_err(GenError::BadSet)?;
        let b: SetId = r.b.parse().map_err(GenError::BadSet)?;
        fixed.insert((a, b), r.kind);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.attempts {
        if let Some(g) = attempt(spec.hole, &sets, &fixed, &mut rng) {
            if accept_planted(&g, spec.hole) {
                return Ok(g);
            }
        }
    }
    Err(GenError::InfeasibleSpec { attempts: spec.attempts })
}

/// A random spec whose non-empty pattern passes [`check_pattern`]: up to
/// `max_sets` big sets of size `5..=big_max`, plus occasionally a small
/// set that will be removed.
pub fn random_spec(hole: usize, seed: u64, max_sets: usize, big_max: usize) -> PlantSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<SetId> = Vec::new();
    for i in 0..hole {
        pool.push(SetId::new(Family::X, i));
        if hole != 5 {
            pool.push(SetId::new(Family::Y, i));
        }
        if hole != 7 {
            pool.push(SetId::new(Family::T, i));
        }
    }
    if hole == 5 {
        pool.push(SetId::bare(Family::Z));
        pool.push(SetId::bare(Family::R));
    }
    pool.shuffle(&mut rng);
    let want = rng.random_range(1..=max_sets.max(1));
    let mut sets: BTreeMap<SetId, usize> = BTreeMap::new();
    for id in pool {
        if sets.len() >= want {
            break;
        }
        sets.insert(id, rng.random_range(DEFAULT_THRESHOLD..=big_max.max(DEFAULT_THRESHOLD)));
        if check_pattern(hole, &sets).is_err() {
            sets.remove(&id);
        }
    }
    let mut sizes: BTreeMap<String, usize> = sets.iter().map(|(id, &n)| (format!("{id}"), n)).collect();
    if rng.random_bool(0.3) {
        // A small set, removed by the threshold.
        let fam = if hole == 7 { Family::X } else { Family::T };
        let id = SetId::new(fam, rng.random_range(0..hole));
        sizes.entry(format!("{id}")).or_insert(rng.random_range(1..DEFAULT_THRESHOLD));
    }
    PlantSpec { hole, sizes, relations: Vec::new(), seed: rng.random(), attempts: default_attempts() }
}

/// Draw Erdős–Rényi graphs until one is a class member, up to `budget`
/// draws. Returns the member and the number of draws made.
pub fn reject_sample_with_budget(n: usize, p: f64, seed: u64, budget: usize) -> (Option<Graph>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 1..=budget {
        let mut g = Graph::empty(n);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p.clamp(0.0, 1.0)) {
                    edges.push((u, v));
                }
            }
        }
        if !edges.is_empty() {
            g = Graph::from_edges(n, edges).expect("valid edges");
        }
        if is_class_member(&g).is_member() {
            return (Some(g), draw);
        }
    }
    (None, budget)
}

/// Default draw budget of [`reject_sample`].
pub const REJECT_BUDGET: usize = 1000;

pub fn reject_sample(n: usize, p: f64, seed: u64) -> Option<Graph> {
    reject_sample_with_budget(n, p, seed, REJECT_BUDGET).0
}

/// Vertices of a planted set, by name order position.
pub fn planted_set(g: &Graph, name: &str) -> VertexSet {
    let prefix = format!("{}_", name.to_ascii_lowercase());
    (0..g.n()).filter(|&v| g.name(v).starts_with(&prefix)).collect()
}
