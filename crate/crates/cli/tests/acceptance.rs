//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion other than a known-unattainable one fails.
//!
//! A criterion marked unattainable must still print FAIL; the run checks
//! the proof of unattainability instead, so it fails loudly should the
//! criterion ever become reachable or the proof stop holding.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use clawfree_core::colour::{colour_class_member, is_proper, Branch};
use clawfree_core::cwd::exact::{exact_clique_width, expression_within};
use clawfree_core::cwd::{
    evaluate, label_clique_partition, label_via_nonpairs, label_via_pairs, label_via_rows, text, Bond, CwdExpr, Label,
    NamedSet, PairMode, RowsSpec,
};
use clawfree_core::decomp::{classify, verify_properties, DEFAULT_THRESHOLD};
use clawfree_core::gen::{plant, random_spec, reject_sample};
use clawfree_core::pattern::{find_hole, find_induced, is_class_member, Hole, Pattern, CLASS_PATTERNS};
use clawfree_core::synth::{synth_around, synthesize, SynthError, Synthesis};
use clawfree_core::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances.
const EVAL_BUDGET: Duration = Duration::from_millis(1);
const BUILDER_INSTANCES: usize = 1000;
const BUILDER_BUDGET: Duration = Duration::from_secs(30);
const DETECTOR_GRAPHS: usize = 5000;
const DETECTOR_MAX_N: usize = 8;
const PLANTED_PER_HOLE: usize = 300;
const STRUCTURAL_BUDGET: Duration = Duration::from_secs(300);
const COLOUR_MEMBERS: usize = 200;
const COLOUR_MAX_N: usize = 12;
const COMPLEMENT_MAX_N: usize = 6;
const REPRO_RUNS: usize = 2;

struct Verdict {
    id: &'static str,
    name: &'static str,
    pass: bool,
    detail: String,
    /// Proven out of reach; FAIL is the expected outcome.
    unattainable: bool,
}

impl Verdict {
    fn new(id: &'static str, name: &'static str, pass: bool, detail: String) -> Verdict {
        Verdict { id, name, pass, detail, unattainable: false }
    }
}

/// The first problem, for the detail line.
fn first(problems: &[String]) -> String {
    problems.first().map(|p| format!(", first: {p}")).unwrap_or_default()
}

fn cw(label: u32) -> Label {
    Label::Int(label)
}

// ---------------------------------------------------------------- oracles

/// Does `g[sub]` equal `t` under some bijection? Plain permutation search.
fn isomorphic_on(g: &Graph, sub: &[usize], t: &Graph) -> bool {
    fn rec(g: &Graph, sub: &[usize], t: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let i = map.len();
        if i == t.n() {
            return true;
        }
        for (j, &v) in sub.iter().enumerate() {
            if used[j] || (0..i).any(|a| g.has_edge(map[a], v) != t.has_edge(a, i)) {
                continue;
            }
            used[j] = true;
            map.push(v);
            if rec(g, sub, t, map, used) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }
    rec(g, sub, t, &mut Vec::new(), &mut vec![false; sub.len()])
}

fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n)
        .filter(move |m| m.count_ones() as usize == k)
        .map(move |m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
}

fn oracle_contains(g: &Graph, p: Pattern) -> bool {
    let t = p.template();
    let mut degrees: Vec<usize> = (0..t.n()).map(|v| t.degree(v)).collect();
    degrees.sort_unstable();
    subsets(g.n(), t.n()).any(|s| {
        let mut d: Vec<usize> = s.iter().map(|&u| s.iter().filter(|&&w| g.has_edge(u, w)).count()).collect();
        d.sort_unstable();
        d == degrees && isomorphic_on(g, &s, &t)
    })
}

/// Some `k`-subset induces a connected 2-regular graph.
fn oracle_hole(g: &Graph, k: usize) -> bool {
    subsets(g.n(), k).any(|s| {
        if !s.iter().all(|&u| s.iter().filter(|&&w| g.has_edge(u, w)).count() == 2) {
            return false;
        }
        let mut seen = vec![s[0]];
        let mut stack = vec![s[0]];
        while let Some(u) = stack.pop() {
            for &w in &s {
                if g.has_edge(u, w) && !seen.contains(&w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        seen.len() == k
    })
}

fn oracle_k_colourable(g: &Graph, k: usize) -> bool {
    fn rec(g: &Graph, k: usize, colours: &mut Vec<usize>) -> bool {
        let v = colours.len();
        if v == g.n() {
            return true;
        }
        // Symmetry: a new colour is only ever the next unused one.
        let limit = (colours.iter().max().map_or(0, |m| m + 1) + 1).min(k);
        for c in 0..limit {
            if (0..v).all(|u| !g.has_edge(u, v) || colours[u] != c) {
                colours.push(c);
                if rec(g, k, colours) {
                    return true;
                }
                colours.pop();
            }
        }
        false
    }
    rec(g, k, &mut Vec::new())
}

fn oracle_chromatic(g: &Graph) -> usize {
    (0..=g.n()).find(|&k| oracle_k_colourable(g, k)).expect("n colours always suffice")
}

fn oracle_clique_number(g: &Graph) -> usize {
    (0u32..1 << g.n())
        .filter(|m| {
            let vs: Vec<usize> = (0..g.n()).filter(|&v| m >> v & 1 == 1).collect();
            vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&w| g.has_edge(u, w)))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    Graph::from_fn(n, |_, _| rng.random_bool(p))
}

// ------------------------------------------------------------ criterion 1

fn evaluator_fidelity() -> Vec<Verdict> {
    // The three-vertex path: join 2-3 over (join 1-2 over 1(v1) + 2(v2)) + 3(v3).
    let p3 = CwdExpr::join(
        cw(2),
        cw(3),
        CwdExpr::union(
            CwdExpr::join(cw(1), cw(2), CwdExpr::union(CwdExpr::create(cw(1), 0), CwdExpr::create(cw(2), 1))),
            CwdExpr::create(cw(3), 2),
        ),
    );
    let start = Instant::now();
    let lg = evaluate(&p3).expect("evaluates");
    let took = start.elapsed();
    let exact = lg.matches(&Graph::path(3));
    let a = Verdict::new(
        "1a",
        "evaluator-three-vertex-path",
        exact && took < EVAL_BUDGET,
        format!("edges {:?}, width {}, {took:?} (budget {EVAL_BUDGET:?})", lg.edges, p3.width()),
    );

    // A two-label expression for the four-vertex path would make it a
    // cograph. Exhaustive search settles it; the best expression found is
    // still checked to evaluate to the path.
    let p4 = Graph::path(4);
    let two = expression_within(&p4, 2).expect("small graph");
    let best = exact_clique_width(&p4).expect("small graph");
    let witness_ok = best.witness.as_ref().is_some_and(|e| evaluate(e).is_ok_and(|lg| lg.matches(&p4)));
    let proof_holds = two.is_none() && best.width == 3 && witness_ok;
    let mut b = Verdict::new(
        "1b",
        "evaluator-four-vertex-path-two-labels",
        two.as_ref().is_some_and(|e| e.width() == 2 && evaluate(e).is_ok_and(|lg| lg.matches(&p4))),
        format!(
            "2-label expression {} (exhaustive search); minimum width {} with witness {}",
            if two.is_some() { "found" } else { "does not exist" },
            best.width,
            best.witness.as_ref().map(text::serialize).unwrap_or_default()
        ),
    );
    b.unattainable = proof_holds;
    vec![a, b]
}

// ------------------------------------------------------------ criterion 2

fn cliques(sizes: &[usize]) -> (Vec<NamedSet>, usize) {
    let mut next = 0;
    let sets = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let vs: Vec<usize> = (next..next + s).collect();
            next += s;
            NamedSet::new(format!("c{i}"), vs)
        })
        .collect();
    (sets, next)
}

/// Random partial matching between two vertex lists.
fn matching(rng: &mut ChaCha8Rng, a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
    let mut b = b.to_vec();
    b.shuffle(rng);
    a.iter().zip(b).filter(|_| rng.random_bool(0.6)).map(|(&u, v)| (u, v)).collect()
}

fn graph_of(n: usize, sets: &[NamedSet], cross: &BTreeSet<(usize, usize)>) -> Graph {
    let same = |u: usize, v: usize| sets.iter().any(|s| s.vertices.contains(u) && s.vertices.contains(v));
    Graph::from_fn(n, |u, v| same(u, v) || cross.contains(&(u.min(v), u.max(v))))
}

fn normal(pairs: impl IntoIterator<Item = (usize, usize)>) -> BTreeSet<(usize, usize)> {
    pairs.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect()
}

fn all_pairs(a: &[usize], b: &[usize]) -> BTreeSet<(usize, usize)> {
    normal(a.iter().flat_map(|&u| b.iter().map(move |&v| (u, v))))
}

struct Tally {
    runs: usize,
    violations: Vec<String>,
    max_width: usize,
}

impl Tally {
    fn new() -> Tally {
        Tally { runs: 0, violations: Vec::new(), max_width: 0 }
    }

    fn record(&mut self, what: &str, g: &Graph, e: Result<CwdExpr, impl std::fmt::Debug>, bound: usize) {
        self.runs += 1;
        match e {
            Ok(e) => {
                let w = e.width();
                self.max_width = self.max_width.max(w);
                let exact = evaluate(&e).is_ok_and(|lg| lg.matches(g));
                if w > bound || !exact {
                    self.violations.push(format!("{what}: width {w} (bound {bound}), exact {exact}"));
                }
            }
            Err(err) => self.violations.push(format!("{what}: {err:?}")),
        }
    }
}

fn builder_bounds() -> Vec<Verdict> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB01D);
    let (mut pairs, mut nonpairs, mut rows, mut partition) = (Tally::new(), Tally::new(), Tally::new(), Tally::new());
    for _ in 0..BUILDER_INSTANCES {
        let sizes = [rng.random_range(1..=10), rng.random_range(1..=10)];
        let (sets, n) = cliques(&sizes);
        let (a, b) = (sets[0].vertices.as_slice(), sets[1].vertices.as_slice());
        let m = normal(matching(&mut rng, a, b));
        let g = graph_of(n, &sets, &m);
        pairs.record("pairs", &g, label_via_pairs(&g, &sets[0], &sets[1]), 4);
        let co: BTreeSet<_> = all_pairs(a, b).difference(&m).copied().collect();
        let g = graph_of(n, &sets, &co);
        nonpairs.record("non-pairs", &g, label_via_nonpairs(&g, &sets[0], &sets[1]), 4);
    }
    for i in 0..BUILDER_INSTANCES {
        let t = 3 + i % 4;
        let sizes: Vec<usize> = (0..t).map(|_| rng.random_range(1..=6)).collect();
        let (sets, n) = cliques(&sizes);
        let mut cross = BTreeSet::new();
        let mut consecutive = Vec::new();
        for j in 0..t {
            let (a, b) = (sets[j].vertices.as_slice(), sets[(j + 1) % t].vertices.as_slice());
            let m = normal(matching(&mut rng, a, b));
            if rng.random_bool(0.5) {
                consecutive.push(PairMode::Adjacent);
                cross.extend(m);
            } else {
                consecutive.push(PairMode::NonAdjacent);
                cross.extend(all_pairs(a, b).difference(&m).copied());
            }
        }
        let mut others = std::collections::BTreeMap::new();
        for x in 0..t {
            for y in x + 2..t {
                if x == 0 && y == t - 1 {
                    continue;
                }
                let bond = if rng.random_bool(0.5) { Bond::Join } else { Bond::CoJoin };
                if bond == Bond::Join {
                    cross.extend(all_pairs(sets[x].vertices.as_slice(), sets[y].vertices.as_slice()));
                }
                others.insert((x, y), bond);
            }
        }
        let g = graph_of(n, &sets, &cross);
        let spec = RowsSpec { consecutive, others };
        rows.record(&format!("rows t={t}"), &g, label_via_rows(&g, &sets, &spec), 2 * t + 1);
    }
    for i in 0..BUILDER_INSTANCES {
        let k = 2 + i % 5;
        let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(1..=6)).collect();
        let (sets, n) = cliques(&sizes);
        // Cross edges form disjoint transversal cliques, so every vertex
        // sees at most one vertex per foreign clique and those form a clique.
        let mut free: Vec<Vec<usize>> = sets.iter().map(|s| s.vertices.as_slice().to_vec()).collect();
        free.iter_mut().for_each(|f| f.shuffle(&mut rng));
        let mut cross = BTreeSet::new();
        for _ in 0..rng.random_range(0..=8) {
            let members: Vec<usize> =
                free.iter_mut().filter_map(|f| if rng.random_bool(0.6) { f.pop() } else { None }).collect();
            for (x, &u) in members.iter().enumerate() {
                cross.extend(members[x + 1..].iter().map(|&v| (u.min(v), u.max(v))));
            }
        }
        let g = graph_of(n, &sets, &cross);
        partition.record(&format!("partition k={k}"), &g, label_clique_partition(&g, &sets), 2 * k);
    }
    let took = start.elapsed();
    let in_time = took < BUILDER_BUDGET;
    let verdict = |id, name, t: Tally, bound: &str| {
        let ok = t.violations.is_empty() && t.runs >= BUILDER_INSTANCES && in_time;
        Verdict::new(
            id,
            name,
            ok,
            format!(
                "{} instances, max width {} ({bound}), {} violations{}",
                t.runs,
                t.max_width,
                t.violations.len(),
                first(&t.violations)
            ),
        )
    };
    let mut out = vec![
        verdict("2a", "builder-pairs", pairs, "bound 4"),
        verdict("2b", "builder-non-pairs", nonpairs, "bound 4"),
        verdict("2c", "builder-rows", rows, "bound 2t+1"),
        verdict("2d", "builder-clique-partition", partition, "bound 2k"),
    ];
    out[3].detail.push_str(&format!("; suite {took:?} (budget {BUILDER_BUDGET:?})"));
    out
}

// ------------------------------------------------------------ criterion 3

fn detector_oracle() -> Vec<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD37EC7);
    let mut disagreements = Vec::new();
    let mut positives = [0usize; 7];
    for i in 0..DETECTOR_GRAPHS {
        let n = rng.random_range(1..=DETECTOR_MAX_N);
        let p = [0.15, 0.3, 0.5, 0.7, 0.85][i % 5];
        let g = random_graph(&mut rng, n, p);
        for (j, &pat) in CLASS_PATTERNS.iter().enumerate() {
            let found = find_induced(&g, pat);
            if found.as_ref().is_some_and(|o| !o.verify(&g)) {
                disagreements.push(format!("{pat} witness invalid in {g:?}"));
            }
            let expected = oracle_contains(&g, pat);
            positives[j] += usize::from(expected);
            if found.is_some() != expected {
                disagreements.push(format!("{pat}: detector {} oracle {expected} on {g:?}", found.is_some()));
            }
        }
        for (j, k) in [5, 6, 7].into_iter().enumerate() {
            let found = find_hole(&g, k);
            if found.as_ref().is_some_and(|h| h.len() != k || !h.is_induced_in(&g)) {
                disagreements.push(format!("C{k} witness invalid in {g:?}"));
            }
            let expected = oracle_hole(&g, k);
            positives[4 + j] += usize::from(expected);
            if found.is_some() != expected {
                disagreements.push(format!("C{k}: detector {} oracle {expected} on {g:?}", found.is_some()));
            }
        }
    }
    vec![Verdict::new(
        "3",
        "detector-oracle-equivalence",
        disagreements.is_empty(),
        format!(
            "{DETECTOR_GRAPHS} graphs n<={DETECTOR_MAX_N}; positives claw/4K1/bridge/C4-twin/C5/C6/C7 = {positives:?}; {} disagreements{}",
            disagreements.len(),
            first(&disagreements)
        ),
    )]
}

// ------------------------------------------------------------ criterion 4

fn dichotomy_facts() -> Vec<Verdict> {
    let mut facts = Vec::new();
    for t in [7, 8, 9] {
        let co = Graph::cycle(t).complement();
        let o = find_induced(&co, Pattern::C4Twin);
        let ok = o.as_ref().is_some_and(|o| o.verify(&co)) && oracle_contains(&co, Pattern::C4Twin);
        facts.push((format!("complement of C{t} has a C4-twin"), ok));
    }
    let c8 = Graph::cycle(8);
    let ok = find_induced(&c8, Pattern::FourK1).is_some_and(|o| o.verify(&c8)) && oracle_contains(&c8, Pattern::FourK1);
    facts.push(("C8 has a 4K1".into(), ok));
    let pass = facts.iter().all(|f| f.1);
    let detail = facts.iter().map(|(f, ok)| format!("{f}: {ok}")).collect::<Vec<_>>().join("; ");
    vec![Verdict::new("4", "dichotomy-facts", pass, detail)]
}

// ------------------------------------------------------------ criterion 5

#[derive(Default)]
struct PlantedStats {
    accepted: usize,
    infeasible: usize,
    max_n: usize,
    max_width: usize,
    property_failures: usize,
    not_exact: usize,
    over_bound: usize,
    case_not_covered: usize,
    other_errors: Vec<String>,
}

fn check_synthesis(stats: &mut PlantedStats, g: &Graph, r: Result<Synthesis, SynthError>, what: &str) {
    match r {
        Ok(Synthesis::Expression(r)) => {
            stats.max_width = stats.max_width.max(r.width_achieved);
            if !evaluate(&r.expr).is_ok_and(|lg| lg.matches(g)) {
                stats.not_exact += 1;
            }
            if r.width_achieved > r.declared_bound || r.expr.width() != r.width_achieved {
                stats.over_bound += 1;
            }
        }
        Ok(Synthesis::Perfect(_)) => stats.other_errors.push(format!("{what}: planted graph reported perfect")),
        Err(SynthError::CaseNotCovered { sets, reason }) => {
            stats.case_not_covered += 1;
            stats.other_errors.push(format!("{what}: case not covered {sets:?}: {reason}"));
        }
        Err(e) => stats.other_errors.push(format!("{what}: {e}")),
    }
}

fn planted_run(hole: usize) -> PlantedStats {
    let mut stats = PlantedStats::default();
    let mut seed = 0u64;
    while stats.accepted < PLANTED_PER_HOLE && seed < 50 * PLANTED_PER_HOLE as u64 {
        seed += 1;
        let mut spec = random_spec(hole, seed * 7919 + hole as u64, 7, 14);
        spec.attempts = 8;
        let Ok(g) = plant(&spec) else {
            stats.infeasible += 1;
            continue;
        };
        stats.accepted += 1;
        stats.max_n = stats.max_n.max(g.n());
        let what = format!("hole {hole} seed {}", spec.seed);
        let d = match classify(&g, &Hole((0..hole).collect()), DEFAULT_THRESHOLD) {
            Ok(d) => d,
            Err(e) => {
                stats.other_errors.push(format!("{what}: classify {e}"));
                continue;
            }
        };
        stats.property_failures += verify_properties(&g, &d).failures().count();
        // Around the planted hole, and through the full pipeline (which
        // picks the longest hole present).
        check_synthesis(&mut stats, &g, synth_around(&g, &d).map(|r| Synthesis::Expression(Box::new(r))), &what);
        check_synthesis(&mut stats, &g, synthesize(&g), &what);
    }
    stats
}

fn structural_soundness() -> Vec<Verdict> {
    let start = Instant::now();
    let runs: Vec<(usize, PlantedStats)> = std::thread::scope(|s| {
        let hs: Vec<_> = [7, 6, 5].into_iter().map(|k| s.spawn(move || (k, planted_run(k)))).collect();
        hs.into_iter().map(|h| h.join().expect("planted run")).collect()
    });
    let took = start.elapsed();
    runs.into_iter()
        .map(|(k, st)| {
            let pass = st.accepted >= PLANTED_PER_HOLE
                && st.property_failures == 0
                && st.not_exact == 0
                && st.over_bound == 0
                && st.case_not_covered == 0
                && st.other_errors.is_empty()
                && took < STRUCTURAL_BUDGET;
            let id = match k {
                7 => "5a",
                6 => "5b",
                _ => "5c",
            };
            let name = match k {
                7 => "structural-soundness-seven-hole",
                6 => "structural-soundness-six-hole",
                _ => "structural-soundness-five-hole",
            };
            Verdict::new(
                id,
                name,
                pass,
                format!(
                    "{} planted ({} specs infeasible), max n {}, max width {}, property failures {}, inexact {}, over bound {}, case-not-covered {}, other {}{}; {took:?} (budget {STRUCTURAL_BUDGET:?})",
                    st.accepted,
                    st.infeasible,
                    st.max_n,
                    st.max_width,
                    st.property_failures,
                    st.not_exact,
                    st.over_bound,
                    st.case_not_covered,
                    st.other_errors.len(),
                    first(&st.other_errors)
                ),
            )
        })
        .collect()
}

// ------------------------------------------------------------ criterion 6

/// Random class members with at most `COLOUR_MAX_N` vertices: rejection
/// samples across densities, plus small planted graphs so that the
/// bounded-width branch is well represented.
fn small_members() -> Vec<Graph> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < COLOUR_MEMBERS * 3 / 4 && seed < 200_000 {
        seed += 1;
        let n = 3 + (seed as usize % (COLOUR_MAX_N - 2));
        let p = [0.4, 0.55, 0.7, 0.85][(seed / 10) as usize % 4];
        if let Some(g) = reject_sample(n, p, seed) {
            out.push(g);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0108);
    while out.len() < COLOUR_MEMBERS {
        // A bare hole with a few extra vertices below the threshold.
        let hole = rng.random_range(5..=7);
        let mut spec = random_spec(hole, rng.random(), 1, 5);
        spec.sizes = spec.sizes.into_keys().map(|s| (s, rng.random_range(0..=COLOUR_MAX_N - hole))).collect();
        spec.sizes.retain(|_, &mut n| n > 0);
        if let Ok(g) = plant(&spec) {
            if g.n() <= COLOUR_MAX_N {
                out.push(g);
            }
        }
    }
    out
}

fn colouring_correctness() -> Vec<Verdict> {
    let members = small_members();
    let mut mismatches = Vec::new();
    let (mut perfect, mut bounded) = (0, 0);
    for g in &members {
        if !is_class_member(g).is_member() {
            mismatches.push(format!("sampled non-member {g:?}"));
            continue;
        }
        match colour_class_member(g) {
            Ok(r) => {
                let chi = oracle_chromatic(g);
                let omega = oracle_clique_number(g);
                if r.chi != chi || r.omega != omega || !is_proper(g, &r.assignment) {
                    mismatches
                        .push(format!("chi {} (oracle {chi}), omega {} (oracle {omega}) on {g:?}", r.chi, r.omega));
                }
                let colours: BTreeSet<_> = r.assignment.iter().collect();
                if colours.len() != r.chi {
                    mismatches.push(format!("assignment uses {} colours, chi {}", colours.len(), r.chi));
                }
                match r.branch {
                    Branch::Perfect => {
                        perfect += 1;
                        if chi != omega {
                            mismatches.push(format!("perfect branch with chi {chi} omega {omega} on {g:?}"));
                        }
                    }
                    Branch::BoundedCwd { .. } => bounded += 1,
                }
            }
            Err(e) => mismatches.push(format!("{e} on {g:?}")),
        }
    }
    let pinned: Vec<(usize, usize)> =
        [5, 7].into_iter().map(|k| (k, colour_class_member(&Graph::cycle(k)).map_or(0, |r| r.chi))).collect();
    let pinned_ok = pinned.iter().all(|&(_, chi)| chi == 3);
    vec![Verdict::new(
        "6",
        "colouring-correctness",
        members.len() >= COLOUR_MEMBERS && mismatches.is_empty() && pinned_ok,
        format!(
            "{} members n<={COLOUR_MAX_N} ({perfect} perfect, {bounded} bounded-width), {} mismatches{}; chi of C5, C7 = {:?}",
            members.len(),
            mismatches.len(),
            first(&mismatches),
            pinned.iter().map(|p| p.1).collect::<Vec<_>>()
        ),
    )]
}

// ------------------------------------------------------------ criterion 7

/// Adjacency bitmask minimised over vertex permutations.
fn canonical_form(g: &Graph) -> u32 {
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u32::MAX;
    loop {
        let mut code = 0u32;
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if g.has_edge(perm[u], perm[v]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(code);
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    best
}

fn complement_bound() -> Vec<Verdict> {
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut hardest = 0;
    for n in 1..=COMPLEMENT_MAX_N {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let mut seen = BTreeSet::new();
        for mask in 0u32..1 << pairs.len() {
            let g = Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p))
                .expect("valid edges");
            if !g.is_connected() || !seen.insert(canonical_form(&g)) {
                continue;
            }
            checked += 1;
            let w = exact_clique_width(&g).expect("small").width;
            let wc = exact_clique_width(&g.complement()).expect("small").width;
            hardest = hardest.max(w);
            if wc > 2 * w {
                violations.push(format!("{g:?}: cwd {w}, complement {wc}"));
            }
        }
    }
    vec![Verdict::new(
        "7",
        "complement-width-bound",
        violations.is_empty() && checked > 0,
        format!(
            "{checked} connected graphs up to isomorphism, n<={COMPLEMENT_MAX_N}, max cwd {hardest}; {} violations{} (desk-scale empirical probe)",
            violations.len(),
            first(&violations)
        ),
    )]
}

// ------------------------------------------------------------ criterion 8

fn reproducibility() -> Vec<Verdict> {
    let bin = env!("CARGO_BIN_EXE_clawfree");
    let dir = tempfile::tempdir().expect("temp dir");
    let mut diffs = Vec::new();
    let mut runs = 0;
    let specs = [
        (r#"{"hole": 7, "sizes": {"X0": 6, "Y2": 5, "X2": 5}}"#, 11),
        (r#"{"hole": 7, "sizes": {"X0": 6, "X1": 5, "X3": 7}}"#, 17),
        (r#"{"hole": 6, "sizes": {"X0": 5, "X3": 5}}"#, 12),
        (r#"{"hole": 5, "sizes": {"X0": 5, "T2": 5}}"#, 13),
        (r#"{"hole": 5, "sizes": {"Z": 8}}"#, 14),
    ];
    for (i, (spec, seed)) in specs.iter().enumerate() {
        let spec_path = dir.path().join(format!("spec{i}.json"));
        std::fs::write(&spec_path, spec).expect("write spec");
        let graph_path = dir.path().join(format!("g{i}.json"));
        let mut outputs: Vec<(Vec<u8>, Vec<u8>)> = Vec::new();
        for _ in 0..REPRO_RUNS {
            let gen = Command::new(bin)
                .args(["generate", &spec_path.display().to_string(), "--seed", &seed.to_string()])
                .output()
                .expect("generate runs");
            std::fs::write(&graph_path, &gen.stdout).expect("write graph");
            let syn = Command::new(bin).args(["synthesize", &graph_path.display().to_string()]).output().expect("runs");
            if !gen.status.success() || !syn.status.success() {
                diffs.push(format!("spec {i}: exit {:?} / {:?}", gen.status.code(), syn.status.code()));
            }
            outputs.push((gen.stdout, syn.stdout));
            runs += 1;
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            diffs.push(format!("spec {i}: outputs differ between runs"));
        }
    }
    vec![Verdict::new(
        "8",
        "reproducibility",
        diffs.is_empty(),
        format!(
            "{runs} generate+synthesize runs over {} specs; {} differing",
            specs.len(),
            if diffs.is_empty() { "0".to_string() } else { diffs.join("; ") }
        ),
    )]
}

fn main() {
    type Criterion = (&'static str, fn() -> Vec<Verdict>);
    let criteria: [Criterion; 8] = [
        ("1", evaluator_fidelity),
        ("2", builder_bounds),
        ("3", detector_oracle),
        ("4", dichotomy_facts),
        ("5", structural_soundness),
        ("6", colouring_correctness),
        ("7", complement_bound),
        ("8", reproducibility),
    ];
    // Respect a name filter such as `cargo test --test acceptance -- 5`.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        for v in run() {
            let status = if v.pass { "PASS" } else { "FAIL" };
            let note = if v.unattainable { " [unattainable: proven, see detail]" } else { "" };
            println!("ACCEPTANCE {:<3} {status} {}{note} ({:.2?}): {}", v.id, v.name, start.elapsed(), v.detail);
            if !v.pass && !v.unattainable {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
