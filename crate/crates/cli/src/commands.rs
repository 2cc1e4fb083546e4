//! Command implementations. Each takes parsed input and returns a report
//! plus an exit status; reading files and printing happen in the caller.

use std::collections::BTreeMap;

use clawfree_core::colour::{colour_with_budget, exact_chromatic, ColourError, DEFAULT_NODE_BUDGET};
use clawfree_core::cwd::{evaluate, text, CwdExpr};
use clawfree_core::decomp::{
    classify, preferred_hole, reduction_consistency, verify_properties, ClassifyError, DEFAULT_THRESHOLD,
};
use clawfree_core::gen::{plant, GenError, PlantSpec};
use clawfree_core::pattern::{find_hole, is_class_member, Hole, Occurrence};
use clawfree_core::synth::{synth_around, synthesize, PerfectCertificate, SynthError, Synthesis};
use clawfree_core::Graph;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dot;
use crate::format::{self, Format, FormatError};

/// Version of every JSON report; bump on any incompatible change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Success = 0,
    Negative = 1,
    InputError = 2,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Json(Value),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: Body,
    pub exit: Exit,
}

impl Outcome {
    fn report(command: &str, body: Value, exit: Exit) -> Outcome {
        Outcome { body: Body::Json(envelope(command, body)), exit }
    }

    fn text(s: String) -> Outcome {
        Outcome { body: Body::Text(s), exit: Exit::Success }
    }

    /// What goes to standard output.
    pub fn render(&self) -> String {
        match &self.body {
            Body::Json(v) => {
                let mut s = serde_json::to_string_pretty(v).expect("report serialises");
                s.push('\n');
                s
            }
            Body::Text(s) => s.clone(),
        }
    }
}

/// Malformed or unusable input; maps to exit status 2.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{0}")]
    Format(#[from] FormatError),
    #[error("{line}:{column}: {message}")]
    Expression { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn envelope(command: &str, body: Value) -> Value {
    let mut out = json!({ "schema": format!("clawfree.{command}"), "schema_version": SCHEMA_VERSION });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serialises")
}

fn witness(g: &Graph, o: &Occurrence) -> Value {
    json!({
        "pattern": o.pattern.to_string(),
        "vertices": o.vertices,
        "names": o.vertices.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
    })
}

fn hole_view(g: &Graph, h: &Hole) -> Value {
    json!({
        "length": h.len(),
        "vertices": h.vertices(),
        "names": h.vertices().iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
    })
}

/// Which hole to decompose around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoleChoice {
    /// The longest of 7, 6, 5 present.
    Auto,
    Length(usize),
}

impl std::str::FromStr for HoleChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(HoleChoice::Auto),
            "5" | "6" | "7" => Ok(HoleChoice::Length(s.parse().expect("digit"))),
            other => Err(format!("hole must be auto, 5, 6 or 7, not '{other}'")),
        }
    }
}

fn locate_hole(g: &Graph, choice: HoleChoice) -> Option<Hole> {
    match choice {
        HoleChoice::Auto => preferred_hole(g),
        HoleChoice::Length(k) => find_hole(g, k),
    }
}

pub fn check(g: &Graph) -> Outcome {
    let m = is_class_member(g);
    let member = m.is_member();
    let body = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "member": member,
        "witnesses": m.witnesses().map(|o| witness(g, o)).collect::<Vec<_>>(),
    });
    Outcome::report("check", body, if member { Exit::Success } else { Exit::Negative })
}

fn classify_error(g: &Graph, e: &ClassifyError) -> Value {
    let w = match e {
        ClassifyError::NotAHole => None,
        ClassifyError::UnclassifiableVertex { witness, .. } | ClassifyError::StructureViolation { witness, .. } => {
            witness.as_ref()
        }
    };
    json!({ "message": e.to_string(), "witness": w.map(|o| witness(g, o)) })
}

pub fn decompose(g: &Graph, choice: HoleChoice, threshold: usize) -> Outcome {
    let negative = |body: Value| Outcome::report("decompose", body, Exit::Negative);
    if let Some(w) = is_class_member(g).first_witness() {
        return negative(json!({ "member": false, "witness": witness(g, &w) }));
    }
    let Some(hole) = locate_hole(g, choice) else {
        return negative(
            json!({ "member": true, "hole": Value::Null, "reason": "no induced cycle of the requested length" }),
        );
    };
    let d = match classify(g, &hole, threshold) {
        Ok(d) => d,
        Err(e) => {
            return negative(json!({ "member": true, "hole": hole_view(g, &hole), "error": classify_error(g, &e) }))
        }
    };
    let props = verify_properties(g, &d);
    let reduction = reduction_consistency(g, &d);
    let sets: BTreeMap<String, Vec<usize>> =
        d.sets().into_iter().map(|(id, vs)| (id.to_string(), vs.into_vec())).collect();
    let removed: Vec<Value> = d.removed.iter().map(|(v, id)| json!({ "vertex": v, "set": id.to_string() })).collect();
    let ok = props.all_pass() && reduction.ok();
    let body = json!({
        "member": true,
        "hole": hole_view(g, &hole),
        "threshold": threshold,
        "sets": sets,
        "removed": removed,
        "properties": to_value(&props),
        "failures": props.failures().map(|e| e.id.clone()).collect::<Vec<_>>(),
        "reduction": to_value(&reduction),
    });
    Outcome::report("decompose", body, if ok { Exit::Success } else { Exit::Negative })
}

fn synth_error(g: &Graph, e: &SynthError) -> Value {
    let mut v = json!({ "kind": e.kind(), "message": e.to_string() });
    let w = match e {
        SynthError::NotInClass(o) => Some(witness(g, o)),
        SynthError::Classify(c) => Some(classify_error(g, c)),
        _ => None,
    };
    if let Some(w) = w {
        v["detail"] = w;
    }
    v
}

/// Synthesis around an explicit hole length or threshold. With a given
/// length the hole need not be the longest one; `None` if it is absent.
fn synthesize_with(g: &Graph, hole: Option<usize>, threshold: usize) -> Result<Option<Synthesis>, SynthError> {
    if let Some(w) = is_class_member(g).first_witness() {
        return Err(SynthError::NotInClass(w));
    }
    let found = match hole {
        Some(k) => find_hole(g, k),
        None => preferred_hole(g),
    };
    let Some(h) = found else {
        return Ok(hole
            .is_none()
            .then(|| Synthesis::Perfect(PerfectCertificate { checked_hole_lengths: vec![5, 6, 7] })));
    };
    let d = classify(g, &h, threshold)?;
    synth_around(g, &d).map(|r| Some(Synthesis::Expression(Box::new(r))))
}

/// The synthesis report and, on success, the expression.
pub fn synthesize_graph(g: &Graph, hole: Option<usize>, threshold: usize) -> (Outcome, Option<CwdExpr>) {
    let result = if hole.is_none() && threshold == DEFAULT_THRESHOLD {
        synthesize(g).map(Some)
    } else {
        synthesize_with(g, hole, threshold)
    };
    let report = |body, exit| Outcome::report("synthesize", body, exit);
    match result {
        Ok(Some(Synthesis::Expression(r))) => {
            let expr = r.expr.clone();
            let body = json!({ "expression": text::serialize(&expr), "result": to_value(&Synthesis::Expression(r)) });
            (report(body, Exit::Success), Some(expr))
        }
        Ok(Some(perfect)) => (report(json!({ "result": to_value(&perfect) }), Exit::Success), None),
        Ok(None) => {
            let reason = format!("no induced cycle of length {}", hole.unwrap_or_default());
            (report(json!({ "result": Value::Null, "reason": reason }), Exit::Negative), None)
        }
        Err(e) => (report(json!({ "error": synth_error(g, &e) }), Exit::Negative), None),
    }
}

pub fn parse_expression(src: &str) -> Result<CwdExpr, InputError> {
    text::parse(src.trim()).map_err(|e| InputError::Expression { line: e.line, column: e.column, message: e.message })
}

/// The evaluated graph, on the created vertex ids. Ids that do not form
/// `0..n` are kept as names `v<id>`.
pub fn evaluated_graph(e: &CwdExpr) -> Result<Graph, InputError> {
    let lg = evaluate(e).map_err(|err| InputError::Invalid(format!("expression does not evaluate: {err}")))?;
    let contiguous = lg.vertices.iter().enumerate().all(|(i, v)| i == v);
    let plain = Graph::from_edges(lg.vertices.len(), {
        let idx: BTreeMap<usize, usize> = lg.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        lg.edges.iter().map(move |(u, v)| (idx[u], idx[v])).collect::<Vec<_>>()
    })
    .expect("edges join created vertices");
    if contiguous {
        Ok(plain)
    } else {
        Ok(plain.with_names(lg.vertices.iter().map(|v| format!("v{v}")).collect()).expect("one name per vertex"))
    }
}

pub fn eval(e: &CwdExpr, against: Option<&Graph>, to: Format) -> Result<Outcome, InputError> {
    let lg = evaluate(e).map_err(|err| InputError::Invalid(format!("expression does not evaluate: {err}")))?;
    let Some(g) = against else {
        let out = format::serialize(&evaluated_graph(e)?, to)?;
        return Ok(Outcome::text(out));
    };
    let missing: Vec<(usize, usize)> = g.edges().filter(|uv| !lg.edges.contains(uv)).collect();
    let extra: Vec<(usize, usize)> =
        lg.edges.iter().copied().filter(|&(u, v)| u >= g.n() || v >= g.n() || !g.has_edge(u, v)).collect();
    let vertex_mismatch: Vec<usize> = {
        let expected: std::collections::BTreeSet<usize> = (0..g.n()).collect();
        let created: std::collections::BTreeSet<usize> = lg.vertices.iter().collect();
        expected.symmetric_difference(&created).copied().collect()
    };
    let equal = lg.matches(g);
    let body = json!({
        "width": e.width(),
        "vertices": lg.vertices.len(),
        "edges": lg.edges.len(),
        "equal": equal,
        "vertex_mismatch": vertex_mismatch,
        "missing_edges": missing,
        "extra_edges": extra,
    });
    Ok(Outcome::report("eval", body, if equal { Exit::Success } else { Exit::Negative }))
}

pub fn colour(g: &Graph, budget: Option<u64>) -> Outcome {
    match colour_with_budget(g, budget.unwrap_or(DEFAULT_NODE_BUDGET)) {
        Ok(r) => Outcome::report("colour", json!({ "result": to_value(&r) }), Exit::Success),
        Err(e) => {
            let mut err = json!({ "message": e.to_string() });
            match &e {
                ColourError::NotInClass(o) => err["witness"] = witness(g, o),
                ColourError::BudgetExceeded { lower, upper } => {
                    err["lower"] = json!(lower);
                    err["upper"] = json!(upper);
                }
                ColourError::Synthesis(s) => err["synthesis"] = synth_error(g, s),
                ColourError::PerfectMismatch { .. } => {}
            }
            Outcome::report("colour", json!({ "error": err }), Exit::Negative)
        }
    }
}

pub fn parse_spec(src: &str) -> Result<PlantSpec, InputError> {
    serde_json::from_str(src).map_err(|e| {
        InputError::Format(FormatError { line: e.line().max(1), column: e.column().max(1), message: e.to_string() })
    })
}

/// Plant a graph. An unrealisable spec is a negative verdict; an
/// inconsistent one is an input error.
pub fn generate(spec: &PlantSpec, seed: Option<u64>, to: Format) -> Result<Outcome, InputError> {
    let mut spec = spec.clone();
    if let Some(s) = seed {
        spec.seed = s;
    }
    match plant(&spec) {
        Ok(g) => Ok(Outcome::text(format::serialize(&g, to)?)),
        Err(e @ GenError::InfeasibleSpec { .. }) => Ok(Outcome::report(
            "generate",
            json!({ "error": { "kind": "infeasible-spec", "message": e.to_string() }, "seed": spec.seed }),
            Exit::Negative,
        )),
        Err(e) => Err(InputError::Invalid(e.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RenderStyle {
    Plain,
    /// Fill vertices with an optimal colouring.
    Colouring,
    /// Highlight the hole and the decomposition sets.
    Decomposition,
}

pub fn render_graph(g: &Graph, style: RenderStyle) -> Outcome {
    let styles = match style {
        RenderStyle::Plain => None,
        RenderStyle::Colouring => match colour_with_budget(g, DEFAULT_NODE_BUDGET) {
            Ok(r) => Some(dot::colouring_styles(&r.assignment)),
            // Outside the class the exact solver still gives a colouring.
            Err(_) => {
                let b = exact_chromatic(g, 0, None, DEFAULT_NODE_BUDGET);
                Some(dot::colouring_styles(&b.assignment))
            }
        },
        RenderStyle::Decomposition => preferred_hole(g)
            .and_then(|h| classify(g, &h, DEFAULT_THRESHOLD).ok())
            .map(|d| dot::decomposition_styles(g, &d)),
    };
    Outcome::text(dot::graph(g, styles.as_deref()))
}

pub fn render_expression(e: &CwdExpr) -> Outcome {
    Outcome::text(dot::expression(e))
}
