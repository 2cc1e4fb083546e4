//! Graph file formats: edge list, DIMACS and JSON.
//!
//! Edge list: one `u v` pair per line, `#` starts a comment, and a line
//! with a single token declares a vertex (so isolated vertices survive a
//! round trip). Tokens are either all vertex indices or all names; with
//! names, vertices are numbered by first appearance.
//!
//! DIMACS: `c` comments, one `p edge <n> <m>` line, `e <u> <v>` lines with
//! 1-based vertices. Names are not representable.
//!
//! JSON: `{"n": 3, "edges": [[0, 1], [1, 2]], "names": ["a", "b", "c"]}`
//! with `names` optional. This is the canonical format.

use std::collections::HashMap;
use std::fmt::Write;
use std::path::Path;

use clawfree_core::{Graph, GraphError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    EdgeList,
    Dimacs,
    Json,
}

impl Format {
    /// Guess from the file extension; anything unknown is an edge list.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("json") => Format::Json,
            Some("dimacs" | "col" | "clq") => Format::Dimacs,
            _ => Format::EdgeList,
        }
    }
}

/// Input error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl FormatError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        FormatError { line, column, message: message.into() }
    }

    fn whole(message: impl Into<String>) -> Self {
        FormatError::at(1, 1, message)
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns,
/// stopping at `comment`.
fn tokens(line: &str, comment: Option<char>) -> Vec<(usize, &str)> {
    let body = match comment.and_then(|c| line.find(c)) {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((body[..s].chars().count() + 1, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn graph_error(e: GraphError) -> FormatError {
    FormatError::whole(e.to_string())
}

pub fn parse(src: &str, format: Format) -> Result<Graph, FormatError> {
    match format {
        Format::EdgeList => parse_edge_list(src),
        Format::Dimacs => parse_dimacs(src),
        Format::Json => parse_json(src),
    }
}

pub fn serialize(g: &Graph, format: Format) -> Result<String, FormatError> {
    match format {
        Format::EdgeList => serialize_edge_list(g),
        Format::Dimacs => Ok(serialize_dimacs(g)),
        Format::Json => Ok(serialize_json(g)),
    }
}

fn is_index(tok: &str) -> bool {
    !tok.is_empty() && tok.bytes().all(|b| b.is_ascii_digit())
}

pub fn parse_edge_list(src: &str) -> Result<Graph, FormatError> {
    let mut lines: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let toks = tokens(line, Some('#'));
        match toks.len() {
            0 => continue,
            1 | 2 => lines.push((i + 1, toks)),
            _ => return Err(FormatError::at(i + 1, toks[2].0, "expected at most two vertices per line")),
        }
    }
    let mut numeric: Option<bool> = None;
    for (line, toks) in &lines {
        for &(col, t) in toks {
            let here = is_index(t);
            match numeric {
                None => numeric = Some(here),
                Some(n) if n != here => {
                    return Err(FormatError::at(*line, col, format!("'{t}' mixes vertex names with indices")));
                }
                _ => {}
            }
        }
    }
    let mut edges = Vec::new();
    if numeric.unwrap_or(true) {
        let mut n = 0;
        for (line, toks) in &lines {
            let mut ids = Vec::with_capacity(2);
            for &(col, t) in toks {
                let v: usize = t.parse().map_err(|_| FormatError::at(*line, col, format!("index '{t}' too large")))?;
                n = n.max(v + 1);
                ids.push(v);
            }
            if let [u, v] = ids[..] {
                if u == v {
                    return Err(FormatError::at(*line, toks[1].0, format!("self-loop on vertex {u}")));
                }
                edges.push((u, v));
            }
        }
        return Graph::from_edges(n, edges).map_err(graph_error);
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    for (line, toks) in &lines {
        let ids: Vec<usize> = toks
            .iter()
            .map(|&(_, t)| {
                *index.entry(t).or_insert_with(|| {
                    names.push(t.to_string());
                    names.len() - 1
                })
            })
            .collect();
        if let [u, v] = ids[..] {
            if u == v {
                return Err(FormatError::at(*line, toks[1].0, format!("self-loop on vertex '{}'", toks[1].1)));
            }
            edges.push((u, v));
        }
    }
    Graph::from_edges(names.len(), edges).and_then(|g| g.with_names(names)).map_err(graph_error)
}

/// Names that would read back as indices, contain whitespace or `#`, or
/// repeat cannot be written as an edge list.
pub fn serialize_edge_list(g: &Graph) -> Result<String, FormatError> {
    let mut out = String::new();
    let _ = writeln!(out, "# {} vertices, {} edges", g.n(), g.edge_count());
    match g.names() {
        None => {
            // Every other vertex appears in an edge, so this recovers the
            // vertex count too.
            for v in (0..g.n()).filter(|&v| g.degree(v) == 0) {
                let _ = writeln!(out, "{v}");
            }
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        Some(names) => {
            let mut seen = std::collections::HashSet::new();
            for name in names {
                if is_index(name) || name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '#') {
                    return Err(FormatError::whole(format!(
                        "name '{name}' cannot be written as an edge list; use JSON"
                    )));
                }
                if !seen.insert(name.as_str()) {
                    return Err(FormatError::whole(format!("duplicate name '{name}'")));
                }
            }
            // Declaring every vertex first fixes the numbering.
            for name in names {
                let _ = writeln!(out, "{name}");
            }
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{} {}", names[u], names[v]);
            }
        }
    }
    Ok(out)
}

pub fn parse_dimacs(src: &str) -> Result<Graph, FormatError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line_no = i + 1;
        let toks = tokens(line, None);
        let Some(&(col, head)) = toks.first() else { continue };
        let number = |j: usize| -> Result<usize, FormatError> {
            let &(c, t) = toks.get(j).ok_or_else(|| FormatError::at(line_no, line.len() + 1, "missing number"))?;
            t.parse().map_err(|_| FormatError::at(line_no, c, format!("expected a number, found '{t}'")))
        };
        match head {
            "c" => {}
            "p" => {
                if n.is_some() {
                    return Err(FormatError::at(line_no, col, "second problem line"));
                }
                match toks.get(1) {
                    Some(&(_, "edge" | "col")) => {}
                    Some(&(c, other)) => {
                        return Err(FormatError::at(line_no, c, format!("unsupported problem type '{other}'")))
                    }
                    None => return Err(FormatError::at(line_no, line.len() + 1, "missing problem type")),
                }
                n = Some(number(2)?);
                // The declared edge count is informational: corpora often
                // list each edge twice.
                number(3)?;
            }
            "e" => {
                let Some(count) = n else {
                    return Err(FormatError::at(line_no, col, "edge before the problem line"));
                };
                let (u, v) = (number(1)?, number(2)?);
                for (j, w) in [(1, u), (2, v)] {
                    if w == 0 || w > count {
                        return Err(FormatError::at(line_no, toks[j].0, format!("vertex {w} outside 1..={count}")));
                    }
                }
                if u == v {
                    return Err(FormatError::at(line_no, toks[2].0, format!("self-loop on vertex {u}")));
                }
                edges.push((u - 1, v - 1));
            }
            other => return Err(FormatError::at(line_no, col, format!("unknown line type '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| FormatError::whole("missing 'p edge' line"))?;
    Graph::from_edges(n, edges).map_err(graph_error)
}

pub fn serialize_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p edge {} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

pub fn parse_json(src: &str) -> Result<Graph, FormatError> {
    let raw: JsonGraph =
        serde_json::from_str(src).map_err(|e| FormatError::at(e.line().max(1), e.column().max(1), e.to_string()))?;
    let g = Graph::from_edges(raw.n, raw.edges.iter().map(|&[u, v]| (u, v))).map_err(graph_error)?;
    match raw.names {
        Some(names) => g.with_names(names).map_err(graph_error),
        None => Ok(g),
    }
}

pub fn serialize_json(g: &Graph) -> String {
    let raw = JsonGraph {
        n: g.n(),
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
        names: g.names().map(<[String]>::to_vec),
    };
    let mut s = serde_json::to_string(&raw).expect("graph serialises");
    s.push('\n');
    s
}
