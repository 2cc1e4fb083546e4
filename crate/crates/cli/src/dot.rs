//! Graphviz output for graphs and expressions.

use std::fmt::Write;

use clawfree_core::cwd::CwdExpr;
use clawfree_core::decomp::{Decomposition, Family};
use clawfree_core::Graph;

const PALETTE: [&str; 12] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080",
    "#e6beff", "#9a6324",
];

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn colour_name(c: usize) -> String {
    match PALETTE.get(c) {
        Some(hex) => (*hex).to_string(),
        // Past the palette, spread hues evenly (hue, saturation, value).
        None => format!("{:.3} 0.6 0.9", (c as f64 * 0.618_034).fract()),
    }
}

/// Per-vertex decoration.
#[derive(Debug, Clone, Default)]
pub struct NodeStyle {
    pub fill: Option<String>,
    pub xlabel: Option<String>,
    pub bold: bool,
    pub dashed: bool,
}

/// Render `g`, one decoration per vertex (or none).
pub fn graph(g: &Graph, styles: Option<&[NodeStyle]>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        let mut attrs = vec![format!("label={}", quote(&g.name(v)))];
        if let Some(s) = styles.and_then(|s| s.get(v)) {
            if let Some(fill) = &s.fill {
                attrs.push(format!("style={}", if s.dashed { "\"filled,dashed\"" } else { "filled" }));
                attrs.push(format!("fillcolor={}", quote(fill)));
            } else if s.dashed {
                attrs.push("style=dashed".into());
            }
            if let Some(x) = &s.xlabel {
                attrs.push(format!("xlabel={}", quote(x)));
            }
            if s.bold {
                attrs.push("penwidth=3".into());
            }
        }
        let _ = writeln!(out, "  {v} [{}];", attrs.join(", "));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

/// Fill each vertex with its colour class.
pub fn colouring_styles(assignment: &[usize]) -> Vec<NodeStyle> {
    assignment
        .iter()
        .map(|&c| NodeStyle { fill: Some(colour_name(c)), xlabel: Some(format!("c{c}")), ..NodeStyle::default() })
        .collect()
}

/// Bold hole vertices, one fill per family, dashed removed vertices.
pub fn decomposition_styles(g: &Graph, d: &Decomposition) -> Vec<NodeStyle> {
    let fill = |f: Family| match f {
        Family::T => "#ffd8b1",
        Family::X => "#aaffc3",
        Family::Y => "#a9c8ff",
        Family::Z => "#ffe119",
        Family::R => "#d3d3d3",
        Family::Hole => "#ff6f6f",
    };
    let mut styles = vec![NodeStyle::default(); g.n()];
    for (i, &h) in d.hole.vertices().iter().enumerate() {
        styles[h] = NodeStyle {
            fill: Some(fill(Family::Hole).into()),
            xlabel: Some(format!("h{i}")),
            bold: true,
            dashed: false,
        };
    }
    for (&v, id) in &d.assignment {
        styles[v] =
            NodeStyle { fill: Some(fill(id.family).into()), xlabel: Some(id.to_string()), ..NodeStyle::default() };
    }
    for (v, id) in &d.removed {
        styles[*v] = NodeStyle {
            fill: Some(fill(id.family).into()),
            xlabel: Some(format!("{id} (removed)")),
            bold: false,
            dashed: true,
        };
    }
    styles
}

/// The expression as a tree, root at the top.
pub fn expression(e: &CwdExpr) -> String {
    let mut out = String::from("digraph expr {\n  node [shape=box, fontname=\"monospace\"];\n");
    let mut next = 0usize;
    let mut stack: Vec<(&CwdExpr, Option<usize>)> = vec![(e, None)];
    while let Some((node, parent)) = stack.pop() {
        let id = next;
        next += 1;
        let (label, shape) = match node {
            CwdExpr::Create { label, vertex } => (format!("{label}({vertex})"), "ellipse"),
            CwdExpr::Union(..) => ("union".to_string(), "circle"),
            CwdExpr::Relabel { from, to, .. } => (format!("relabel {from} -> {to}"), "box"),
            CwdExpr::Join { a, b, .. } => (format!("join {a} {b}"), "box"),
        };
        let _ = writeln!(out, "  n{id} [label={}, shape={shape}];", quote(&label));
        if let Some(p) = parent {
            let _ = writeln!(out, "  n{p} -> n{id};");
        }
        match node {
            CwdExpr::Create { .. } => {}
            CwdExpr::Union(l, r) => {
                stack.push((r, Some(id)));
                stack.push((l, Some(id)));
            }
            CwdExpr::Relabel { child, .. } | CwdExpr::Join { child, .. } => stack.push((child, Some(id))),
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use clawfree_core::cwd::Label;

    #[test]
    fn graph_lists_every_vertex_and_edge() {
        let g = Graph::cycle(5);
        let dot = graph(&g, None);
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert!(dot.contains("  4 [label=\"4\"];"));
    }

    #[test]
    fn names_are_escaped() {
        let g = Graph::empty(1).with_names(vec!["a\"b".into()]).unwrap();
        assert!(graph(&g, None).contains(r#"label="a\"b""#));
    }

    #[test]
    fn colours_fill_nodes() {
        let dot = graph(&Graph::path(3), Some(&colouring_styles(&[0, 1, 0])));
        assert_eq!(dot.matches(PALETTE[0]).count(), 2);
        assert!(colour_name(40).ends_with("0.6 0.9"));
    }

    #[test]
    fn expression_tree_has_one_node_per_operation() {
        let (one, two) = (Label::Int(1), Label::Int(2));
        let e =
            CwdExpr::join(one.clone(), two.clone(), CwdExpr::union(CwdExpr::create(one, 0), CwdExpr::create(two, 1)));
        let dot = expression(&e);
        assert_eq!(dot.matches("[label=").count(), 4);
        assert_eq!(dot.matches(" -> n").count(), 3);
    }
}
