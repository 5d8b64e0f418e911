//! Graphviz DOT output. Edges of weight 0 are dashed, all others carry
//! their weight as a label.

use std::fmt::Write;

use crate::graph::{Graph, OrientedGraph};
use crate::oriented::RootedLabeledTree;
use crate::tree::{LabeledTree, Weight};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn graph_to_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        writeln!(out, "  v{v} [label={}];", quote(&g.name(v))).unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "  v{u} -- v{v};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn oriented_to_dot(d: &OrientedGraph) -> String {
    let mut out = String::from("digraph G {\n");
    for v in 0..d.n() {
        writeln!(out, "  v{v} [label={}];", quote(&d.name(v))).unwrap();
    }
    for (u, v) in d.arcs() {
        writeln!(out, "  v{u} -> v{v};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn tree_nodes(t: &LabeledTree, root: Option<usize>, out: &mut String) {
    for v in 0..t.node_count() {
        let label = quote(t.name(v).unwrap_or(""));
        if t.is_leaf(v) {
            writeln!(out, "  n{v} [shape=box, label={label}];").unwrap();
        } else if Some(v) == root {
            writeln!(out, "  n{v} [shape=triangle, label={label}];").unwrap();
        } else {
            writeln!(out, "  n{v} [shape=circle, width=0.2, label={label}];").unwrap();
        }
    }
}

fn edge_style(w: Weight) -> String {
    if w == 0 {
        "[style=dashed]".to_owned()
    } else {
        format!("[label=\"{w}\"]")
    }
}

pub fn tree_to_dot(t: &LabeledTree) -> String {
    let mut out = String::from("graph T {\n");
    tree_nodes(t, None, &mut out);
    for (u, v, w) in t.edges() {
        writeln!(out, "  n{u} -- n{v} {};", edge_style(w)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Edges point away from the root.
pub fn rooted_tree_to_dot(r: &RootedLabeledTree) -> String {
    let t = r.tree();
    let mut out = String::from("digraph T {\n  edge [arrowhead=none];\n");
    tree_nodes(t, Some(r.root()), &mut out);
    let mut seen = vec![false; t.node_count()];
    seen[r.root()] = true;
    let mut queue = std::collections::VecDeque::from([r.root()]);
    while let Some(u) = queue.pop_front() {
        for &(v, w) in t.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                writeln!(out, "  n{u} -> n{v} {};", edge_style(w)).unwrap();
                queue.push_back(v);
            }
        }
    }
    out.push_str("}\n");
    out
}
