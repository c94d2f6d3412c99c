use std::fmt::Write as _;

use super::color::NodeColor;
use super::trace::{ExecutionTrace, Snapshot};
use crate::graph::{DSepQuery, Dag};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders one configuration as a Graphviz digraph.
///
/// Colored nodes are filled white, green or red; a clashed node is drawn as a
/// double circle. Edges leaving a conditioning node are dashed.
pub fn snapshot_to_dot(g: &Dag, q: &DSepQuery, snap: &Snapshot) -> String {
    let in_c = q.c_mask(g.len());
    let mut out = String::new();
    let _ = writeln!(out, "digraph snapshot_{} {{", snap.step);
    let _ = writeln!(out, "  label={};", quote(&format!("t = {} (step {})", snap.time, snap.step)));
    out.push_str("  node [shape=circle];\n");
    for (v, name) in g.names().iter().enumerate() {
        let attrs = match snap.colors[v] {
            NodeColor::None => String::new(),
            NodeColor::White => " [style=filled, fillcolor=white]".to_string(),
            NodeColor::Green => " [style=filled, fillcolor=green]".to_string(),
            NodeColor::Red => " [style=filled, fillcolor=red]".to_string(),
            NodeColor::Clash => " [shape=doublecircle, style=filled, fillcolor=\"green:red\"]".to_string(),
        };
        let _ = writeln!(out, "  {}{};", quote(name), attrs);
    }
    for &(p, c) in g.edges() {
        let style = if in_c[p] { " [style=dashed]" } else { "" };
        let _ = writeln!(out, "  {} -> {}{};", quote(g.name(p)), quote(g.name(c)), style);
    }
    out.push_str("}\n");
    out
}

/// One DOT document per snapshot, in trace order.
pub fn trace_to_dot(g: &Dag, q: &DSepQuery, trace: &ExecutionTrace) -> Vec<String> {
    trace.snapshots.iter().map(|s| snapshot_to_dot(g, q, s)).collect()
}
