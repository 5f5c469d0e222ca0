//! Graphviz rendering of event graphs and domain Hasse diagrams.

use std::fmt::Write;

use sigma_refine::dynamics::EventGraph;
use sigma_refine::endogenous::CompatibilityDomain;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per label in sorted order, one edge per covering pair.
pub fn event_graph_dot(graph: &EventGraph) -> String {
    let mut out = String::from("digraph events {\n");
    for node in graph.nodes() {
        writeln!(out, "  {};", quote(node)).unwrap();
    }
    for (a, b) in graph.covers() {
        writeln!(out, "  {} -> {};", quote(a), quote(b)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Members as nodes, edges from each member to the members covering it.
pub fn domain_dot(domain: &CompatibilityDomain) -> String {
    let mut out = String::from("digraph domain {\n");
    for (i, m) in domain.members().iter().enumerate() {
        writeln!(out, "  m{i} [label={}];", quote(&m.to_string())).unwrap();
    }
    for (i, j) in domain.covering_pairs() {
        writeln!(out, "  m{i} -> m{j};").unwrap();
    }
    out.push_str("}\n");
    out
}
