//! Graphviz export. White vertices are invariant, black ones dicritical.

use std::fmt::Write as _;

use crate::dicriticity::{Configuration, Dicriticity};
use crate::tree::{Numbering, ResolutionTree};

pub fn emit_dot(tree: &ResolutionTree, n: &Numbering, delta: &Dicriticity, eps: &Configuration) -> String {
    let mut out = String::from("graph saito {\n  node [shape=box, style=filled, fontname=\"Helvetica\"];\n");
    for v in tree.vertices() {
        let (fill, font) = if delta.is_white(v) {
            ("white", "black")
        } else {
            ("black", "white")
        };
        writeln!(
            out,
            "  v{v} [label=\"{v} | n={} | ε={}\", fillcolor={fill}, fontcolor={font}];",
            n.get(v),
            eps.get(v)
        )
        .expect("writing to a string");
    }
    for (a, b) in tree.edges() {
        writeln!(out, "  v{a} -- v{b};").expect("writing to a string");
    }
    out.push_str("}\n");
    out
}
