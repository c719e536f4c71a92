//! Graphviz output for models, frames and algebras.

use std::fmt::Write;

use ieak::algebra::TableAlgebra;
use ieak::relational::{Frame, Model};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// Worlds are labeled with their true atoms. A pair related both ways is drawn once without
/// arrowheads; loops are omitted. Strict order pairs are dashed.
pub fn frame_dot(frame: &Frame, model: Option<&Model>) -> String {
    let w = frame.worlds();
    let mut out = String::from("digraph model {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, name) in w.iter().enumerate() {
        let atoms = model.map(|m| m.atoms_at(i).join(", ")).unwrap_or_default();
        let label = if atoms.is_empty() { escape(name) } else { format!("{}\\n{}", escape(name), escape(&atoms)) };
        writeln!(out, "  {} [label=\"{label}\"];", quote(name)).unwrap();
    }
    for (x, y) in frame.order().pairs() {
        if x != y {
            writeln!(out, "  {} -> {} [style=dashed, arrowhead=none];", quote(&w[x]), quote(&w[y])).unwrap();
        }
    }
    for (a, agent) in frame.agents().iter().enumerate() {
        let r = frame.relation(a);
        for (x, y) in r.pairs() {
            if x == y || (r.contains(y, x) && y < x) {
                continue;
            }
            let dir = if r.contains(y, x) { ", dir=none" } else { "" };
            writeln!(out, "  {} -> {} [label={}{dir}];", quote(&w[x]), quote(&w[y]), quote(agent.as_str())).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram of the lattice order, bottom at the bottom.
pub fn algebra_dot(t: &TableAlgebra) -> String {
    let n = t.len() as u32;
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  edge [arrowhead=none];\n");
    for x in 0..n {
        writeln!(out, "  {};", quote(t.name(x))).unwrap();
    }
    for x in 0..n {
        for y in 0..n {
            let covers = x != y && t.le(x, y) && !(0..n).any(|z| z != x && z != y && t.le(x, z) && t.le(z, y));
            if covers {
                writeln!(out, "  {} -> {};", quote(t.name(x)), quote(t.name(y))).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
