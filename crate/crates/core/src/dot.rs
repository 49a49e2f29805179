//! Graphviz export. Output is byte-stable: nodes and edges come out in
//! canonical order and nothing depends on hashing or timing.

use std::fmt::Write as _;
use std::path::Path;

use crate::automata::Nfa;
use crate::error::{Error, Result};
use crate::model::{OpenDes, StateSet};
use crate::observer::Observer;

const LEGEND: &str = "  // legend: doublecircle = marked, filled = secret, bold = initial\n";

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn node(out: &mut String, name: &str, initial: bool, marked: bool, secret: bool) {
    let mut attrs = vec![format!("shape={}", if marked { "doublecircle" } else { "circle" })];
    if secret {
        attrs.push("style=filled".into());
        attrs.push("fillcolor=lightgray".into());
    }
    if initial {
        attrs.push("penwidth=2".into());
    }
    let _ = writeln!(out, "  {} [{}];", quote(name), attrs.join(", "));
}

fn edge(out: &mut String, from: &str, to: &str, label: &str) {
    let _ = writeln!(out, "  {} -> {} [label={}];", quote(from), quote(to), quote(label));
}

fn header(name: &str) -> String {
    format!("digraph {} {{\n  rankdir=LR;\n{LEGEND}", quote(name))
}

/// One edge per `(q, x, d, q')`, labelled `x/d`.
pub fn model_to_dot(model: &OpenDes) -> String {
    let mut out = header("model");
    for (q, name) in model.state_names().iter().enumerate() {
        node(
            &mut out,
            name,
            model.initial().contains(&q),
            model.marked().contains(&q),
            model.secret().contains(&q),
        );
    }
    let a = model.alphabet();
    for e in model.edges() {
        let label = format!("{}/{}", a.input_name(e.input), a.output_name(e.output));
        edge(&mut out, model.state_name(e.from), model.state_name(e.to), &label);
    }
    out.push_str("}\n");
    out
}

pub fn nfa_to_dot(nfa: &Nfa) -> String {
    let mut out = header("nfa");
    for (q, name) in nfa.state_names().iter().enumerate() {
        node(&mut out, name, nfa.initial().contains(&q), nfa.marked().contains(&q), false);
    }
    for &(a, e, b) in nfa.transitions() {
        edge(&mut out, &nfa.state_names()[a], &nfa.state_names()[b], &nfa.events()[e]);
    }
    out.push_str("}\n");
    out
}

/// Estimates inside `secret` (and nonempty) are filled.
pub fn observer_to_dot(obs: &Observer, secret: Option<&StateSet>) -> String {
    let mut out = header("observer");
    for i in 0..obs.num_states() {
        let e = obs.estimate(i);
        let exposed = secret.is_some_and(|s| !e.is_empty() && e.is_subset(s));
        node(&mut out, &obs.estimate_label(i), i == obs.initial(), false, exposed);
    }
    for (&(s, l), &t) in obs.transitions() {
        edge(&mut out, &obs.estimate_label(s), &obs.estimate_label(t), &obs.label_name(l));
    }
    out.push_str("}\n");
    out
}

pub fn write_dot(text: &str, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
