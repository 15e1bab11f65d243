use std::collections::{HashMap, VecDeque};
use std::fmt::Write;

use serde::Serialize;

use super::lts::{lts_successors, tau_moves, TauRule};
use super::{Edge, ExploreBudget, Label};
use crate::syntax::State;

/// A bounded fragment of the transition system, in breadth-first order.
#[derive(Clone, Debug, Default)]
pub struct ExploredLts {
    pub states: Vec<State>,
    pub edges: Vec<Edge>,
    pub truncated: bool,
}

/// Explores every labeled edge from `root`. Clone steps are counted along
/// the breadth-first discovery path of each state.
pub fn explore(root: &State, b: &ExploreBudget) -> ExploredLts {
    let mut index: HashMap<State, (usize, usize)> = HashMap::new();
    let mut out = ExploredLts::default();
    let mut queue = VecDeque::new();
    index.insert(root.clone(), (0, 0));
    out.states.push(root.clone());
    queue.push_back(root.clone());
    while let Some(cur) = queue.pop_front() {
        let (clones, depth) = index[&cur];
        let clone_targets: Vec<State> = tau_moves(&cur)
            .into_iter()
            .filter(|(_, r)| *r == TauRule::Clone)
            .map(|(s, _)| s)
            .collect();
        for e in lts_successors(&cur) {
            let is_clone = e.label == Label::Tau && clone_targets.contains(&e.to);
            let cost = (clones + usize::from(is_clone), depth + 1);
            if !index.contains_key(&e.to) {
                if cost.0 > b.max_clones || cost.1 > b.max_tau_depth || out.states.len() >= b.max_states {
                    out.truncated = true;
                    continue;
                }
                index.insert(e.to.clone(), cost);
                out.states.push(e.to.clone());
                queue.push_back(e.to.clone());
            }
            out.edges.push(e);
        }
    }
    out
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering of the explored fragment; nodes are numbered in
/// discovery order, so output is deterministic.
pub fn export_dot(root: &State, b: &ExploreBudget) -> String {
    let lts = explore(root, b);
    let ids: HashMap<&State, usize> = lts.states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut out = String::from("digraph lts {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
    for (i, s) in lts.states.iter().enumerate() {
        let shape = if i == 0 { ", penwidth=2" } else { "" };
        let _ = writeln!(out, "  s{i} [label=\"{}\"{shape}];", escape(&s.to_string()));
    }
    for e in &lts.edges {
        let label = match &e.label {
            Label::Tau => "τ".to_string(),
            other => other.to_string(),
        };
        let _ = writeln!(out, "  s{} -> s{} [label=\"{}\"];", ids[&e.from], ids[&e.to], escape(&label));
    }
    if lts.truncated {
        out.push_str("  // truncated by budget\n");
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct EdgeRow {
    from: String,
    label: String,
    to: String,
}

/// `{from, label, to}` rows with states in canonical rendering.
pub fn export_edges(root: &State, b: &ExploreBudget) -> (serde_json::Value, bool) {
    let lts = explore(root, b);
    let rows: Vec<EdgeRow> = lts
        .edges
        .iter()
        .map(|e| EdgeRow { from: e.from.to_string(), label: e.label.to_string(), to: e.to.to_string() })
        .collect();
    (serde_json::to_value(rows).expect("edge rows serialize"), lts.truncated)
}
