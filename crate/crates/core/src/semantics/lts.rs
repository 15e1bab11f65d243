use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Edge, Label};
use crate::syntax::{Formula, State};

/// Which transition rule produced a τ step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauRule {
    Fork,
    Unit,
    Choose,
    Sync,
    Promote,
    Clone,
}

/// All τ successors, tagged with the producing rule. A successor reachable by
/// two rules appears once per rule.
pub fn tau_moves(s: &State) -> Vec<(State, TauRule)> {
    let mut out = BTreeSet::new();
    for (i, f) in s.distinct_delta() {
        match f {
            Formula::Tensor(l, r) => {
                out.insert((s.replace_delta(i, [(**l).clone(), (**r).clone()]), TauRule::Fork));
            }
            Formula::One => {
                out.insert((s.replace_delta(i, []), TauRule::Unit));
            }
            Formula::With(l, r) => {
                for branch in [l, r] {
                    out.insert((s.replace_delta(i, [(**branch).clone()]), TauRule::Choose));
                }
            }
            Formula::Bang(inner) => {
                out.insert((s.replace_delta(i, []).with_gamma((**inner).clone()), TauRule::Promote));
            }
            Formula::Atom(_) | Formula::Top | Formula::Lolli(..) => {}
        }
    }
    // Synchronization: a send `a` in Δ meets a receiver `a -o B` in Δ. This is
    // the split-and-combine rule specialised to a direct redex match.
    for (i, f) in s.distinct_delta() {
        if let Formula::Lolli(a, body) = f {
            let msg = Formula::Atom(a.clone());
            if s.delta_count(&msg) > 0 {
                let after = s.replace_delta(i, [(**body).clone()]);
                let after = after.without_delta(&msg).expect("message still present");
                out.insert((after, TauRule::Sync));
            }
        }
    }
    for g in s.gamma() {
        out.insert((s.with_delta(g.clone()), TauRule::Clone));
    }
    out.into_iter().collect()
}

/// All one-step labeled successors of `s`, sorted.
pub fn lts_successors(s: &State) -> Vec<Edge> {
    let mut out = BTreeSet::new();
    for (to, _) in tau_moves(s) {
        out.insert(Edge { from: s.clone(), label: Label::Tau, to });
    }
    for (i, f) in s.distinct_delta() {
        match f {
            Formula::Atom(a) => {
                out.insert(Edge { from: s.clone(), label: Label::Send(a.clone()), to: s.replace_delta(i, []) });
            }
            Formula::Lolli(a, body) => {
                out.insert(Edge {
                    from: s.clone(),
                    label: Label::Recv(a.clone()),
                    to: s.replace_delta(i, [(**body).clone()]),
                });
            }
            _ => {}
        }
    }
    out.into_iter().collect()
}
