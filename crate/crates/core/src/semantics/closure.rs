use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::lts::{lts_successors, tau_moves, TauRule};
use super::{ExploreBudget, Label};
use crate::syntax::{Atom, Formula, State};

/// A bounded set of reachable states. `truncated` is set when some path was
/// cut by the budget, i.e. the true set may be larger.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Closure {
    pub states: BTreeSet<State>,
    pub truncated: bool,
}

impl Closure {
    pub fn contains(&self, s: &State) -> bool {
        self.states.contains(s)
    }
}

// A state is re-expanded when reached with a (clones, depth) cost that no
// earlier visit dominates, so raising either bound only adds states.
fn dominated(labels: &[(usize, usize)], cost: (usize, usize)) -> bool {
    labels.iter().any(|&(c, d)| c <= cost.0 && d <= cost.1)
}

/// States reachable from `s` by τ steps (reflexive), within budget.
pub fn weak_tau(s: &State, b: &ExploreBudget) -> Closure {
    let mut labels: HashMap<State, Vec<(usize, usize)>> = HashMap::new();
    let mut states = BTreeSet::new();
    let mut truncated = false;
    let mut queue = VecDeque::new();
    states.insert(s.clone());
    labels.insert(s.clone(), vec![(0, 0)]);
    queue.push_back((s.clone(), 0usize, 0usize));
    while let Some((cur, clones, depth)) = queue.pop_front() {
        for (next, rule) in tau_moves(&cur) {
            let cost = (clones + usize::from(rule == TauRule::Clone), depth + 1);
            if cost.0 > b.max_clones || cost.1 > b.max_tau_depth {
                truncated = true;
                continue;
            }
            let seen = labels.entry(next.clone()).or_default();
            if dominated(seen, cost) {
                continue;
            }
            if seen.is_empty() {
                if states.len() >= b.max_states {
                    truncated = true;
                    continue;
                }
                states.insert(next.clone());
            }
            seen.retain(|&(c, d)| !(cost.0 <= c && cost.1 <= d));
            seen.push(cost);
            queue.push_back((next, cost.0, cost.1));
        }
    }
    Closure { states, truncated }
}

/// `s ⇒τ -l-> ⇒τ`, for a visible label `l`. Each τ segment gets the full
/// budget.
pub fn weak_step(s: &State, l: &Label, b: &ExploreBudget) -> Closure {
    assert!(*l != Label::Tau, "use weak_tau for silent steps");
    let before = weak_tau(s, b);
    let mut truncated = before.truncated;
    let mut mids = BTreeSet::new();
    for pre in &before.states {
        for e in lts_successors(pre) {
            if e.label == *l {
                mids.insert(e.to);
            }
        }
    }
    let mut states = BTreeSet::new();
    for mid in &mids {
        let after = weak_tau(mid, b);
        truncated |= after.truncated;
        states.extend(after.states);
    }
    Closure { states, truncated }
}

/// Atoms present at top level in Δ.
pub fn strong_barbs(s: &State) -> BTreeSet<Atom> {
    s.delta().iter().filter_map(Formula::as_atom).cloned().collect()
}

/// Atoms that become present after some τ steps, within budget.
pub fn weak_barbs(s: &State, b: &ExploreBudget) -> (BTreeSet<Atom>, bool) {
    let closure = weak_tau(s, b);
    let barbs = closure.states.iter().flat_map(strong_barbs).collect();
    (barbs, closure.truncated)
}

/// Atoms that can ever be sent from `s` without outside input: every atom
/// occurring in Γ or Δ outside a receive's antecedent. A sound
/// over-approximation of the weak barbs of `s` under any budget.
pub fn producible_atoms(s: &State) -> BTreeSet<Atom> {
    fn walk(f: &Formula, out: &mut BTreeSet<Atom>) {
        match f {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::One | Formula::Top => {}
            Formula::Tensor(l, r) | Formula::With(l, r) => {
                walk(l, out);
                walk(r, out);
            }
            Formula::Lolli(_, body) => walk(body, out),
            Formula::Bang(inner) => walk(inner, out),
        }
    }
    let mut out = BTreeSet::new();
    for f in s.gamma().iter().chain(s.delta()) {
        walk(f, &mut out);
    }
    out
}

/// Whether no sequence of τ steps from `s` can ever empty its linear
/// context: some formula in Δ contains `top`, an atom nobody receives, or a
/// receive whose message can never be produced, in a position no choice can
/// avoid. Sound, not complete.
pub fn never_empties(s: &State) -> bool {
    fn receivers(f: &Formula, out: &mut BTreeSet<Atom>) {
        match f {
            Formula::Atom(_) | Formula::One | Formula::Top => {}
            Formula::Tensor(l, r) | Formula::With(l, r) => {
                receivers(l, out);
                receivers(r, out);
            }
            Formula::Lolli(a, body) => {
                out.insert(a.clone());
                receivers(body, out);
            }
            Formula::Bang(inner) => receivers(inner, out),
        }
    }
    fn stuck(f: &Formula, sent: &BTreeSet<Atom>, heard: &BTreeSet<Atom>) -> bool {
        match f {
            Formula::Top => true,
            Formula::Atom(a) => !heard.contains(a),
            Formula::One | Formula::Bang(_) => false,
            Formula::Tensor(l, r) => stuck(l, sent, heard) || stuck(r, sent, heard),
            Formula::With(l, r) => stuck(l, sent, heard) && stuck(r, sent, heard),
            Formula::Lolli(a, body) => !sent.contains(a) || stuck(body, sent, heard),
        }
    }
    let sent = producible_atoms(s);
    let mut heard = BTreeSet::new();
    for f in s.gamma().iter().chain(s.delta()) {
        receivers(f, &mut heard);
    }
    s.delta().iter().any(|f| stuck(f, &sent, &heard))
}
