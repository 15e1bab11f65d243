//! Checks simulation artifacts against the transition system directly,
//! without the checker's pair graph.

use std::collections::{HashMap, HashSet};

use super::{Challenge, Justification, TraceStep, WitnessPair};
use crate::semantics::{lts_successors, never_empties, producible_atoms, weak_step, weak_tau, Closure, ExploreBudget, Label};
use crate::syntax::{Formula, State};

fn challenges(p: &State) -> Vec<Challenge> {
    let mut out = Vec::new();
    if p.delta().is_empty() {
        out.push(Challenge::Empty);
    }
    out.extend(p.partitions().into_iter().map(|(left, right)| Challenge::Split { left, right }));
    out.extend(lts_successors(p).into_iter().map(|e| Challenge::Move { label: e.label, to: e.to }));
    out
}

/// Every way `q` can answer `c`, as lists of pairs that must be related, and
/// whether more answers may lie beyond the budget.
fn responses(p: &State, q: &State, c: &Challenge, b: &ExploreBudget) -> (Vec<Vec<(State, State)>>, bool) {
    let pair_with = |to: &State, cl: Closure| -> (Vec<Vec<(State, State)>>, bool) {
        (cl.states.into_iter().map(|r| vec![(to.clone(), r)]).collect(), cl.truncated)
    };
    match c {
        Challenge::Empty => {
            let cl = weak_tau(q, b);
            let rs = cl.states.into_iter().filter(|r| r.delta().is_empty()).map(|r| vec![(p.clone(), r)]).collect();
            (rs, cl.truncated)
        }
        Challenge::Split { left, right } => {
            let cl = weak_tau(q, b);
            let mut rs = Vec::new();
            for r in &cl.states {
                for (ql, qr) in r.partitions() {
                    rs.push(vec![(left.clone(), ql), (right.clone(), qr)]);
                }
            }
            (rs, cl.truncated)
        }
        Challenge::Move { label: Label::Tau, to } => pair_with(to, weak_tau(q, b)),
        Challenge::Move { label: label @ Label::Send(a), to } => {
            let (rs, open) = pair_with(to, weak_step(q, label, b));
            (rs, open && producible_atoms(q).contains(a))
        }
        Challenge::Move { label: Label::Recv(a), to } => pair_with(to, weak_tau(&q.with_delta(Formula::Atom(a.clone())), b)),
        Challenge::Barb { .. } | Challenge::Halt => (Vec::new(), false),
    }
}

/// Checks that `witness` contains `(s1, s2)` and that each of its pairs is
/// either absorbed (checked by replaying the silent closure) or has every
/// challenge answered by pairs inside the witness.
pub fn validate_witness(s1: &State, s2: &State, witness: &[WitnessPair], b: &ExploreBudget) -> Result<(), String> {
    let rel: HashSet<(&State, &State)> = witness.iter().map(|w| (&w.left, &w.right)).collect();
    if !rel.contains(&(s1, s2)) {
        return Err(format!("witness does not contain ({s1}) ≼ ({s2})"));
    }
    for w in witness {
        match &w.justification {
            Justification::Absorbed { via } => {
                if via.delta() != w.left.delta() || !w.left.gamma().iter().all(|g| via.gamma_contains(g)) {
                    return Err(format!("({via}) does not absorb ({})", w.left));
                }
                if !weak_tau(&w.right, b).contains(via) {
                    return Err(format!("({}) does not silently reach ({via})", w.right));
                }
            }
            Justification::Composed { left_a, right_a, left_b, right_b } => {
                if left_a.compose(left_b) != w.left || right_a.compose(right_b) != w.right {
                    return Err(format!("parts do not compose to ({}) ≼ ({})", w.left, w.right));
                }
                if left_a.size() >= w.left.size() || left_b.size() >= w.left.size() {
                    return Err(format!("parts of ({}) are not smaller", w.left));
                }
                if !rel.contains(&(left_a, right_a)) || !rel.contains(&(left_b, right_b)) {
                    return Err(format!("parts of ({}) ≼ ({}) are missing from the witness", w.left, w.right));
                }
            }
            Justification::Clauses => {
                for c in challenges(&w.left) {
                    let (rs, _) = responses(&w.left, &w.right, &c, b);
                    let ok = rs.iter().any(|r| r.iter().all(|(x, y)| rel.contains(&(x, y))));
                    if !ok {
                        return Err(format!("({}) ≼ ({}): challenge {c:?} has no answer in the witness", w.left, w.right));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Replays a refutation: the first step is `(s1, s2)`, each step's challenge
/// is a real move of its left state, the right state's answers are all known
/// (no truncation), and each answer contains a pair refuted at lower rank.
pub fn replay_trace(s1: &State, s2: &State, trace: &[TraceStep], b: &ExploreBudget) -> Result<(), String> {
    let first = trace.first().ok_or("empty trace")?;
    if first.left != *s1 || first.right != *s2 {
        return Err("trace does not start at the queried pair".into());
    }
    let rank: HashMap<(&State, &State), usize> = trace.iter().map(|t| ((&t.left, &t.right), t.rank)).collect();
    for t in trace {
        match &t.challenge {
            Challenge::Barb { atom } => {
                let shows = weak_tau(&t.left, b).states.iter().any(|s| s.delta().contains(&Formula::Atom(atom.clone())));
                if !shows || producible_atoms(&t.right).contains(atom) {
                    return Err(format!("barb {atom} does not separate ({}) from ({})", t.left, t.right));
                }
                continue;
            }
            Challenge::Halt => {
                let halts = weak_tau(&t.left, b).states.iter().any(|s| s.delta().is_empty());
                if !halts || !never_empties(&t.right) {
                    return Err(format!("emptiness does not separate ({}) from ({})", t.left, t.right));
                }
                continue;
            }
            _ => {}
        }
        if !challenges(&t.left).contains(&t.challenge) {
            return Err(format!("{:?} is not a challenge of ({})", t.challenge, t.left));
        }
        let (rs, open) = responses(&t.left, &t.right, &t.challenge, b);
        if open {
            return Err(format!("answers of ({}) to {:?} are cut off by the budget", t.right, t.challenge));
        }
        for r in &rs {
            let refuted = r.iter().any(|(x, y)| rank.get(&(x, y)).is_some_and(|&k| k < t.rank));
            if !refuted {
                let shown: Vec<String> = r.iter().map(|(x, y)| format!("({x}) ≼ ({y})")).collect();
                return Err(format!("answer {} to {:?} is not refuted", shown.join(" and "), t.challenge));
            }
        }
    }
    Ok(())
}
