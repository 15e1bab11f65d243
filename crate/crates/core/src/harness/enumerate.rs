use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::syntax::{Atom, Formula, Sequent, State};

/// What to enumerate. States are bounded per-formula by `max_formula_size`,
/// per-context by cardinality, and optionally by total state size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumSpec {
    pub atoms: Vec<Atom>,
    pub max_formula_size: usize,
    pub max_gamma: usize,
    pub max_delta: usize,
    #[serde(default)]
    pub max_state_size: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl EnumSpec {
    pub fn new(atoms: &[&str], max_formula_size: usize, max_gamma: usize, max_delta: usize) -> EnumSpec {
        EnumSpec {
            atoms: atoms.iter().map(|a| Atom::new(a).expect("valid atom")).collect(),
            max_formula_size,
            max_gamma,
            max_delta,
            max_state_size: None,
            seed: 0,
        }
    }

    pub fn with_state_size(mut self, n: usize) -> EnumSpec {
        self.max_state_size = Some(n);
        self
    }
}

/// Formulas of each exact size `0..=max` (index 0 is empty).
fn by_size(atoms: &[Atom], max: usize) -> Vec<Vec<Formula>> {
    let mut table: Vec<Vec<Formula>> = vec![Vec::new(); max + 1];
    for n in 1..=max {
        let mut level = Vec::new();
        if n == 1 {
            level.extend(atoms.iter().cloned().map(Formula::Atom));
            level.push(Formula::One);
            level.push(Formula::Top);
        } else {
            for f in &table[n - 1] {
                level.push(Formula::bang(f.clone()));
            }
            for i in 1..n - 1 {
                for l in &table[i] {
                    for r in &table[n - 1 - i] {
                        level.push(Formula::tensor(l.clone(), r.clone()));
                        level.push(Formula::with(l.clone(), r.clone()));
                    }
                }
            }
            if n >= 3 {
                for a in atoms {
                    for body in &table[n - 2] {
                        level.push(Formula::lolli(a.clone(), body.clone()));
                    }
                }
            }
        }
        level.sort();
        table[n] = level;
    }
    table
}

/// All formulas up to `max_size` over `atoms`, by size, then formula order.
pub fn enumerate_formulas(atoms: &[Atom], max_size: usize) -> Vec<Formula> {
    by_size(atoms, max_size).into_iter().flatten().collect()
}

/// All canonical states within the bounds, by state size, then state order.
pub fn enumerate_states(spec: &EnumSpec) -> Vec<State> {
    let formulas = enumerate_formulas(&spec.atoms, spec.max_formula_size);
    let limit = spec.max_state_size.unwrap_or(usize::MAX);
    let mut gammas: Vec<Vec<Formula>> = Vec::new();
    subsets(&formulas, 0, spec.max_gamma, false, &mut Vec::new(), &mut gammas, limit);
    let mut deltas: Vec<Vec<Formula>> = Vec::new();
    subsets(&formulas, 0, spec.max_delta, true, &mut Vec::new(), &mut deltas, limit);
    let mut out = BTreeSet::new();
    for g in &gammas {
        for d in &deltas {
            let s = State::new(g.iter().cloned(), d.iter().cloned());
            if s.size() <= limit {
                out.insert((s.size(), s));
            }
        }
    }
    out.into_iter().map(|(_, s)| s).collect()
}

fn cost(chosen: &[Formula]) -> usize {
    chosen.iter().map(|f| f.size() + 1).sum()
}

fn subsets(
    items: &[Formula],
    start: usize,
    max_len: usize,
    repeat: bool,
    chosen: &mut Vec<Formula>,
    out: &mut Vec<Vec<Formula>>,
    limit: usize,
) {
    out.push(chosen.clone());
    if chosen.len() == max_len {
        return;
    }
    for i in start..items.len() {
        chosen.push(items[i].clone());
        if cost(chosen) <= limit {
            subsets(items, if repeat { i } else { i + 1 }, max_len, repeat, chosen, out, limit);
        }
        chosen.pop();
    }
}

/// Sequents `Γ;Δ ⊢ A` with total size (state size plus goal size) at most
/// `max_size`.
pub fn enumerate_sequents(spec: &EnumSpec, max_size: usize) -> Vec<Sequent> {
    let goals = enumerate_formulas(&spec.atoms, spec.max_formula_size.min(max_size));
    let states = enumerate_states(&EnumSpec { max_state_size: Some(max_size.saturating_sub(1)), ..spec.clone() });
    let mut out = Vec::new();
    for s in &states {
        for g in &goals {
            if s.size() + g.size() <= max_size {
                out.push(Sequent::new(s.clone(), g.clone()));
            }
        }
    }
    out
}
