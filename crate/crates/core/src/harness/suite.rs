use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{enumerate_formulas, enumerate_sequents, enumerate_states, Budgets, EnumSpec};
use crate::preorders::{simulate, SimConfig};
use crate::prover::{admissibility_suite, logical_preorder, prove, ProofResult};
use crate::semantics::{reductions, tau_moves, weak_tau};
use crate::syntax::{Formula, Sequent, State};
use crate::Decision;

/// Outcome of one universally quantified check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub name: String,
    pub checked: usize,
    /// Instances the checkers confirmed.
    pub confirmed: usize,
    /// Instances left undecided by a budget.
    pub unknown: usize,
    pub violations: Vec<String>,
}

impl LemmaReport {
    fn new(name: &str) -> LemmaReport {
        LemmaReport { name: name.to_string(), ..LemmaReport::default() }
    }

    /// Records one instance whose expected answer is `Holds`.
    fn expect_holds(&mut self, d: Decision, what: impl FnOnce() -> String) {
        self.checked += 1;
        match d {
            Decision::Holds => self.confirmed += 1,
            Decision::Unknown => self.unknown += 1,
            Decision::Fails => self.violations.push(what()),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(mut self, other: LemmaReport) -> LemmaReport {
        self.checked += other.checked;
        self.confirmed += other.confirmed;
        self.unknown += other.unknown;
        self.violations.extend(other.violations);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub lemmas: Vec<LemmaReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.lemmas.iter().all(LemmaReport::passed)
    }
}

/// Runs `check` over `items` in parallel and folds the per-item reports in
/// item order.
fn over<T: Sync>(name: &str, items: &[T], check: impl Fn(&T, &mut LemmaReport) + Sync) -> LemmaReport {
    items
        .par_iter()
        .map(|x| {
            let mut r = LemmaReport::new(name);
            check(x, &mut r);
            r
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(LemmaReport::new(name), LemmaReport::merge)
}

fn pair(a: &State, b: &State) -> String {
    format!("({a}) ≼ ({b})")
}

/// Simulation without the absorption leaves, so that weakening and τ facts
/// are derived rather than assumed.
fn plain(b: &Budgets) -> SimConfig {
    SimConfig { absorb: false, ..b.sim }
}

/// Weakening: `(Γ;Δ) ≼ (Γ,Γ';Δ)` in both checkers, for single extra
/// formulas of size at most 2.
pub fn check_weakening(spec: &EnumSpec, b: &Budgets) -> LemmaReport {
    let states = enumerate_states(spec);
    let extra = enumerate_formulas(&spec.atoms, 2);
    let cases: Vec<(State, State)> = states
        .iter()
        .flat_map(|s| extra.iter().filter(|g| !s.gamma_contains(g)).map(move |g| (s.clone(), s.with_gamma(g.clone()))))
        .collect();
    let sim = plain(b);
    over("weakening", &cases, |(s, t), r| {
        r.expect_holds(logical_preorder(s, t, &b.search).decision, || format!("logical {}", pair(s, t)));
        r.expect_holds(simulate(s, t, &sim).verdict, || format!("simulation {}", pair(s, t)));
    })
}

/// Silent steps move down: `s ⇒τ s'` gives `s' ≼ s` in both checkers.
pub fn check_tau_down(spec: &EnumSpec, b: &Budgets) -> LemmaReport {
    let states = enumerate_states(spec);
    let sim = plain(b);
    over("tau-down", &states, |s, r| {
        for t in weak_tau(s, &b.sim.explore).states.iter().take(16) {
            r.expect_holds(logical_preorder(t, s, &b.search).decision, || format!("logical {}", pair(t, s)));
            r.expect_holds(simulate(t, s, &sim).verdict, || format!("simulation {}", pair(t, s)));
        }
    })
}

/// `(Γ;Δ)` and `(·;!Γ,Δ)` are equivalent, both directions, both checkers.
pub fn check_expansion(spec: &EnumSpec, b: &Budgets) -> LemmaReport {
    let states: Vec<State> = enumerate_states(spec).into_iter().filter(|s| !s.gamma().is_empty()).collect();
    let sim = plain(b);
    over("expansion", &states, |s, r| {
        let e = s.expand_bangs();
        for (x, y) in [(s, &e), (&e, s)] {
            r.expect_holds(logical_preorder(x, y, &b.search).decision, || format!("logical {}", pair(x, y)));
            r.expect_holds(simulate(x, y, &sim).verdict, || format!("simulation {}", pair(x, y)));
        }
    })
}

fn sequent_corpus(spec: &EnumSpec, max_size: usize) -> Vec<Sequent> {
    enumerate_sequents(spec, max_size)
}

/// Provable sequents give simulations, `Γ;Δ ⊢ A ⟹ (Γ;A) ≼s (Γ;Δ)`, and
/// simulations give proofs, `(Γ;A) ≼s (Γ;Δ) ⟹ Γ;Δ ⊢ A`.
pub fn check_provability_simulation(spec: &EnumSpec, max_size: usize, b: &Budgets) -> (LemmaReport, LemmaReport) {
    let corpus = sequent_corpus(spec, max_size);
    let results: Vec<(LemmaReport, LemmaReport)> = corpus
        .par_iter()
        .map(|s| {
            let mut sound = LemmaReport::new("proof-to-simulation");
            let mut complete = LemmaReport::new("simulation-to-proof");
            let p = prove(s, &b.search);
            let left = State::new(s.gamma().iter().cloned(), [s.goal.clone()]);
            let v = simulate(&left, &s.context, &b.sim).verdict;
            if p.is_proved() {
                sound.expect_holds(v, || format!("{s} is provable but {} fails", pair(&left, &s.context)));
            }
            if v == Decision::Holds {
                complete.expect_holds(p.decision(), || format!("{} holds but {s} is refuted", pair(&left, &s.context)));
            }
            (sound, complete)
        })
        .collect();
    results.into_iter().fold(
        (LemmaReport::new("proof-to-simulation"), LemmaReport::new("simulation-to-proof")),
        |(a, b), (x, y)| (a.merge(x), b.merge(y)),
    )
}

/// Provability is closed under silent steps backwards: `s ⇒τ s'` and
/// `s' ⊢ A` give `s ⊢ A`.
pub fn check_tau_provability(spec: &EnumSpec, goal_size: usize, b: &Budgets) -> LemmaReport {
    let states = enumerate_states(spec);
    let goals = enumerate_formulas(&spec.atoms, goal_size);
    over("tau-provability", &states, |s, r| {
        for t in weak_tau(s, &b.sim.explore).states.iter().filter(|t| *t != s).take(8) {
            for g in &goals {
                if prove(&Sequent::new(t.clone(), g.clone()), &b.search).is_proved() {
                    let back = prove(&Sequent::new(s.clone(), g.clone()), &b.search);
                    r.expect_holds(back.decision(), || format!("({t}) ⊢ {g} but ({s}) ⊬ {g}"));
                }
            }
        }
    })
}

fn verdict_table(states: &[State], sim: &SimConfig) -> HashMap<(usize, usize), Decision> {
    let idx: Vec<(usize, usize)> = (0..states.len()).flat_map(|i| (0..states.len()).map(move |j| (i, j))).collect();
    let ds: Vec<Decision> = idx.par_iter().map(|&(i, j)| simulate(&states[i], &states[j], sim).verdict).collect();
    idx.into_iter().zip(ds).collect()
}

/// Reflexivity and transitivity of the simulation preorder.
pub fn check_preorder_laws(spec: &EnumSpec, b: &Budgets) -> LemmaReport {
    let states = enumerate_states(spec);
    let table = verdict_table(&states, &b.sim);
    let mut r = LemmaReport::new("preorder");
    for (i, s) in states.iter().enumerate() {
        r.expect_holds(table[&(i, i)], || format!("reflexivity {}", pair(s, s)));
    }
    let n = states.len();
    for i in 0..n {
        for j in 0..n {
            if table[&(i, j)] != Decision::Holds {
                continue;
            }
            for k in 0..n {
                if table[&(j, k)] == Decision::Holds {
                    r.expect_holds(table[&(i, k)], || {
                        format!("transitivity through ({}): {}", states[j], pair(&states[i], &states[k]))
                    });
                }
            }
        }
    }
    r
}

/// Composition with any context of size at most `context_size` preserves
/// decided `Holds` pairs.
pub fn check_precongruence(spec: &EnumSpec, context_size: usize, b: &Budgets) -> LemmaReport {
    let states = enumerate_states(spec);
    let table = verdict_table(&states, &b.sim);
    let contexts = enumerate_states(&EnumSpec {
        max_formula_size: context_size.max(1),
        max_state_size: Some(context_size),
        ..spec.clone()
    });
    let mut holds: Vec<(usize, usize)> = table.iter().filter(|(_, d)| **d == Decision::Holds).map(|(k, _)| *k).collect();
    holds.sort();
    over("precongruence", &holds, |&(i, j), r| {
        for c in contexts.iter().filter(|c| !c.is_empty()) {
            let (x, y) = (states[i].compose(c), states[j].compose(c));
            r.expect_holds(simulate(&x, &y, &b.sim).verdict, || format!("context ({c}): {}", pair(&x, &y)));
        }
    })
}

/// Identity `·;A ⊢ A` for every formula up to `max_size`, and cut between
/// every two proved sequents of the corpus.
pub fn check_admissibility(spec: &EnumSpec, max_size: usize, b: &Budgets) -> (LemmaReport, LemmaReport) {
    let a = admissibility_suite(&spec.atoms, max_size, &b.search);
    let identity = LemmaReport {
        name: "identity".into(),
        checked: a.identity_checked,
        confirmed: a.identity_proved,
        unknown: 0,
        violations: a.identity_failures.iter().chain(&a.invalid_derivations).cloned().collect(),
    };
    let cut = LemmaReport {
        name: "cut".into(),
        checked: a.cut_checked,
        confirmed: a.cut_proved,
        unknown: a.cut_unknown,
        violations: a.cut_refuted.clone(),
    };
    (identity, cut)
}

/// `prove(Γ;Δ ⊢ A)` against `(·;A) ≼l (Γ;Δ)` for every sequent of total size
/// at most `max_size`. Both answers are also probed against the definition
/// of the logical preorder: a context `Γ';Δ'` and goal `C` with
/// `Γ';Δ',A ⊢ C` provable and `Γ',Γ;Δ',Δ ⊢ C` refuted shows the preorder
/// fails.
pub fn check_harmony(spec: &EnumSpec, max_size: usize, b: &Budgets) -> LemmaReport {
    let corpus = sequent_corpus(spec, max_size);
    let probes: Vec<(State, Formula)> = {
        let ctx = enumerate_states(&EnumSpec { max_formula_size: 1, max_gamma: 1, max_delta: 1, max_state_size: Some(2), ..spec.clone() });
        let goals = enumerate_formulas(&spec.atoms, 2);
        ctx.iter().flat_map(|c| goals.iter().map(move |g| (c.clone(), g.clone()))).collect()
    };
    over("harmony", &corpus, |s, r| {
        r.checked += 1;
        let p = prove(s, &b.search);
        let l = logical_preorder(&State::linear([s.goal.clone()]), &s.context, &b.search);
        match (p.decision(), l.decision) {
            (Decision::Unknown, _) | (_, Decision::Unknown) => {
                r.unknown += 1;
                return;
            }
            (x, y) if x != y => {
                r.violations.push(format!("{s}: prover {x}, logical preorder {y}"));
                return;
            }
            _ => {}
        }
        let own = (State::empty(), s.goal.clone());
        let mut undecided = false;
        let separated = std::iter::once(&own).chain(&probes).find(|(c, goal)| {
            let small = prove(&Sequent::new(c.with_delta(s.goal.clone()), goal.clone()), &b.search);
            if !small.is_proved() {
                undecided |= small.decision() == Decision::Unknown;
                return false;
            }
            let big = prove(&Sequent::new(c.compose(&s.context), goal.clone()), &b.search);
            undecided |= big.decision() == Decision::Unknown;
            big.is_refuted()
        });
        match (&p, separated) {
            (ProofResult::Proved { .. }, Some((c, goal))) => {
                r.violations.push(format!("{s} is provable but context ({c}) with goal {goal} separates"))
            }
            (ProofResult::Refuted { .. }, None) if undecided => r.unknown += 1,
            (ProofResult::Refuted { .. }, None) => r.violations.push(format!("{s} is refuted but no context separates")),
            _ => r.confirmed += 1,
        }
    })
}

/// The silent transitions and the reduction relation reach the same states
/// at every depth up to `depth`.
pub fn check_tau_reduction(spec: &EnumSpec, depth: usize) -> LemmaReport {
    let states = enumerate_states(spec);
    over("tau-reduction", &states, |s, r| {
        let mut by_tau: BTreeSet<State> = BTreeSet::from([s.clone()]);
        let mut by_red = by_tau.clone();
        for d in 1..=depth {
            by_tau = by_tau.iter().flat_map(|x| tau_moves(x).into_iter().map(|(y, _)| y)).collect();
            by_red = by_red.iter().flat_map(reductions).collect();
            r.checked += 1;
            if by_tau == by_red {
                r.confirmed += 1;
            } else {
                r.violations.push(format!("({s}) at depth {d}: {} silent vs {} reduction successors", by_tau.len(), by_red.len()));
                return;
            }
        }
    })
}

/// The lemma battery over one enumeration.
pub fn metamorphic_suite(spec: &EnumSpec, b: &Budgets) -> SuiteReport {
    let (identity, cut) = check_admissibility(spec, 4, b);
    let (sound, complete) = check_provability_simulation(spec, 5, b);
    SuiteReport {
        lemmas: vec![
            check_weakening(spec, b),
            check_tau_down(spec, b),
            check_expansion(spec, b),
            sound,
            complete,
            check_tau_provability(spec, 2, b),
            check_preorder_laws(spec, b),
            check_precongruence(spec, 3, b),
            identity,
            cut,
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weakening_and_tau_examples() {
        let spec = EnumSpec::new(&["a"], 1, 0, 1);
        let b = Budgets::default();
        let w = check_weakening(&spec, &b);
        assert!(w.passed() && w.checked > 0, "{w:?}");
        let t = check_tau_down(&spec, &b);
        assert!(t.passed() && t.checked > 0, "{t:?}");
        let r = check_tau_reduction(&EnumSpec::new(&["a", "b"], 2, 1, 1), 3);
        assert!(r.passed() && r.checked > 0, "{r:?}");
    }
}
