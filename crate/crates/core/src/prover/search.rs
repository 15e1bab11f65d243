use std::collections::{BTreeSet, HashMap};

use super::{Derivation, ProofResult, Rule, SearchBudget, SearchStats};
use crate::semantics::producible_atoms;
use crate::syntax::{Atom, Formula, Sequent, State};

/// Budgeted backward search.
///
/// Invertible rules are applied eagerly (⊤R, ⊸R, &R on the right; ⊗L, 1L,
/// !L on the left). The remaining choices are tried in a fixed order: axioms,
/// ⊗R splits, &L, ⊸L, then clone. Clone is only used fused with a rule on the
/// copied formula, and is capped per branch. A sequent that repeats on the
/// current branch is pruned, and so is one whose goal needs an atom that no
/// hypothesis can ever supply.
pub fn prove(goal: &Sequent, budget: &SearchBudget) -> ProofResult {
    let mut search = Search { budget: *budget, stats: SearchStats::default(), memo: HashMap::new(), stack: HashMap::new(), depth: 0 };
    match search.go(goal, 0) {
        Outcome::Proved(derivation) => ProofResult::Proved { derivation, stats: search.stats },
        Outcome::Failed { truncated: false, .. } => ProofResult::Refuted { stats: search.stats },
        Outcome::Failed { truncated: true, .. } => ProofResult::Unknown { stats: search.stats },
    }
}

enum Outcome {
    Proved(Derivation),
    /// `loop_low` is the shallowest ancestor the failure depended on through
    /// the loop check (`usize::MAX` when none).
    Failed { truncated: bool, loop_low: usize },
}

enum Memo {
    Proved(Derivation),
    Refuted,
}

struct Search {
    budget: SearchBudget,
    stats: SearchStats,
    memo: HashMap<Sequent, Memo>,
    /// Sequents on the current branch, with their depth.
    stack: HashMap<Sequent, usize>,
    depth: usize,
}

/// One way of closing a sequent: a rule and premises to prove in order.
/// `wrap` adds the outer fused-clone node.
struct Alternative {
    rule: Rule,
    conclusion: Sequent,
    premises: Vec<Sequent>,
    clones: usize,
    wrap: Option<(Rule, Sequent)>,
}

const FAILED_CLEAN: Outcome = Outcome::Failed { truncated: false, loop_low: usize::MAX };

impl Search {
    fn go(&mut self, seq: &Sequent, clones: usize) -> Outcome {
        match self.memo.get(seq) {
            Some(Memo::Proved(d)) => return Outcome::Proved(d.clone()),
            Some(Memo::Refuted) => return FAILED_CLEAN,
            None => {}
        }
        if let Some(&d) = self.stack.get(seq) {
            return Outcome::Failed { truncated: false, loop_low: d };
        }
        if self.depth >= self.budget.max_depth {
            self.stats.depth_cutoffs += 1;
            return Outcome::Failed { truncated: true, loop_low: usize::MAX };
        }
        if self.stats.nodes >= self.budget.max_nodes {
            self.stats.node_limit_hit = true;
            return Outcome::Failed { truncated: true, loop_low: usize::MAX };
        }
        self.stats.nodes += 1;
        let depth = self.depth;
        self.stack.insert(seq.clone(), depth);
        self.depth += 1;
        let result = self.expand(seq, clones);
        self.depth -= 1;
        self.stack.remove(seq);
        match result {
            Outcome::Proved(d) => {
                self.memo.insert(seq.clone(), Memo::Proved(d.clone()));
                Outcome::Proved(d)
            }
            Outcome::Failed { truncated, loop_low } => {
                let loop_low = if loop_low >= depth { usize::MAX } else { loop_low };
                if !truncated && loop_low == usize::MAX {
                    self.memo.insert(seq.clone(), Memo::Refuted);
                }
                Outcome::Failed { truncated, loop_low }
            }
        }
    }

    fn expand(&mut self, seq: &Sequent, clones: usize) -> Outcome {
        if starved(&seq.goal, &mut producible_atoms(&seq.context)) {
            return FAILED_CLEAN;
        }
        if let Some(alt) = invertible_step(seq, clones) {
            return self.try_alternative(alt);
        }
        let mut truncated = false;
        let mut loop_low = usize::MAX;
        for alt in self.choices(seq, clones, &mut truncated) {
            match self.try_alternative(alt) {
                Outcome::Proved(d) => return Outcome::Proved(d),
                Outcome::Failed { truncated: t, loop_low: l } => {
                    truncated |= t;
                    loop_low = loop_low.min(l);
                }
            }
        }
        Outcome::Failed { truncated, loop_low }
    }

    fn try_alternative(&mut self, alt: Alternative) -> Outcome {
        let mut premises = Vec::with_capacity(alt.premises.len());
        for p in &alt.premises {
            match self.go(p, alt.clones) {
                Outcome::Proved(d) => premises.push(d),
                failed => return failed,
            }
        }
        let inner = Derivation::node(alt.rule, alt.conclusion, premises);
        Outcome::Proved(match alt.wrap {
            Some((rule, conclusion)) => Derivation::node(rule, conclusion, vec![inner]),
            None => inner,
        })
    }

    fn choices(&mut self, seq: &Sequent, clones: usize, truncated: &mut bool) -> Vec<Alternative> {
        let gamma = seq.gamma();
        let delta = seq.delta();
        let goal = &seq.goal;
        let mut out = Vec::new();
        let simple = |rule, premises: Vec<Sequent>| Alternative { rule, conclusion: seq.clone(), premises, clones, wrap: None };
        let at = |d: Vec<Formula>, c: Formula| Sequent::new(State::new(gamma.iter().cloned(), d), c);

        match goal {
            Formula::Atom(_) if delta.len() == 1 && delta[0] == *goal => out.push(simple(Rule::Init, vec![])),
            Formula::One if delta.is_empty() => out.push(simple(Rule::OneR, vec![])),
            Formula::Bang(inner) if delta.is_empty() => out.push(simple(Rule::BangR, vec![at(vec![], (**inner).clone())])),
            Formula::Tensor(l, r) => {
                for (d1, d2) in splits(delta) {
                    out.push(simple(Rule::TensorR, vec![at(d1, (**l).clone()), at(d2, (**r).clone())]));
                }
            }
            _ => {}
        }

        for (i, f) in seq.context.distinct_delta() {
            match f {
                Formula::With(l, r) => {
                    for (rule, branch) in [(Rule::WithL1, l), (Rule::WithL2, r)] {
                        let d = seq.context.replace_delta(i, [(**branch).clone()]);
                        out.push(simple(rule, vec![Sequent::new(d, goal.clone())]));
                    }
                }
                Formula::Lolli(a, body) => {
                    let rest = seq.context.replace_delta(i, []);
                    for (d1, mut d2) in splits(rest.delta()) {
                        d2.push((**body).clone());
                        out.push(simple(Rule::LolliL, vec![at(d1, Formula::Atom(a.clone())), at(d2, goal.clone())]));
                    }
                }
                _ => {}
            }
        }

        // Fused clone: copy a Γ formula and immediately act on the copy.
        for g in gamma {
            let useful = match g {
                Formula::One | Formula::Top => false,
                Formula::Atom(_) => delta.is_empty() && goal == g,
                Formula::Bang(inner) => !seq.context.gamma_contains(inner),
                _ => true,
            };
            if !useful {
                continue;
            }
            if clones >= self.budget.max_clones_per_branch {
                self.stats.clone_cutoffs += 1;
                *truncated = true;
                continue;
            }
            let copied = Sequent::new(seq.context.with_delta(g.clone()), goal.clone());
            let wrap = Some((Rule::Clone, seq.clone()));
            let fused = |rule, premises| Alternative { rule, conclusion: copied.clone(), premises, clones: clones + 1, wrap: wrap.clone() };
            match g {
                Formula::Atom(_) => out.push(fused(Rule::Init, vec![])),
                Formula::With(l, r) => {
                    for (rule, branch) in [(Rule::WithL1, l), (Rule::WithL2, r)] {
                        let d = seq.context.with_delta((**branch).clone());
                        out.push(fused(rule, vec![Sequent::new(d, goal.clone())]));
                    }
                }
                Formula::Lolli(a, body) => {
                    for (d1, mut d2) in splits(delta) {
                        d2.push((**body).clone());
                        out.push(fused(Rule::LolliL, vec![at(d1, Formula::Atom(a.clone())), at(d2, goal.clone())]));
                    }
                }
                // ⊗ and ! copies are decomposed by the invertible phase of the premise.
                _ => out.push(Alternative {
                    rule: Rule::Clone,
                    conclusion: seq.clone(),
                    premises: vec![copied.clone()],
                    clones: clones + 1,
                    wrap: None,
                }),
            }
        }
        out
    }
}

/// Whether every proof of the goal must end in an axiom on an atom missing
/// from `supply`. Left rules only expose subformulas outside receive
/// antecedents, and clones copy hypotheses, so `supply` only grows through
/// the goal's own antecedents.
fn starved(goal: &Formula, supply: &mut BTreeSet<Atom>) -> bool {
    match goal {
        Formula::Atom(a) => !supply.contains(a),
        Formula::One | Formula::Top => false,
        Formula::Tensor(l, r) | Formula::With(l, r) => starved(l, supply) || starved(r, supply),
        Formula::Bang(inner) => starved(inner, supply),
        Formula::Lolli(a, body) => {
            if supply.contains(a) {
                starved(body, supply)
            } else {
                supply.insert(a.clone());
                let out = starved(body, supply);
                supply.remove(a);
                out
            }
        }
    }
}

fn invertible_step(seq: &Sequent, clones: usize) -> Option<Alternative> {
    let single = |rule, premises| Some(Alternative { rule, conclusion: seq.clone(), premises, clones, wrap: None });
    match &seq.goal {
        Formula::Top => return single(Rule::TopR, vec![]),
        Formula::Lolli(a, body) => {
            let d = seq.context.with_delta(Formula::Atom(a.clone()));
            return single(Rule::LolliR, vec![Sequent::new(d, (**body).clone())]);
        }
        Formula::With(l, r) => {
            return single(
                Rule::WithR,
                vec![Sequent::new(seq.context.clone(), (**l).clone()), Sequent::new(seq.context.clone(), (**r).clone())],
            );
        }
        _ => {}
    }
    for (i, f) in seq.context.distinct_delta() {
        let (rule, next) = match f {
            Formula::Tensor(l, r) => (Rule::TensorL, seq.context.replace_delta(i, [(**l).clone(), (**r).clone()])),
            Formula::One => (Rule::OneL, seq.context.replace_delta(i, [])),
            Formula::Bang(inner) => (Rule::BangL, seq.context.replace_delta(i, []).with_gamma((**inner).clone())),
            _ => continue,
        };
        return single(rule, vec![Sequent::new(next, seq.goal.clone())]);
    }
    None
}

/// Every way to split a sorted multiset into two, equal elements treated as
/// interchangeable.
pub(crate) fn splits(items: &[Formula]) -> Vec<(Vec<Formula>, Vec<Formula>)> {
    let mut groups: Vec<(&Formula, usize)> = Vec::new();
    for f in items {
        match groups.last_mut() {
            Some((g, n)) if *g == f => *n += 1,
            _ => groups.push((f, 1)),
        }
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; groups.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for ((f, n), k) in groups.iter().zip(&counts) {
            left.extend(std::iter::repeat_n((*f).clone(), *k));
            right.extend(std::iter::repeat_n((*f).clone(), n - k));
        }
        out.push((left, right));
        let mut advanced = false;
        for (c, (_, n)) in counts.iter_mut().zip(&groups) {
            if *c < *n {
                *c += 1;
                advanced = true;
                break;
            }
            *c = 0;
        }
        if !advanced {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::check_derivation;
    use crate::syntax::parse_sequent;

    fn run(text: &str) -> ProofResult {
        let r = prove(&parse_sequent(text).unwrap(), &SearchBudget::default());
        if let Some(d) = r.derivation() {
            check_derivation(d).unwrap_or_else(|e| panic!("{text}: invalid derivation {e}\n{}", d.pretty()));
        }
        r
    }

    #[test]
    fn small_examples() {
        assert!(run(". ; a |- a").is_proved());
        assert!(run("b, c ; a |- a").is_proved());
        assert!(run(". ; . |- a -o a").is_proved());
        assert!(run(". ; a * b |- b * a").is_proved());
        assert!(run(". ; a |- b").is_refuted());
        assert!(run(". ; . |- !a").is_refuted());
        assert!(run(". ; a, b |- a").is_refuted());
        assert!(run(". ; a, b |- top").is_proved());
        assert!(run(". ; a & b |- a").is_proved());
        assert!(run(". ; a |- a & b").is_refuted());
        assert!(run(". ; !a |- a").is_proved());
        assert!(run(". ; a |- !a").is_refuted());
        assert!(run("a ; . |- a * a").is_proved());
        assert!(run(". ; a, a -o b |- b").is_proved());
        assert!(run("a -o b ; a, a |- b * b").is_proved());
        assert!(run(". ; a, top |- a * top").is_proved());
    }

    #[test]
    fn deterministic() {
        let s = parse_sequent("a -o b, a ; a & b, !c |- b * (c & top)").unwrap();
        let b = SearchBudget::default();
        assert_eq!(prove(&s, &b), prove(&s, &b));
    }

    #[test]
    fn split_counts() {
        let f = |t: &str| crate::syntax::parse_formula(t).unwrap();
        assert_eq!(splits(&[]).len(), 1);
        assert_eq!(splits(&[f("a"), f("b")]).len(), 4);
        assert_eq!(splits(&[f("a"), f("a"), f("b")]).len(), 6);
    }
}
