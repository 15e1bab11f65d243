use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_derivation, prove, SearchBudget};
use crate::harness::{enumerate_formulas, enumerate_sequents, EnumSpec};
use crate::syntax::{Atom, Formula, Sequent, State};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub identity_checked: usize,
    pub identity_proved: usize,
    /// `·;A ⊢ A` instances not proved (refuted or unknown).
    pub identity_failures: Vec<String>,
    pub cut_checked: usize,
    pub cut_proved: usize,
    pub cut_unknown: usize,
    /// Cut conclusions the prover refuted although both premises were proved.
    pub cut_refuted: Vec<String>,
    /// Proofs that did not pass the derivation checker.
    pub invalid_derivations: Vec<String>,
}

impl AdmissibilityReport {
    pub fn is_clean(&self) -> bool {
        self.identity_failures.is_empty() && self.cut_refuted.is_empty() && self.invalid_derivations.is_empty()
    }
}

/// Identity over every formula up to `max_size`, and cut over every pair of
/// proved sequents up to `max_size` whose cut formula matches.
pub fn admissibility_suite(atoms: &[Atom], max_size: usize, b: &SearchBudget) -> AdmissibilityReport {
    let mut report = AdmissibilityReport::default();
    let run = |s: &Sequent, report: &mut AdmissibilityReport| {
        let r = prove(s, b);
        if let Some(d) = r.derivation() {
            if let Err(e) = check_derivation(d) {
                report.invalid_derivations.push(format!("{s}: {e}"));
            }
        }
        r
    };

    for a in enumerate_formulas(atoms, max_size) {
        let s = Sequent::new(State::linear([a.clone()]), a);
        report.identity_checked += 1;
        if run(&s, &mut report).is_proved() {
            report.identity_proved += 1;
        } else {
            report.identity_failures.push(s.to_string());
        }
    }

    let spec = EnumSpec { atoms: atoms.to_vec(), max_formula_size: max_size, max_gamma: 1, max_delta: 2, max_state_size: None, seed: 0 };
    let corpus = enumerate_sequents(&spec, max_size);
    let proved: Vec<&Sequent> = corpus.iter().filter(|s| run(s, &mut report).is_proved()).collect();
    let mut by_goal: BTreeMap<&Formula, Vec<&Sequent>> = BTreeMap::new();
    for s in &proved {
        by_goal.entry(&s.goal).or_default().push(s);
    }
    for right in &proved {
        for (i, cut) in right.context.distinct_delta() {
            let Some(lefts) = by_goal.get(cut) else { continue };
            let rest = right.context.replace_delta(i, []);
            for left in lefts {
                let joined = Sequent::new(left.context.compose(&rest), right.goal.clone());
                report.cut_checked += 1;
                let r = run(&joined, &mut report);
                if r.is_proved() {
                    report.cut_proved += 1;
                } else if r.is_refuted() {
                    report.cut_refuted.push(format!("{left}  +  {right}  =>  {joined}"));
                } else {
                    report.cut_unknown += 1;
                }
            }
        }
    }
    report
}
