use std::collections::{BTreeSet, HashMap};

use super::{simulate, ContextWitness, SimConfig, Verdict};
use crate::harness::{enumerate_states, EnumSpec};
use crate::semantics::{producible_atoms, strong_barbs, weak_tau, Closure};
use crate::syntax::{Atom, State};
use crate::Decision;

/// All states of size at most `k` over the atoms of `s1` and `s2` plus one
/// atom occurring in neither.
pub fn context_battery(s1: &State, s2: &State, k: usize) -> Vec<State> {
    let mut atoms = Vec::new();
    for f in s1.gamma().iter().chain(s1.delta()).chain(s2.gamma()).chain(s2.delta()) {
        f.atoms(&mut atoms);
    }
    let mut atoms: Vec<Atom> = atoms.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let fresh = ('a'..='z')
        .map(String::from)
        .chain((0..).map(|i| format!("x{i}")))
        .map(|n| Atom::new(&n).expect("valid name"))
        .find(|a| !atoms.contains(a))
        .expect("some name is unused");
    atoms.push(fresh);
    let spec = EnumSpec {
        atoms,
        max_formula_size: k.saturating_sub(1).max(1),
        max_gamma: k,
        max_delta: k,
        max_state_size: Some(k),
        seed: 0,
    };
    enumerate_states(&spec)
}

struct Probe<'a> {
    cfg: &'a SimConfig,
    cache: HashMap<State, Closure>,
}

impl Probe<'_> {
    fn reach(&mut self, s: &State) -> Closure {
        self.cache.entry(s.clone()).or_insert_with(|| weak_tau(s, &self.cfg.explore)).clone()
    }

    /// Could `z` stand in for `y` as far as barbs and emptiness tell?
    /// Truncation counts as "maybe".
    fn may_cover(&mut self, y: &State, z: &State) -> bool {
        let cl = self.reach(z);
        if cl.truncated {
            return true;
        }
        let barbs: BTreeSet<Atom> = cl.states.iter().flat_map(strong_barbs).collect();
        strong_barbs(y).is_subset(&barbs) && (!y.delta().is_empty() || cl.states.iter().any(|s| s.delta().is_empty()))
    }

    fn falsify(&mut self, x1: &State, x2: &State) -> Option<String> {
        let reach1 = self.reach(x1);
        let reach2 = self.reach(x2);
        let barbs2: BTreeSet<Atom> = reach2.states.iter().flat_map(strong_barbs).collect();
        let producible = producible_atoms(x2);
        for y1 in &reach1.states {
            for a in strong_barbs(y1) {
                if !barbs2.contains(&a) && (!reach2.truncated || !producible.contains(&a)) {
                    return Some(format!("({x1}) reaches ({y1}) with barb {a}, which ({x2}) never shows"));
                }
            }
            if reach2.truncated {
                continue;
            }
            if y1.delta().is_empty() && !reach2.states.iter().any(|s| s.delta().is_empty()) {
                return Some(format!("({x1}) reaches ({y1}) with nothing left, which ({x2}) never does"));
            }
            for (l, r) in y1.partitions() {
                let answered = reach2
                    .states
                    .iter()
                    .flat_map(|z| z.partitions())
                    .any(|(zl, zr)| self.may_cover(&l, &zl) && self.may_cover(&r, &zr));
                if !answered {
                    return Some(format!(
                        "({x1}) reaches ({y1}), which splits into ({l}) and ({r}); no state ({x2}) reaches splits to match"
                    ));
                }
            }
        }
        None
    }
}

/// Looks for a direct violation of `s1 ≼c s2` inside one of `contexts`:
/// a barb, an emptiness or a split of some reduct of `s1 ⊕ c` that no
/// reduct of `s2 ⊕ c` can answer. Never returns `Holds`.
pub fn contextual_falsify(s1: &State, s2: &State, contexts: &[State], cfg: &SimConfig) -> Verdict {
    let mut probe = Probe { cfg, cache: HashMap::new() };
    for c in contexts {
        let x1 = s1.compose(c);
        let x2 = s2.compose(c);
        if let Some(reason) = probe.falsify(&x1, &x2) {
            return Verdict {
                verdict: Decision::Fails,
                context: Some(ContextWitness { context: c.clone(), reason }),
                reason: None,
                ..Verdict::unknown(cfg, "", false)
            };
        }
    }
    let truncated = probe.cache.values().any(|c| c.truncated);
    Verdict::unknown(cfg, format!("no counterexample among {} contexts", contexts.len()), truncated)
}

/// `s1 ≼c s2`, decided through the simulation preorder. A failing answer is
/// backed by a contextual counterexample from contexts of size at most 3
/// when one is found.
pub fn contextual_preorder(s1: &State, s2: &State, cfg: &SimConfig) -> Verdict {
    let mut v = simulate(s1, s2, cfg);
    if v.verdict == Decision::Fails {
        let found = contextual_falsify(s1, s2, &context_battery(s1, s2, 3), cfg);
        v.context = found.context;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_state;

    fn st(t: &str) -> State {
        parse_state(t).unwrap()
    }

    #[test]
    fn falsifier_examples() {
        let cfg = SimConfig::default();
        let v = contextual_falsify(&st(". ; a"), &st(". ; b"), &[State::empty()], &cfg);
        assert_eq!(v.verdict, Decision::Fails);
        let v = contextual_falsify(&st(". ; a -o b"), &st(". ; top"), &[st(". ; a")], &cfg);
        assert_eq!(v.verdict, Decision::Fails);
        assert!(v.context.unwrap().reason.contains("barb b"));
        for s in [". ; a & b", "a ; a -o b", ". ; !a, 1"] {
            let s = st(s);
            let v = contextual_falsify(&s, &s, &context_battery(&s, &s, 3), &cfg);
            assert_eq!(v.verdict, Decision::Unknown);
        }
    }

    #[test]
    fn battery_has_a_fresh_atom() {
        let battery = context_battery(&st(". ; a"), &st(". ; b"), 3);
        assert!(battery.contains(&st(". ; c")));
        assert!(battery.contains(&State::empty()));
        assert!(battery.iter().all(|s| s.size() <= 3));
    }

    #[test]
    fn preorder_examples() {
        let cfg = SimConfig::default();
        assert_eq!(contextual_preorder(&st(". ; a"), &st(". ; !a"), &cfg).verdict, Decision::Holds);
        let v = contextual_preorder(&st(". ; !a"), &st(". ; a"), &cfg);
        assert_eq!(v.verdict, Decision::Fails);
        assert!(v.context.is_some());
        assert_eq!(contextual_preorder(&st(". ; a"), &st("b ; a"), &cfg).verdict, Decision::Holds);
    }
}
