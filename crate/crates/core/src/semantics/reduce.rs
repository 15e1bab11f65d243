use std::collections::BTreeSet;

use crate::syntax::{Formula, State};

/// All one-step reducts `s ⇝ s'`, deduplicated up to congruence.
pub fn reductions(s: &State) -> BTreeSet<State> {
    let mut out = BTreeSet::new();
    for (i, f) in s.distinct_delta() {
        match f {
            Formula::Tensor(l, r) => {
                out.insert(s.replace_delta(i, [(**l).clone(), (**r).clone()]));
            }
            Formula::One => {
                out.insert(s.replace_delta(i, []));
            }
            Formula::With(l, r) => {
                out.insert(s.replace_delta(i, [(**l).clone()]));
                out.insert(s.replace_delta(i, [(**r).clone()]));
            }
            Formula::Lolli(a, body) => {
                // the message comes from the rest of Δ, never from the body
                let rest = s.replace_delta(i, []);
                if let Some(next) = rest.without_delta(&Formula::Atom(a.clone())) {
                    out.insert(next.with_delta((**body).clone()));
                }
            }
            Formula::Bang(inner) => {
                out.insert(s.replace_delta(i, []).with_gamma((**inner).clone()));
            }
            // atoms only synchronize; top is stuck
            Formula::Atom(_) | Formula::Top => {}
        }
    }
    for g in s.gamma() {
        out.insert(s.with_delta(g.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_state;

    fn set(items: &[&str]) -> BTreeSet<State> {
        items.iter().map(|t| parse_state(t).unwrap()).collect()
    }

    #[test]
    fn figure_rules() {
        assert_eq!(reductions(&parse_state(". ; a, a -o b").unwrap()), set(&[". ; b"]));
        assert!(reductions(&parse_state(". ; top").unwrap()).is_empty());
        assert_eq!(
            reductions(&parse_state(". ; a & b, 1").unwrap()),
            set(&[". ; a, 1", ". ; b, 1", ". ; a & b"])
        );
        assert_eq!(reductions(&parse_state(". ; !a").unwrap()), set(&["a ; ."]));
        assert_eq!(reductions(&parse_state("a ; .").unwrap()), set(&["a ; a"]));
        assert_eq!(reductions(&parse_state(". ; a * b").unwrap()), set(&[". ; a, b"]));
        // a receiver without its message is stuck
        assert!(reductions(&parse_state(". ; a -o b, b").unwrap()).is_empty());
        assert!(reductions(&parse_state(". ; a -o a").unwrap()).is_empty());
        assert_eq!(reductions(&parse_state(". ; a, a -o a").unwrap()), set(&[". ; a"]));
        // duplicate occurrences give one successor
        assert_eq!(reductions(&parse_state(". ; 1, 1").unwrap()), set(&[". ; 1"]));
    }
}
