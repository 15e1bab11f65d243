use thiserror::Error;

use super::{Derivation, Rule};
use crate::syntax::{Formula, Sequent, State};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {}: {rule} does not apply: {reason}", path_string(.path))]
pub struct CheckError {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: Rule,
    pub reason: String,
}

fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Checks every node against its rule schema, independently of the search.
pub fn check_derivation(d: &Derivation) -> Result<(), CheckError> {
    let mut path = Vec::new();
    walk(d, &mut path)
}

fn walk(d: &Derivation, path: &mut Vec<usize>) -> Result<(), CheckError> {
    check_node(d).map_err(|reason| CheckError { path: path.clone(), rule: d.rule, reason })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        walk(p, path)?;
        path.pop();
    }
    Ok(())
}

fn arity(d: &Derivation, n: usize) -> Result<(), String> {
    if d.premises.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} premises, found {}", d.premises.len()))
    }
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn same_gamma(a: &Sequent, b: &Sequent) -> Result<(), String> {
    ensure(a.gamma() == b.gamma(), "unrestricted context changed")
}

fn multiset(items: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut v: Vec<Formula> = items.into_iter().collect();
    v.sort();
    v
}

/// Δ with one occurrence of each formula in `remove` taken out.
fn minus(delta: &[Formula], remove: &[Formula]) -> Option<Vec<Formula>> {
    let mut rest = delta.to_vec();
    for f in remove {
        let i = rest.iter().position(|x| x == f)?;
        rest.remove(i);
    }
    Some(rest)
}

fn plus(delta: &[Formula], add: &[Formula]) -> Vec<Formula> {
    multiset(delta.iter().chain(add).cloned())
}

/// Is there some `f` in Δ satisfying `pred` such that the premise's Δ equals
/// Δ - f + replacement(f)?
fn some_principal(
    concl: &Sequent,
    premise_delta: &[Formula],
    replace: impl Fn(&Formula) -> Option<Vec<Formula>>,
) -> bool {
    concl.delta().iter().any(|f| match replace(f) {
        Some(add) => minus(concl.delta(), std::slice::from_ref(f))
            .map(|rest| plus(&rest, &add) == premise_delta)
            .unwrap_or(false),
        None => false,
    })
}

fn check_node(d: &Derivation) -> Result<(), String> {
    let c = &d.conclusion;
    let ps: Vec<&Sequent> = d.premises.iter().map(|p| &p.conclusion).collect();
    match d.rule {
        Rule::Init => {
            arity(d, 0)?;
            ensure(matches!(c.goal, Formula::Atom(_)), "goal is not an atom")?;
            ensure(c.delta() == [c.goal.clone()], "linear context must be exactly the goal atom")
        }
        Rule::Clone => {
            arity(d, 1)?;
            same_gamma(c, ps[0])?;
            ensure(ps[0].goal == c.goal, "goal changed")?;
            ensure(
                c.gamma().iter().any(|g| plus(c.delta(), std::slice::from_ref(g)) == ps[0].delta()),
                "premise is not the conclusion plus a copy of an unrestricted formula",
            )
        }
        Rule::TensorR => {
            arity(d, 2)?;
            let Formula::Tensor(a, b) = &c.goal else { return Err("goal is not a tensor".into()) };
            same_gamma(c, ps[0])?;
            same_gamma(c, ps[1])?;
            ensure(ps[0].goal == **a && ps[1].goal == **b, "premise goals are not the tensor components")?;
            ensure(plus(ps[0].delta(), ps[1].delta()) == c.delta(), "premises do not split the linear context")
        }
        Rule::TensorL => {
            arity(d, 1)?;
            same_gamma(c, ps[0])?;
            ensure(ps[0].goal == c.goal, "goal changed")?;
            ensure(
                some_principal(c, ps[0].delta(), |f| match f {
                    Formula::Tensor(a, b) => Some(vec![(**a).clone(), (**b).clone()]),
                    _ => None,
                }),
                "no tensor in the linear context decomposes into the premise",
            )
        }
        Rule::OneR => {
            arity(d, 0)?;
            ensure(c.goal == Formula::One, "goal is not 1")?;
            ensure(c.delta().is_empty(), "linear context is not empty")
        }
        Rule::OneL => {
            arity(d, 1)?;
            same_gamma(c, ps[0])?;
            ensure(ps[0].goal == c.goal, "goal changed")?;
            ensure(
                minus(c.delta(), &[Formula::One]).as_deref() == Some(ps[0].delta()),
                "premise is not the conclusion with one 1 removed",
            )
        }
        Rule::WithR => {
            arity(d, 2)?;
            let Formula::With(a, b) = &c.goal else { return Err("goal is not a with".into()) };
            ensure(ps[0].context == c.context && ps[1].context == c.context, "premise contexts differ")?;
            ensure(ps[0].goal == **a && ps[1].goal == **b, "premise goals are not the components")
        }
        Rule::WithL1 | Rule::WithL2 => {
            arity(d, 1)?;
            same_gamma(c, ps[0])?;
            ensure(ps[0].goal == c.goal, "goal changed")?;
            let first = d.rule == Rule::WithL1;
            ensure(
                some_principal(c, ps[0].delta(), |f| match f {
                    Formula::With(a, b) => Some(vec![if first { (**a).clone() } else { (**b).clone() }]),
                    _ => None,
                }),
                "no with in the linear context projects onto the premise",
            )
        }
        Rule::TopR => {
            arity(d, 0)?;
            ensure(c.goal == Formula::Top, "goal is not top")
        }
        Rule::LolliR => {
            arity(d, 1)?;
            let Formula::Lolli(a, b) = &c.goal else { return Err("goal is not a lolli".into()) };
            same_gamma(c, ps[0])?;
            ensure(ps[0].goal == **b, "premise goal is not the lolli body")?;
            ensure(plus(c.delta(), &[Formula::Atom(a.clone())]) == ps[0].delta(), "premise must add the antecedent")
        }
        Rule::LolliL => {
            arity(d, 2)?;
            same_gamma(c, ps[0])?;
            same_gamma(c, ps[1])?;
            ensure(ps[1].goal == c.goal, "right premise goal changed")?;
            let ok = c.delta().iter().any(|f| {
                let Formula::Lolli(a, body) = f else { return false };
                if ps[0].goal != Formula::Atom(a.clone()) {
                    return false;
                }
                let Some(rest) = minus(c.delta(), std::slice::from_ref(f)) else { return false };
                let Some(d2) = minus(ps[1].delta(), &[(**body).clone()]) else { return false };
                plus(ps[0].delta(), &d2) == rest
            });
            ensure(ok, "no receiver in the linear context matches the premises")
        }
        Rule::BangR => {
            arity(d, 1)?;
            let Formula::Bang(a) = &c.goal else { return Err("goal is not a bang".into()) };
            ensure(c.delta().is_empty(), "linear context is not empty")?;
            ensure(ps[0].context == c.context && ps[0].goal == **a, "premise must be Γ;· ⊢ A")
        }
        Rule::BangL => {
            arity(d, 1)?;
            ensure(ps[0].goal == c.goal, "goal changed")?;
            let ok = c.delta().iter().any(|f| {
                let Formula::Bang(a) = f else { return false };
                let Some(rest) = minus(c.delta(), std::slice::from_ref(f)) else { return false };
                let expected = State::new(c.gamma().iter().cloned().chain([(**a).clone()]), rest);
                ps[0].context == expected
            });
            ensure(ok, "no banged formula moves into the unrestricted context")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    fn seq(t: &str) -> Sequent {
        parse_sequent(t).unwrap()
    }

    #[test]
    fn init_requires_exact_linear_context() {
        assert!(check_derivation(&Derivation::leaf(Rule::Init, seq("a ; a |- a"))).is_ok());
        let err = check_derivation(&Derivation::leaf(Rule::Init, seq(". ; a, b |- a"))).unwrap_err();
        assert!(err.path.is_empty());
        assert!(check_derivation(&Derivation::leaf(Rule::Init, seq("a ; . |- a"))).is_err());
    }

    #[test]
    fn tensor_right_split() {
        let d = Derivation::node(
            Rule::TensorR,
            seq(". ; a, b |- a * b"),
            vec![Derivation::leaf(Rule::Init, seq(". ; a |- a")), Derivation::leaf(Rule::Init, seq(". ; b |- b"))],
        );
        assert!(check_derivation(&d).is_ok());
        let bad = Derivation::node(
            Rule::TensorR,
            seq(". ; a, b |- a * b"),
            vec![Derivation::leaf(Rule::Init, seq(". ; a |- a")), Derivation::leaf(Rule::Init, seq(". ; a |- b"))],
        );
        let err = check_derivation(&bad).unwrap_err();
        assert!(err.path.is_empty(), "{err}");
    }

    #[test]
    fn one_left_must_drop_the_unit() {
        let bad = Derivation::node(Rule::OneL, seq(". ; 1 |- 1"), vec![Derivation::leaf(Rule::TopR, seq(". ; 1 |- top"))]);
        assert!(check_derivation(&bad).is_err());
        let bad = Derivation::node(Rule::OneL, seq(". ; 1, a |- a"), vec![Derivation::leaf(Rule::Init, seq(". ; 1, a |- a"))]);
        assert!(check_derivation(&bad).is_err());
        let good = Derivation::node(Rule::OneL, seq(". ; 1, a |- a"), vec![Derivation::leaf(Rule::Init, seq(". ; a |- a"))]);
        assert!(check_derivation(&good).is_ok());
    }

    #[test]
    fn errors_point_into_the_tree() {
        let d = Derivation::node(
            Rule::LolliL,
            seq(". ; a, a -o b |- b"),
            vec![Derivation::leaf(Rule::Init, seq(". ; a |- a")), Derivation::leaf(Rule::Init, seq(". ; b, b |- b"))],
        );
        // the node itself is a fine ⊸L shape only if Δ2 = {}; here it is not
        assert!(check_derivation(&d).is_err());
        let d = Derivation::node(
            Rule::LolliL,
            seq(". ; a, a -o b |- b"),
            vec![Derivation::leaf(Rule::Init, seq(". ; a |- a")), Derivation::leaf(Rule::OneR, seq(". ; b |- b"))],
        );
        assert_eq!(check_derivation(&d).unwrap_err().path, vec![1]);
    }
}
