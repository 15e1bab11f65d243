use std::fmt::{self, Display, Write};

use super::formula::Formula;
use super::state::{State, Sequent};

// Binding strength; a child printed below its required level gets parentheses.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Lolli(..) => 0,
        Formula::With(..) => 1,
        Formula::Tensor(..) => 2,
        Formula::Bang(_) => 3,
        Formula::Atom(_) | Formula::One | Formula::Top => 4,
    }
}

fn write_at(out: &mut fmt::Formatter<'_>, f: &Formula, min: u8) -> fmt::Result {
    if level(f) < min {
        out.write_char('(')?;
        write_formula(out, f)?;
        out.write_char(')')
    } else {
        write_formula(out, f)
    }
}

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    match f {
        Formula::Atom(a) => out.write_str(a.name()),
        Formula::One => out.write_char('1'),
        Formula::Top => out.write_str("top"),
        Formula::Tensor(l, r) => {
            write_at(out, l, 3)?;
            out.write_str(" * ")?;
            write_at(out, r, 2)
        }
        Formula::With(l, r) => {
            write_at(out, l, 2)?;
            out.write_str(" & ")?;
            write_at(out, r, 1)
        }
        Formula::Lolli(a, b) => {
            write!(out, "{} -o ", a.name())?;
            write_at(out, b, 0)
        }
        Formula::Bang(a) => {
            out.write_char('!')?;
            write_at(out, a, 3)
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

fn write_context(out: &mut fmt::Formatter<'_>, items: &[Formula]) -> fmt::Result {
    if items.is_empty() {
        return out.write_char('.');
    }
    for (i, f) in items.iter().enumerate() {
        if i > 0 {
            out.write_str(", ")?;
        }
        write_formula(out, f)?;
    }
    Ok(())
}

impl Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_context(f, self.gamma())?;
        f.write_str(" ; ")?;
        write_context(f, self.delta())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.context, self.goal)
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

pub fn render<T: Display + ?Sized>(x: &T) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn minimal_parentheses() {
        let a = Formula::atom("a");
        let b = Formula::atom("b");
        let c = Formula::atom("c");
        assert_eq!(render(&a), "a");
        assert_eq!(render(&Formula::tensor(a.clone(), Formula::tensor(b.clone(), c.clone()))), "a * b * c");
        assert_eq!(render(&Formula::tensor(Formula::tensor(a.clone(), b.clone()), c.clone())), "(a * b) * c");
        assert_eq!(render(&Formula::with(Formula::tensor(a.clone(), b.clone()), c.clone())), "a * b & c");
        assert_eq!(render(&Formula::tensor(Formula::with(a.clone(), b.clone()), c.clone())), "(a & b) * c");
        assert_eq!(render(&Formula::bang(Formula::tensor(a.clone(), b.clone()))), "!(a * b)");
        assert_eq!(render(&Formula::bang(Formula::bang(a.clone()))), "!!a");
        for text in ["a -o b -o c", "(a -o b) * c", "a -o b & c", "!(a -o top) & 1"] {
            assert_eq!(render(&parse_formula(text).unwrap()), text);
        }
    }

    #[test]
    fn states() {
        let s = State::new([Formula::atom("a")], [Formula::atom("b"), Formula::atom("b")]);
        assert_eq!(render(&s), "a ; b, b");
        assert_eq!(render(&State::empty()), ". ; .");
    }
}
