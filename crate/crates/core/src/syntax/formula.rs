use std::fmt;
use std::sync::Arc;

/// An atomic proposition, read as a message name.
///
/// Atoms compare by name; the order is plain lexicographic order on the
/// name, which keeps canonical forms stable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Creates an atom, checking the identifier shape (lowercase first letter,
    /// then letters, digits, `_` or `'`). Returns `None` for reserved words.
    pub fn new(name: &str) -> Option<Atom> {
        if is_atom_name(name) {
            Some(Atom(Arc::from(name)))
        } else {
            None
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    name != "top" && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Formulas of the fragment `a | 1 | A*B | top | A&B | a -o B | !A`.
///
/// The derived `Ord` compares constructor tags first (in declaration order),
/// then children left to right. Canonical contexts are sorted by it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    One,
    Tensor(Arc<Formula>, Arc<Formula>),
    Top,
    With(Arc<Formula>, Arc<Formula>),
    /// Receive: the antecedent is always atomic.
    Lolli(Atom, Arc<Formula>),
    Bang(Arc<Formula>),
}

impl Formula {
    /// Panics if `name` is not a valid atom name; use [`Atom::new`] for
    /// untrusted input.
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).unwrap_or_else(|| panic!("invalid atom name {name:?}")))
    }

    pub fn tensor(l: Formula, r: Formula) -> Formula {
        Formula::Tensor(Arc::new(l), Arc::new(r))
    }

    pub fn with(l: Formula, r: Formula) -> Formula {
        Formula::With(Arc::new(l), Arc::new(r))
    }

    pub fn lolli(a: Atom, body: Formula) -> Formula {
        Formula::Lolli(a, Arc::new(body))
    }

    pub fn bang(inner: Formula) -> Formula {
        Formula::Bang(Arc::new(inner))
    }

    /// Right-associated tensor of `items`; `1` when empty.
    pub fn tensor_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        let items: Vec<Formula> = items.into_iter().collect();
        let mut iter = items.into_iter().rev();
        match iter.next() {
            None => Formula::One,
            Some(last) => iter.fold(last, |acc, f| Formula::tensor(f, acc)),
        }
    }

    /// Node count. The atom of a receive counts as its own node, so
    /// `a -o b` has size 3.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::One | Formula::Top => 1,
            Formula::Tensor(l, r) | Formula::With(l, r) => 1 + l.size() + r.size(),
            Formula::Lolli(_, b) => 2 + b.size(),
            Formula::Bang(a) => 1 + a.size(),
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    /// Every atom occurring anywhere in the formula.
    pub fn atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::Atom(a) => out.push(a.clone()),
            Formula::One | Formula::Top => {}
            Formula::Tensor(l, r) | Formula::With(l, r) => {
                l.atoms(out);
                r.atoms(out);
            }
            Formula::Lolli(a, b) => {
                out.push(a.clone());
                b.atoms(out);
            }
            Formula::Bang(a) => a.atoms(out),
        }
    }

}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Formula {
        Formula::Atom(a)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
