//! Tagged-tree JSON for formulas: `{"t":"tensor","l":..,"r":..}`,
//! `{"t":"atom","n":"a"}`, `{"t":"lolli","n":"a","r":..}`, `{"t":"bang","f":..}`,
//! `{"t":"one"}`, `{"t":"top"}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::formula::{Atom, Formula};

#[derive(Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "lowercase", deny_unknown_fields)]
enum Repr {
    Atom { n: String },
    One,
    Tensor { l: Box<Repr>, r: Box<Repr> },
    Top,
    With { l: Box<Repr>, r: Box<Repr> },
    Lolli { n: String, r: Box<Repr> },
    Bang { f: Box<Repr> },
}

impl From<&Formula> for Repr {
    fn from(f: &Formula) -> Repr {
        match f {
            Formula::Atom(a) => Repr::Atom { n: a.name().to_owned() },
            Formula::One => Repr::One,
            Formula::Tensor(l, r) => Repr::Tensor { l: Box::new((&**l).into()), r: Box::new((&**r).into()) },
            Formula::Top => Repr::Top,
            Formula::With(l, r) => Repr::With { l: Box::new((&**l).into()), r: Box::new((&**r).into()) },
            Formula::Lolli(a, b) => Repr::Lolli { n: a.name().to_owned(), r: Box::new((&**b).into()) },
            Formula::Bang(a) => Repr::Bang { f: Box::new((&**a).into()) },
        }
    }
}

fn atom(name: String) -> Result<Atom, String> {
    Atom::new(&name).ok_or_else(|| format!("invalid atom name {name:?}"))
}

impl TryFrom<Repr> for Formula {
    type Error = String;

    fn try_from(r: Repr) -> Result<Formula, String> {
        Ok(match r {
            Repr::Atom { n } => Formula::Atom(atom(n)?),
            Repr::One => Formula::One,
            Repr::Tensor { l, r } => Formula::tensor((*l).try_into()?, (*r).try_into()?),
            Repr::Top => Formula::Top,
            Repr::With { l, r } => Formula::with((*l).try_into()?, (*r).try_into()?),
            Repr::Lolli { n, r } => Formula::lolli(atom(n)?, (*r).try_into()?),
            Repr::Bang { f } => Formula::bang((*f).try_into()?),
        })
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Repr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Formula, D::Error> {
        Repr::deserialize(d)?.try_into().map_err(D::Error::custom)
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Atom, D::Error> {
        atom(String::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Serde adapter writing a [`State`] as its canonical text, for artifacts
/// meant to be read by people and replayed through the parser.
pub mod state_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::syntax::{parse_state, State};

    pub fn serialize<S: Serializer>(s: &State, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<State, D::Error> {
        let text = String::deserialize(d)?;
        parse_state(&text).map_err(serde::de::Error::custom)
    }
}
