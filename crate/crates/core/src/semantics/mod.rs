//! Operational semantics: one-step reductions, the labeled transition
//! system, weak transitions and barbs.
//!
//! Replication makes the transition system infinite, so every closure is
//! computed under an [`ExploreBudget`] and reports whether anything was cut.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{Atom, State};

mod closure;
mod dot;
mod lts;
mod reduce;

pub use closure::{never_empties, producible_atoms, strong_barbs, weak_barbs, weak_step, weak_tau, Closure};
pub use dot::{explore, export_dot, export_edges, ExploredLts};
pub use lts::{lts_successors, tau_moves, TauRule};
pub use reduce::reductions;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Tau,
    Send(Atom),
    Recv(Atom),
}

impl Label {
    /// Non-receive labels (`τ` and `!a`).
    pub fn is_output_or_tau(&self) -> bool {
        !matches!(self, Label::Recv(_))
    }

    pub fn parse(text: &str) -> Option<Label> {
        match text {
            "tau" | "τ" => Some(Label::Tau),
            _ => {
                let (kind, name) = text.split_at(text.char_indices().nth(1)?.0);
                let atom = Atom::new(name)?;
                match kind {
                    "!" => Some(Label::Send(atom)),
                    "?" => Some(Label::Recv(atom)),
                    _ => None,
                }
            }
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => f.write_str("tau"),
            Label::Send(a) => write!(f, "!{a}"),
            Label::Recv(a) => write!(f, "?{a}"),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Label, D::Error> {
        let text = String::deserialize(d)?;
        Label::parse(&text).ok_or_else(|| serde::de::Error::custom(format!("bad label {text:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: State,
    pub label: Label,
    pub to: State,
}

/// Bounds for exploring the (infinite) transition system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExploreBudget {
    /// Distinct states kept by one closure computation.
    pub max_states: usize,
    /// Longest τ-path followed.
    pub max_tau_depth: usize,
    /// Clone steps allowed along a single path.
    pub max_clones: usize,
}

impl Default for ExploreBudget {
    fn default() -> Self {
        ExploreBudget { max_states: 2000, max_tau_depth: 64, max_clones: 2 }
    }
}

impl ExploreBudget {
    pub fn with_clones(self, max_clones: usize) -> Self {
        ExploreBudget { max_clones, ..self }
    }
}
