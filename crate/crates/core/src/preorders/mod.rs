//! The simulation preorder, its certificates, and a direct falsifier for the
//! contextual preorder.
//!
//! [`simulate`] answers `s1 ≼s s2` with a checkable artifact either way: a
//! relation for `Holds` (see [`validate_witness`]) and a well-founded
//! refutation for `Fails` (see [`replay_trace`]).

use serde::{Deserialize, Serialize};

use crate::semantics::{ExploreBudget, Label};
use crate::syntax::{state_text, Atom, State};
use crate::Decision;

mod contextual;
mod simulate;
mod validate;

pub use contextual::{context_battery, contextual_falsify, contextual_preorder};
pub use simulate::simulate;
pub use validate::{replay_trace, validate_witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimConfig {
    pub explore: ExploreBudget,
    /// Pairs expanded before the checker gives up on the rest.
    pub max_pairs: usize,
    /// Close pairs whose right side silently reaches the left side up to
    /// extra unrestricted formulas. Turned off when those facts are the ones
    /// under test.
    #[serde(default = "yes")]
    pub absorb: bool,
}

fn yes() -> bool {
    true
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { explore: ExploreBudget::default(), max_pairs: 20_000, absorb: true }
    }
}

/// One obligation the left state imposes on the right one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Challenge {
    /// The left state has an empty linear context.
    Empty,
    /// The left state splits into two parts.
    Split {
        #[serde(with = "state_text")]
        left: State,
        #[serde(with = "state_text")]
        right: State,
    },
    /// The left state moves. `?a` moves are answered by adding `a` to the
    /// right state and running silently.
    Move {
        label: Label,
        #[serde(with = "state_text")]
        to: State,
    },
    /// Not a single move: the left state can eventually send `atom`, which
    /// the right state can never produce.
    Barb { atom: Atom },
    /// Not a single move: the left state can eventually empty its linear
    /// context, which the right state never can.
    Halt,
}

/// Why a pair belongs to a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "lowercase")]
pub enum Justification {
    /// Every challenge is answered inside the witness.
    Clauses,
    /// The right state silently reaches `via`, which has the same linear
    /// context as the left state and a larger unrestricted one. Such pairs are
    /// related because τ-steps only move down the preorder and extra
    /// unrestricted hypotheses only move up.
    Absorbed {
        #[serde(with = "state_text")]
        via: State,
    },
    /// The pair is the composition of two witness pairs whose left states
    /// are both smaller. Sound because every move of a composition is a move
    /// of one part or a send/receive between them, and receives are answered
    /// asynchronously.
    Composed {
        #[serde(with = "state_text")]
        left_a: State,
        #[serde(with = "state_text")]
        right_a: State,
        #[serde(with = "state_text")]
        left_b: State,
        #[serde(with = "state_text")]
        right_b: State,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPair {
    #[serde(with = "state_text")]
    pub left: State,
    #[serde(with = "state_text")]
    pub right: State,
    #[serde(flatten)]
    pub justification: Justification,
}

/// One refuted pair. Every response to `challenge` must involve a pair
/// refuted by a step of strictly smaller `rank`, so the refutation is
/// well-founded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    #[serde(with = "state_text")]
    pub left: State,
    #[serde(with = "state_text")]
    pub right: State,
    pub challenge: Challenge,
    pub rank: usize,
}

/// A contextual counterexample: inside `context`, the composed left state
/// does something the composed right state cannot answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextWitness {
    #[serde(with = "state_text")]
    pub context: State,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimStats {
    pub pairs: usize,
    pub expanded: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub verdict: Decision,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<ContextWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub budgets: SimConfig,
    /// Some closure or the pair budget was cut somewhere in the search.
    pub truncated: bool,
    #[serde(default)]
    pub stats: SimStats,
}

impl Verdict {
    pub(crate) fn unknown(cfg: &SimConfig, reason: impl Into<String>, truncated: bool) -> Verdict {
        Verdict {
            verdict: Decision::Unknown,
            witness: None,
            trace: None,
            context: None,
            reason: Some(reason.into()),
            budgets: *cfg,
            truncated,
            stats: SimStats::default(),
        }
    }
}
