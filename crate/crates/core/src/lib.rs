//! A fragment of dual intuitionistic linear logic read as an asynchronous
//! process calculus.
//!
//! * [`syntax`]: formulas, states `(Γ;Δ)`, sequents, canonical forms.
//! * [`prover`]: budgeted backward proof search, derivation checking and the
//!   logical preorder.
//! * [`semantics`]: reductions, the labeled transition system, weak
//!   transitions and barbs.
//! * [`preorders`]: the simulation checker and the contextual falsifier.
//! * [`harness`]: enumeration and differential cross-checking.

pub mod syntax;
pub mod semantics;
pub mod prover;
pub mod preorders;
pub mod harness;

use serde::{Deserialize, Serialize};

/// Three-valued answer of every decision procedure in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Holds,
    Fails,
    Unknown,
}

impl Decision {
    /// CLI exit code: 0 holds, 1 fails, 2 unknown.
    pub fn exit_code(self) -> i32 {
        match self {
            Decision::Holds => 0,
            Decision::Fails => 1,
            Decision::Unknown => 2,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Decision::Unknown
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Holds => "holds",
            Decision::Fails => "fails",
            Decision::Unknown => "unknown",
        })
    }
}
