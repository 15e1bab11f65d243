//! Backward proof search for the sequent calculus, an independent
//! derivation checker, and the logical preorder built on top of them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::Sequent;

mod admissibility;
mod check;
mod logical;
mod search;

pub use admissibility::{admissibility_suite, AdmissibilityReport};
pub use check::{check_derivation, CheckError};
pub use logical::{logical_preorder, LogicalVerdict};
pub use search::prove;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "init")]
    Init,
    #[serde(rename = "clone")]
    Clone,
    #[serde(rename = "⊗R")]
    TensorR,
    #[serde(rename = "⊗L")]
    TensorL,
    #[serde(rename = "1R")]
    OneR,
    #[serde(rename = "1L")]
    OneL,
    #[serde(rename = "&R")]
    WithR,
    #[serde(rename = "&L1")]
    WithL1,
    #[serde(rename = "&L2")]
    WithL2,
    #[serde(rename = "⊤R")]
    TopR,
    #[serde(rename = "⊸R")]
    LolliR,
    #[serde(rename = "⊸L")]
    LolliL,
    #[serde(rename = "!R")]
    BangR,
    #[serde(rename = "!L")]
    BangL,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Init => "init",
            Rule::Clone => "clone",
            Rule::TensorR => "⊗R",
            Rule::TensorL => "⊗L",
            Rule::OneR => "1R",
            Rule::OneL => "1L",
            Rule::WithR => "&R",
            Rule::WithL1 => "&L1",
            Rule::WithL2 => "&L2",
            Rule::TopR => "⊤R",
            Rule::LolliR => "⊸R",
            Rule::LolliL => "⊸L",
            Rule::BangR => "!R",
            Rule::BangL => "!L",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A proof tree. Each node is meant to instantiate one rule schema; use
/// [`check_derivation`] to confirm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: Rule, conclusion: Sequent) -> Derivation {
        Derivation { rule, conclusion, premises: Vec::new() }
    }

    pub fn node(rule: Rule, conclusion: Sequent, premises: Vec<Derivation>) -> Derivation {
        Derivation { rule, conclusion, premises }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Indented tree, conclusion first, premises below.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        self.pretty_into(&mut out, 0);
        out
    }

    fn pretty_into(&self, out: &mut String, indent: usize) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(&format!("{}   [{}]\n", self.conclusion, self.rule));
        for p in &self.premises {
            p.pretty_into(out, indent + 1);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_nodes: usize,
    pub max_clones_per_branch: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_depth: 40, max_nodes: 200_000, max_clones_per_branch: 3 }
    }
}

/// How much of the budget a search used.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: usize,
    pub depth_cutoffs: usize,
    pub clone_cutoffs: usize,
    pub node_limit_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum ProofResult {
    Proved { derivation: Derivation, stats: SearchStats },
    /// The search space was exhausted with no budget cut anywhere.
    Refuted { stats: SearchStats },
    Unknown { stats: SearchStats },
}

impl ProofResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProofResult::Proved { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, ProofResult::Refuted { .. })
    }

    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            ProofResult::Proved { derivation, .. } => Some(derivation),
            _ => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            ProofResult::Proved { stats, .. } | ProofResult::Refuted { stats } | ProofResult::Unknown { stats } => stats,
        }
    }

    pub fn decision(&self) -> crate::Decision {
        match self {
            ProofResult::Proved { .. } => crate::Decision::Holds,
            ProofResult::Refuted { .. } => crate::Decision::Fails,
            ProofResult::Unknown { .. } => crate::Decision::Unknown,
        }
    }
}
