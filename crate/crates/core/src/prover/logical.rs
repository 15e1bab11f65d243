use serde::{Deserialize, Serialize};

use super::{prove, ProofResult, SearchBudget};
use crate::syntax::{Sequent, State};
use crate::Decision;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalVerdict {
    pub decision: Decision,
    /// The sequent `Γ₂;Δ₂ ⊢ ⊗!Γ₁ ⊗ ⊗Δ₁` the question reduces to.
    pub sequent: Sequent,
    pub proof: ProofResult,
}

/// Decides `s1 ≼l s2` by proving `Γ₂;Δ₂ ⊢ ⊗!Γ₁ ⊗ ⊗Δ₁`.
pub fn logical_preorder(s1: &State, s2: &State, b: &SearchBudget) -> LogicalVerdict {
    let sequent = Sequent::new(s2.clone(), s1.tensor_of());
    let proof = prove(&sequent, b);
    LogicalVerdict { decision: proof.decision(), sequent, proof }
}
