//! Enumeration of small instances and differential checks between the
//! decision procedures.

mod crosscheck;
mod enumerate;
mod preset;
mod suite;

pub use crosscheck::{crosscheck, AgreementReport, Disagreement, VerdictCount};
pub use enumerate::{enumerate_formulas, enumerate_sequents, enumerate_states, EnumSpec};
pub use preset::{Budgets, Preset};
pub use suite::{
    check_admissibility, check_expansion, check_harmony, check_precongruence, check_preorder_laws,
    check_provability_simulation, check_tau_down, check_tau_provability, check_tau_reduction, check_weakening,
    metamorphic_suite, LemmaReport, SuiteReport,
};
