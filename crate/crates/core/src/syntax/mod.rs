//! Formulas, process states and sequents: representation, concrete syntax
//! and canonical forms modulo structural congruence.

mod formula;
mod json;
mod parse;
mod render;
mod state;

pub use formula::{Atom, Formula};
pub use parse::{parse_formula, parse_raw_state, parse_sequent, parse_state, ParseError};
pub use json::state_text;
pub use render::render;
pub use state::{canonicalize, RawState, Sequent, State};

