//! Automata support: nondeterministic Büchi automata built from formulas by
//! tableau expansion, the pump safety automaton, their product, and the dual
//! universal co-Büchi view used by bounded synthesis.

mod nba;
mod pump;
pub(crate) mod tableau;

pub use nba::{
    dualize_to_ucw, ltl_to_nba, nba_accepts_lasso, nba_accepts_word, product_spec_pump,
    AutomatonError, Letter, Nba, UcwView,
};
pub use pump::{PumpAutomaton, PumpState};
