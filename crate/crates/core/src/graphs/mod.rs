//! Colored Büchi graphs and their emptiness problems: plain generalized
//! Büchi emptiness of index two, and pumpable emptiness, which additionally
//! requires every bounded `r'`-block of the accepting path to contain a
//! vertex repetition enclosing an `r` flip. Pumpable emptiness reduces to
//! plain emptiness by a product with the pump automaton.

mod cbg;
mod emptiness;
pub(crate) mod scc;

pub use cbg::{ColoredBuchiGraph, Colors, GraphError, Lasso, Vertex};
pub use emptiness::{
    buchi_nonempty, is_pumpable_lasso, is_pumpable_sequence, pumpable_nonempty, reduce_to_buchi,
    BuchiGraph, PumpReduction,
};
