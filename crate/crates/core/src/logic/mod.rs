//! Formulas in negation normal form and ultimately periodic words.

mod eval;
mod formula;
mod parser;
mod word;

pub use eval::{eval, min_bound};
pub use formula::{Formula, NegationError};
pub use parser::{parse_formula, parse_word, ParseError};
pub use word::UltimatelyPeriodicWord;
