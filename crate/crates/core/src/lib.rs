//! Linear-time specifications with prompt eventualities: parsing, evaluation,
//! color rewriting, automata, graph emptiness, model checking and bounded
//! synthesis for distributed architectures.
//!
//! The crate is organised bottom-up:
//!
//! * [`logic`] — formulas in negation normal form and ultimately periodic words,
//! * [`coloring`] — the alternating-color rewriting that eliminates prompt
//!   operators in favour of a fresh color proposition,
//! * [`automata`] — Büchi automata, the pump safety automaton and products,
//! * [`graphs`] — colored Büchi graphs and pumpable nonemptiness,
//! * [`arch`] — architectures and Moore-style transition systems,
//! * [`sat`] — a small CDCL solver with DIMACS export,
//! * [`synthesis`] — assume-guarantee model checking and bounded synthesis,
//! * [`testkit`] — independent brute-force oracles and seeded generators.

pub mod arch;
pub mod automata;
pub mod coloring;
pub mod graphs;
pub mod logic;
pub mod sat;
pub mod synthesis;
pub mod testkit;

pub use logic::{eval, min_bound, parse_formula, parse_word, Formula, UltimatelyPeriodicWord};
