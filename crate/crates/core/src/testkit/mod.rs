//! Deterministic test data and independent reference implementations.
//!
//! The generators produce formulas, words, colorings, graphs and systems
//! from a seeded stream, so every failure is reproducible from its seed.
//! The oracles re-derive answers by direct, unoptimized definitions and
//! share no code with the algorithms they check.

pub mod drive;
pub mod gen;
pub mod graph_oracle;
pub mod lasso;
pub mod mc_oracle;
pub mod oracle;
pub mod suites;

pub use drive::trace_word;
pub use gen::Generator;
pub use lasso::{enumerate_lassos, LassoCaps};
pub use mc_oracle::ag_holds_oracle;
pub use suites::run_property_suites;
