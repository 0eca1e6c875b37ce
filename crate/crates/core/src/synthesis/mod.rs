//! Assume-guarantee model checking and bounded synthesis for prompt
//! specifications.
//!
//! A [`AGSpec`] pairs an assumption about the environment with a guarantee
//! the implementation owes. [`mc_prompt_ag`] decides whether a closed
//! transition system meets the pair for some uniform guarantee bound under
//! every assumption bound, and returns a colored lasso witness when it does
//! not. [`replay_violation`] re-derives a violation from such a witness with
//! nothing but the evaluator, pumping the witness blocks to defeat every
//! candidate bound. [`encode_bounded_synthesis`] emits a propositional
//! constraint system whose models are distributed implementations of a fixed
//! size, and [`realize_async_ag`] / [`realize_sync`] drive the search over
//! growing size bounds.

mod encode;
mod mc;
mod realize;
mod replay;

pub use encode::{encode_bounded_synthesis, ConstraintSystem};
pub use mc::mc_prompt_ag;
pub use realize::{bound_schedule, max_r_block, realize_async_ag, realize_sync};
pub use replay::{replay_violation, witness_trace};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arch::{ArchError, TransitionSystem};
use crate::automata::AutomatonError;
use crate::coloring::ColoringError;
use crate::graphs::Colors;
use crate::logic::Formula;

/// Color proposition tracking the assumption bound.
pub const ASSUMPTION_COLOR: &str = "r";
/// Color proposition tracking the guarantee bound.
pub const GUARANTEE_COLOR: &str = "r'";

/// An assume-guarantee pair of prompt formulas in negation normal form.
///
/// The pair is met by a system when for every assumption bound there is a
/// single guarantee bound that works on all traces satisfying the bounded
/// assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AGSpec {
    pub assumption: Formula,
    pub guarantee: Formula,
}

impl AGSpec {
    pub fn new(assumption: Formula, guarantee: Formula) -> Self {
        AGSpec { assumption, guarantee }
    }

    /// Atoms of both sides, sorted.
    pub fn atoms(&self) -> Vec<String> {
        let mut atoms: Vec<String> =
            self.assumption.atoms().union(&self.guarantee.atoms()).cloned().collect();
        atoms.dedup();
        atoms
    }
}

/// One step of a violation lasso: the system state, the colors chosen for
/// that position, and the input driving the next transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessStep {
    pub state: usize,
    pub colors: Colors,
    pub input: u64,
}

/// A repeatable segment of a witness: positions index the stem followed by
/// one cycle lap, `start` and `end` carry the same state and colors, the
/// assumption color flips at `flip`, and the guarantee color is constant
/// over the segment. Repeating `start..end` in place lengthens the
/// enclosing guarantee-color block without leaving the system's run graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PumpSegment {
    pub start: usize,
    pub flip: usize,
    pub end: usize,
}

/// A colored ultimately periodic run of the system on which the assumption
/// admits a bounded coloring while the guarantee fails under pumping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationWitness {
    pub stem: Vec<WitnessStep>,
    pub cycle: Vec<WitnessStep>,
    /// One pumpable segment per guarantee-color block of the lasso.
    pub pumps: Vec<PumpSegment>,
}

/// Result of a model-checking or synthesis run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The system meets the assume-guarantee pair.
    Holds,
    /// The system violates the pair; the witness replays the violation.
    Violated(ViolationWitness),
    /// A size vector admitted an implementation, one per process.
    Realized {
        implementations: BTreeMap<String, TransitionSystem>,
        bounds: Vec<usize>,
        /// Uniform prompt bound certified for the synthesized system, when
        /// the target had prompt operators.
        prompt_bound: Option<usize>,
    },
    /// A size vector was exhausted without finding an implementation.
    NoModelAtBound(Vec<usize>),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("color proposition '{0}' clashes with a system or specification proposition")]
    ColorClash(String),
    #[error("the witness is not a run of the system")]
    NotAPath,
    #[error("the encoder requires an asynchronous architecture")]
    NotAsync,
    #[error("the synchronous driver requires a synchronous architecture")]
    NotSync,
    #[error("process '{0}' does not exist in the architecture")]
    NoSuchProcess(String),
    #[error("bound vector has {found} entries for {expected} processes")]
    BoundArity { expected: usize, found: usize },
    #[error("every process bound must be at least one")]
    ZeroBound,
    #[error("a synthesized implementation failed its own model check")]
    SelfCheckFailed,
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}
