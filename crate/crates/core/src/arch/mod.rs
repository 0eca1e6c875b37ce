//! Distributed architectures and Moore-style transition systems: parsing and
//! validation, the asynchronous extension with scheduling propositions,
//! process composition, and an information-fork heuristic.

mod architecture;
mod system;

pub use architecture::{
    add_color_output, asynchronize, incomparable_information, parse_architecture, Architecture,
    Mode, Process,
};
pub use system::{compose, TransitionSystem};

/// Errors raised by architecture and transition-system operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArchError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("overlapping outputs: `{0}` is produced by more than one process")]
    OverlappingOutputs(String),
    #[error("dangling input: `{prop}` read by process `{process}` has no producer")]
    DanglingInput { process: String, prop: String },
    #[error("the architecture has no system processes")]
    NoProcesses,
    #[error("duplicate process name `{0}`")]
    DuplicateProcess(String),
    #[error("proposition `{0}` already exists in the architecture")]
    NameClash(String),
    #[error("unknown process `{0}`")]
    UnknownProcess(String),
    #[error("the environment cannot host the color output")]
    ColorOnEnvironment,
    #[error("process `{process}` has inputs {found} but the architecture expects {expected}")]
    InputMismatch { process: String, expected: String, found: String },
    #[error("process `{process}` has outputs {found} but the architecture expects {expected}")]
    OutputMismatch { process: String, expected: String, found: String },
    #[error("process `{process}` changes state while unscheduled in state {state}")]
    StutteringViolation { process: String, state: usize },
    #[error("unsupported routing: input `{prop}` of process `{process}` is not an environment output")]
    UnsupportedRouting { process: String, prop: String },
    #[error("{0} input propositions are too many for an explicit transition table")]
    TooManyInputs(usize),
    #[error("state {0} is out of range")]
    UnknownState(usize),
    #[error("proposition `{0}` appears twice in the interface")]
    DuplicateProp(String),
    #[error("proposition `{0}` is not an input of the system")]
    UnknownInput(String),
    #[error("state {0} is labeled with bits outside the declared outputs")]
    BadLabel(usize),
    #[error("the system needs exactly one label per state")]
    LabelCount,
    #[error("state {state} has {found} transition entries but the input alphabet has {expected}")]
    BadTable { state: usize, expected: usize, found: usize },
    #[error("transition function is not total: state {state} has no transition on {input}")]
    MissingTransition { state: usize, input: String },
    #[error("no implementation given for process `{0}`")]
    MissingImplementation(String),
}
