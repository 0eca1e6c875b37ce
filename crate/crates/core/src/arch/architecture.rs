//! Architectures: the environment plus a nonempty set of system processes,
//! each with disjoint output propositions and inputs wired to other
//! processes' outputs.

use std::collections::BTreeSet;
use std::fmt;

use crate::arch::ArchError;

/// Whether processes step in lockstep or under explicit scheduling inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sync,
    Async,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sync => "sync",
            Mode::Async => "async",
        })
    }
}

/// One system process: its name and interface propositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Process {
    pub name: String,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
}

/// A distributed architecture. The environment is an implicit process named
/// `env` with no inputs; the system processes are kept in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Architecture {
    mode: Mode,
    env_outputs: BTreeSet<String>,
    processes: Vec<Process>,
}

impl Architecture {
    pub fn new(
        mode: Mode,
        env_outputs: BTreeSet<String>,
        processes: Vec<Process>,
    ) -> Result<Self, ArchError> {
        if processes.is_empty() {
            return Err(ArchError::NoProcesses);
        }
        let mut names = BTreeSet::new();
        for p in &processes {
            if p.name == "env" || !names.insert(p.name.clone()) {
                return Err(ArchError::DuplicateProcess(p.name.clone()));
            }
        }
        let mut produced: BTreeSet<&String> = BTreeSet::new();
        for out in env_outputs.iter().chain(processes.iter().flat_map(|p| &p.outputs)) {
            if !produced.insert(out) {
                return Err(ArchError::OverlappingOutputs(out.clone()));
            }
        }
        for p in &processes {
            for prop in &p.inputs {
                let fed = env_outputs.contains(prop)
                    || processes.iter().any(|q| q.name != p.name && q.outputs.contains(prop));
                if !fed {
                    return Err(ArchError::DanglingInput {
                        process: p.name.clone(),
                        prop: prop.clone(),
                    });
                }
            }
        }
        Ok(Architecture { mode, env_outputs, processes })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn env_outputs(&self) -> &BTreeSet<String> {
        &self.env_outputs
    }

    /// The system processes, in declaration order.
    pub fn processes(&self) -> &[Process] {
        &self.processes
    }

    pub fn process(&self, name: &str) -> Option<&Process> {
        self.processes.iter().find(|p| p.name == name)
    }

    /// Every proposition appearing anywhere in the architecture.
    pub fn all_props(&self) -> BTreeSet<String> {
        self.env_outputs
            .iter()
            .chain(self.processes.iter().flat_map(|p| p.inputs.iter().chain(&p.outputs)))
            .cloned()
            .collect()
    }

    /// The scheduling proposition `asynchronize` introduces for a process.
    pub fn sched_prop(name: &str) -> String {
        format!("sched_{name}")
    }

    pub fn to_text(&self) -> String {
        let list = |set: &BTreeSet<String>| {
            set.iter().map(|s| format!(" {s}")).collect::<String>()
        };
        let mut out = format!("mode: {}\nenv outputs:{}\n", self.mode, list(&self.env_outputs));
        for p in &self.processes {
            out.push_str(&format!(
                "process {} inputs:{} outputs:{}\n",
                p.name,
                list(&p.inputs),
                list(&p.outputs)
            ));
        }
        out
    }
}

fn is_ident(token: &str) -> bool {
    let mut chars = token.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn idents(tokens: &[&str], line: usize) -> Result<BTreeSet<String>, ArchError> {
    let mut out = BTreeSet::new();
    for t in tokens {
        if !is_ident(t) {
            return Err(ArchError::Parse { line, msg: format!("`{t}` is not a proposition name") });
        }
        out.insert(t.to_string());
    }
    Ok(out)
}

/// Parses the line-oriented architecture format:
///
/// ```text
/// mode: sync
/// env outputs: a b
/// process p1 inputs: a outputs: c
/// ```
///
/// `#` starts a comment line; identifiers are whitespace-separated.
pub fn parse_architecture(text: &str) -> Result<Architecture, ArchError> {
    let mut mode = None;
    let mut env_outputs = None;
    let mut processes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "mode:" => {
                if mode.is_some() {
                    return Err(ArchError::Parse { line, msg: "repeated mode line".into() });
                }
                mode = Some(match tokens.get(1) {
                    Some(&"sync") if tokens.len() == 2 => Mode::Sync,
                    Some(&"async") if tokens.len() == 2 => Mode::Async,
                    _ => {
                        return Err(ArchError::Parse {
                            line,
                            msg: "mode must be `sync` or `async`".into(),
                        })
                    }
                });
            }
            "env" => {
                if tokens.get(1) != Some(&"outputs:") {
                    return Err(ArchError::Parse {
                        line,
                        msg: "expected `env outputs: ...`".into(),
                    });
                }
                if env_outputs.is_some() {
                    return Err(ArchError::Parse { line, msg: "repeated env line".into() });
                }
                env_outputs = Some(idents(&tokens[2..], line)?);
            }
            "process" => {
                let name = tokens.get(1).copied().filter(|t| is_ident(t)).ok_or_else(|| {
                    ArchError::Parse { line, msg: "expected a process name".into() }
                })?;
                if tokens.get(2) != Some(&"inputs:") {
                    return Err(ArchError::Parse { line, msg: "expected `inputs:`".into() });
                }
                let split = tokens.iter().position(|&t| t == "outputs:").ok_or_else(|| {
                    ArchError::Parse { line, msg: "expected `outputs:`".into() }
                })?;
                processes.push(Process {
                    name: name.to_string(),
                    inputs: idents(&tokens[3..split], line)?,
                    outputs: idents(&tokens[split + 1..], line)?,
                });
            }
            other => {
                return Err(ArchError::Parse {
                    line,
                    msg: format!("unexpected directive `{other}`"),
                });
            }
        }
    }
    let mode = mode.ok_or(ArchError::Parse { line: 0, msg: "missing mode line".into() })?;
    Architecture::new(mode, env_outputs.unwrap_or_default(), processes)
}

/// Extends the architecture with one fresh scheduling proposition per system
/// process: the environment gains `sched_p` as an output, process `p` gains
/// it as an input, and the mode switches to asynchronous.
pub fn asynchronize(a: &Architecture) -> Result<Architecture, ArchError> {
    let existing = a.all_props();
    let mut env_outputs = a.env_outputs().clone();
    let mut processes = a.processes().to_vec();
    for p in &mut processes {
        let sched = Architecture::sched_prop(&p.name);
        if existing.contains(&sched) {
            return Err(ArchError::NameClash(sched));
        }
        env_outputs.insert(sched.clone());
        p.inputs.insert(sched);
    }
    Architecture::new(Mode::Async, env_outputs, processes)
}

/// Appends a fresh color proposition to the outputs of the given host
/// process, the synchronous reduction's way of letting the system choose its
/// own block boundaries.
pub fn add_color_output(a: &Architecture, process: &str, r: &str) -> Result<Architecture, ArchError> {
    if process == "env" {
        return Err(ArchError::ColorOnEnvironment);
    }
    if a.all_props().contains(r) {
        return Err(ArchError::NameClash(r.to_string()));
    }
    let mut processes = a.processes().to_vec();
    let host = processes
        .iter_mut()
        .find(|p| p.name == process)
        .ok_or_else(|| ArchError::UnknownProcess(process.to_string()))?;
    host.outputs.insert(r.to_string());
    Architecture::new(a.mode(), a.env_outputs().clone(), processes)
}

/// A cheap information-fork test: true when two system processes receive
/// incomparable slices of the environment's outputs, the shape that makes
/// distributed synthesis undecidable in general.
pub fn incomparable_information(a: &Architecture) -> bool {
    let env_fed: Vec<BTreeSet<&String>> = a
        .processes()
        .iter()
        .map(|p| p.inputs.iter().filter(|i| a.env_outputs().contains(*i)).collect())
        .collect();
    env_fed.iter().enumerate().any(|(i, p)| {
        env_fed[i + 1..].iter().any(|q| !p.is_subset(q) && !q.is_subset(p))
    })
}
