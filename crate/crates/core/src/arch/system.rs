//! Moore-style transition systems and their composition along an
//! architecture.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::arch::{ArchError, Architecture, Mode};

const MAX_INPUTS: usize = 16;

/// A finite-state machine reading input valuations and labeling each state
/// with an output valuation. The transition function is total: one entry per
/// state and input mask, bit `i` of a mask standing for `inputs[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    inputs: Vec<String>,
    outputs: Vec<String>,
    initial: usize,
    delta: Vec<Vec<usize>>,
    labels: Vec<u64>,
}

impl TransitionSystem {
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        initial: usize,
        delta: Vec<Vec<usize>>,
        labels: Vec<u64>,
    ) -> Result<Self, ArchError> {
        if inputs.len() > MAX_INPUTS {
            return Err(ArchError::TooManyInputs(inputs.len()));
        }
        let mut seen = BTreeSet::new();
        for prop in inputs.iter().chain(&outputs) {
            if !seen.insert(prop.clone()) {
                return Err(ArchError::DuplicateProp(prop.clone()));
            }
        }
        let n = delta.len();
        if initial >= n {
            return Err(ArchError::UnknownState(initial));
        }
        if labels.len() != n {
            return Err(ArchError::LabelCount);
        }
        let width = 1usize << inputs.len();
        for (state, row) in delta.iter().enumerate() {
            if row.len() != width {
                return Err(ArchError::BadTable { state, expected: width, found: row.len() });
            }
            if let Some(&bad) = row.iter().find(|&&t| t >= n) {
                return Err(ArchError::UnknownState(bad));
            }
        }
        if let Some(state) = labels.iter().position(|&l| l >> outputs.len() != 0) {
            return Err(ArchError::BadLabel(state));
        }
        Ok(TransitionSystem { inputs, outputs, initial, delta, labels })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, state: usize, input_mask: u64) -> usize {
        self.delta[state][input_mask as usize]
    }

    pub fn label(&self, state: usize) -> u64 {
        self.labels[state]
    }

    pub fn label_names(&self, state: usize) -> BTreeSet<String> {
        self.outputs
            .iter()
            .enumerate()
            .filter(|(i, _)| self.labels[state] >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect()
    }

    /// Encodes a set of input proposition names as a mask.
    pub fn input_mask(&self, names: &BTreeSet<String>) -> Result<u64, ArchError> {
        let mut mask = 0;
        for name in names {
            let pos = self
                .inputs
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| ArchError::UnknownInput(name.clone()))?;
            mask |= 1 << pos;
        }
        Ok(mask)
    }

    /// Parses the line-oriented format:
    ///
    /// ```text
    /// states: 2
    /// init: 0
    /// label 0: c d
    /// trans 0 {a,b} -> 1
    /// ```
    ///
    /// Inputs are the propositions appearing in transition sets, outputs
    /// those appearing in labels, both in sorted order; the table must be
    /// total. `#` starts a comment line.
    pub fn from_text(text: &str) -> Result<Self, ArchError> {
        let parse_id = |token: &str, line: usize| -> Result<usize, ArchError> {
            token.parse().map_err(|_| ArchError::Parse {
                line,
                msg: format!("`{token}` is not a state id"),
            })
        };
        let mut state_count = None;
        let mut initial = None;
        let mut label_lines: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        let mut trans_lines: Vec<(usize, usize, BTreeSet<String>, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            match tokens[0] {
                "states:" if tokens.len() == 2 => {
                    if state_count.replace(parse_id(tokens[1], line)?).is_some() {
                        return Err(ArchError::Parse { line, msg: "repeated states line".into() });
                    }
                }
                "init:" if tokens.len() == 2 => {
                    if initial.replace(parse_id(tokens[1], line)?).is_some() {
                        return Err(ArchError::Parse { line, msg: "repeated init line".into() });
                    }
                }
                "label" if tokens.len() >= 2 => {
                    let id = tokens[1].strip_suffix(':').ok_or_else(|| ArchError::Parse {
                        line,
                        msg: "expected `label <id>:`".into(),
                    })?;
                    let id = parse_id(id, line)?;
                    let props = tokens[2..].iter().map(|t| t.to_string()).collect();
                    if label_lines.insert(id, props).is_some() {
                        return Err(ArchError::Parse {
                            line,
                            msg: format!("repeated label for state {id}"),
                        });
                    }
                }
                "trans" if tokens.len() == 5 && tokens[3] == "->" => {
                    let src = parse_id(tokens[1], line)?;
                    let dst = parse_id(tokens[4], line)?;
                    let set = tokens[2]
                        .strip_prefix('{')
                        .and_then(|t| t.strip_suffix('}'))
                        .ok_or_else(|| ArchError::Parse {
                            line,
                            msg: "expected an input set like {a,b}".into(),
                        })?;
                    let props: BTreeSet<String> =
                        set.split(',').filter(|p| !p.is_empty()).map(|p| p.to_string()).collect();
                    trans_lines.push((line, src, props, dst));
                }
                other => {
                    return Err(ArchError::Parse {
                        line,
                        msg: format!("unexpected directive `{other}`"),
                    });
                }
            }
        }
        let n = state_count.ok_or(ArchError::Parse { line: 0, msg: "missing states line".into() })?;
        let initial = initial.ok_or(ArchError::Parse { line: 0, msg: "missing init line".into() })?;

        let inputs: Vec<String> =
            trans_lines.iter().flat_map(|(_, _, props, _)| props.iter().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
        if inputs.len() > MAX_INPUTS {
            return Err(ArchError::TooManyInputs(inputs.len()));
        }
        let outputs: Vec<String> =
            label_lines.values().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();

        let width = 1usize << inputs.len();
        let mut delta = vec![vec![None; width]; n];
        for (line, src, props, dst) in trans_lines {
            if src >= n || dst >= n {
                return Err(ArchError::UnknownState(src.max(dst)));
            }
            let mask: usize = props
                .iter()
                .map(|p| 1 << inputs.iter().position(|i| i == p).expect("inputs cover trans props"))
                .sum();
            if delta[src][mask].replace(dst).is_some() {
                return Err(ArchError::Parse { line, msg: "duplicate transition".into() });
            }
        }
        let mut table = Vec::with_capacity(n);
        for (state, row) in delta.into_iter().enumerate() {
            let mut complete = Vec::with_capacity(width);
            for (mask, entry) in row.into_iter().enumerate() {
                complete.push(entry.ok_or_else(|| ArchError::MissingTransition {
                    state,
                    input: set_text(&inputs, mask as u64),
                })?);
            }
            table.push(complete);
        }
        let mut labels = vec![0u64; n];
        for (id, props) in label_lines {
            if id >= n {
                return Err(ArchError::UnknownState(id));
            }
            for p in props {
                labels[id] |= 1 << outputs.iter().position(|o| *o == p).expect("outputs cover labels");
            }
        }
        TransitionSystem::new(inputs, outputs, initial, table, labels)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("states: {}\ninit: {}\n", self.state_count(), self.initial);
        for state in 0..self.state_count() {
            let names = self.label_names(state);
            let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            writeln!(out, "label {state}:{}", names.iter().map(|n| format!(" {n}")).collect::<String>())
                .unwrap();
        }
        for (state, row) in self.delta.iter().enumerate() {
            for (mask, dst) in row.iter().enumerate() {
                writeln!(out, "trans {state} {} -> {dst}", set_text(&self.inputs, mask as u64))
                    .unwrap();
            }
        }
        out
    }
}

fn set_text(props: &[String], mask: u64) -> String {
    let names: Vec<&str> = props
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p.as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

/// Composes one implementation per system process into the global Moore
/// product. Global inputs are the environment's outputs, global outputs the
/// union of the process outputs; each process reads only the projection of
/// the input onto its own interface. Global states are mixed-radix encodings
/// of the component states, the first declared process most significant.
///
/// In asynchronous mode every implementation must hold its state on inputs
/// lacking its `sched_p` proposition; the contract is checked exhaustively.
pub fn compose(
    a: &Architecture,
    implementations: &BTreeMap<String, TransitionSystem>,
) -> Result<TransitionSystem, ArchError> {
    for name in implementations.keys() {
        if a.process(name).is_none() {
            return Err(ArchError::UnknownProcess(name.clone()));
        }
    }
    let mut parts: Vec<(&str, &TransitionSystem)> = Vec::new();
    for p in a.processes() {
        let system = implementations
            .get(&p.name)
            .ok_or_else(|| ArchError::MissingImplementation(p.name.clone()))?;
        let found: BTreeSet<String> = system.inputs().iter().cloned().collect();
        if found != p.inputs {
            return Err(ArchError::InputMismatch {
                process: p.name.clone(),
                expected: format!("{:?}", p.inputs),
                found: format!("{found:?}"),
            });
        }
        let found: BTreeSet<String> = system.outputs().iter().cloned().collect();
        if found != p.outputs {
            return Err(ArchError::OutputMismatch {
                process: p.name.clone(),
                expected: format!("{:?}", p.outputs),
                found: format!("{found:?}"),
            });
        }
        if let Some(prop) = p.inputs.iter().find(|i| !a.env_outputs().contains(*i)) {
            return Err(ArchError::UnsupportedRouting {
                process: p.name.clone(),
                prop: prop.clone(),
            });
        }
        parts.push((&p.name, system));
    }

    let inputs: Vec<String> = a.env_outputs().iter().cloned().collect();
    if inputs.len() > MAX_INPUTS {
        return Err(ArchError::TooManyInputs(inputs.len()));
    }
    let outputs: Vec<String> =
        parts.iter().flat_map(|(_, s)| s.outputs().iter().cloned()).collect::<BTreeSet<_>>().into_iter().collect();

    if a.mode() == Mode::Async {
        for (name, system) in &parts {
            let sched = Architecture::sched_prop(name);
            let sched_bit = system.inputs().iter().position(|i| *i == sched);
            for state in 0..system.state_count() {
                for mask in 0..1u64 << system.inputs().len() {
                    let scheduled = sched_bit.is_some_and(|b| mask >> b & 1 == 1);
                    if !scheduled && system.step(state, mask) != state {
                        return Err(ArchError::StutteringViolation {
                            process: name.to_string(),
                            state,
                        });
                    }
                }
            }
        }
    }

    // Bit routing: local input bit i of each part comes from a fixed global
    // bit, local output bit j feeds a fixed global bit.
    let global_input = |name: &String| inputs.iter().position(|p| p == name).unwrap();
    let global_output = |name: &String| outputs.iter().position(|p| p == name).unwrap();
    let routing: Vec<(Vec<usize>, Vec<usize>)> = parts
        .iter()
        .map(|(_, s)| {
            (
                s.inputs().iter().map(global_input).collect(),
                s.outputs().iter().map(global_output).collect(),
            )
        })
        .collect();
    let project = |mask: u64, in_bits: &[usize]| -> u64 {
        in_bits.iter().enumerate().map(|(i, &g)| (mask >> g & 1) << i).sum()
    };

    let sizes: Vec<usize> = parts.iter().map(|(_, s)| s.state_count()).collect();
    let encode = |locals: &[usize]| locals.iter().zip(&sizes).fold(0, |acc, (&x, &n)| acc * n + x);
    let decode = |mut id: usize| -> Vec<usize> {
        let mut locals = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            locals[i] = id % sizes[i];
            id /= sizes[i];
        }
        locals
    };

    let total: usize = sizes.iter().product();
    let width = 1usize << inputs.len();
    let mut delta = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for id in 0..total {
        let locals = decode(id);
        let mut label = 0u64;
        for ((local, (_, s)), (_, out_bits)) in locals.iter().zip(&parts).zip(&routing) {
            for (j, &g) in out_bits.iter().enumerate() {
                label |= (s.label(*local) >> j & 1) << g;
            }
        }
        labels.push(label);
        let mut row = Vec::with_capacity(width);
        for mask in 0..width as u64 {
            let next: Vec<usize> = locals
                .iter()
                .zip(&parts)
                .zip(&routing)
                .map(|((&x, (_, s)), (in_bits, _))| s.step(x, project(mask, in_bits)))
                .collect();
            row.push(encode(&next));
        }
        delta.push(row);
    }
    let initial = encode(&parts.iter().map(|(_, s)| s.initial()).collect::<Vec<_>>());
    TransitionSystem::new(inputs, outputs, initial, delta, labels)
}
