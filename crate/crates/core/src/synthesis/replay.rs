//! Replaying a violation witness with nothing but the evaluator.
//!
//! A witness establishes a violation family: for one uniform assumption
//! bound, every candidate guarantee bound is defeated by some run. Pumping
//! the witness's repeatable segments stretches every guarantee-color block
//! past the candidate bound while the assumption color keeps alternating,
//! so the colored trace itself certifies both sides through `eval`: the
//! assumption holds at a bound read off the trace, the guarantee fails at
//! the candidate bound.

use std::collections::BTreeSet;

use crate::arch::TransitionSystem;
use crate::coloring::{rel, ColorProp};
use crate::logic::{eval, min_bound, UltimatelyPeriodicWord};

use super::{
    AGSpec, SynthesisError, ViolationWitness, WitnessStep, ASSUMPTION_COLOR, GUARANTEE_COLOR,
};

/// Largest guarantee bound the replay tries to defeat.
const MAX_TESTED_BOUND: usize = 4;

/// Confirm a violation witness against the system using only the evaluator.
///
/// For every guarantee bound up to four, the witness's segments are pumped
/// until each finite guarantee-color block reaches that length; the claim
/// holds when the assumption is satisfied on every pumped trace at one
/// uniform bound while the guarantee fails at the respective candidate
/// bound. Returns an error when the witness or any pumped variant is not a
/// run of the system, and `false` when the traces fail to establish the
/// family.
pub fn replay_violation(
    system: &TransitionSystem,
    spec: &AGSpec,
    witness: &ViolationWitness,
) -> Result<bool, SynthesisError> {
    validate_run(system, &witness.stem, &witness.cycle)?;
    let seq: Vec<WitnessStep> =
        witness.stem.iter().chain(witness.cycle.iter()).copied().collect();
    for pump in &witness.pumps {
        if pump.start >= pump.flip || pump.flip >= pump.end || pump.end > seq.len() {
            return Ok(false);
        }
        let first = seq[pump.start];
        let closes = seq.get(pump.end).copied().unwrap_or(witness.cycle[0]);
        if first.state != closes.state {
            return Err(SynthesisError::NotAPath);
        }
        if first.colors != closes.colors
            || seq[pump.flip].colors.r == seq[pump.flip - 1].colors.r
            || seq[pump.start..pump.end]
                .iter()
                .any(|step| step.colors.r_prime != first.colors.r_prime)
        {
            return Ok(false);
        }
        if pump.start < witness.stem.len() && pump.end > witness.stem.len() {
            return Ok(false);
        }
    }

    let relativized = rel(&spec.assumption, &ColorProp::new(ASSUMPTION_COLOR))?;
    let failed = rel(&spec.guarantee, &ColorProp::new(GUARANTEE_COLOR))?;
    for bound in 1..=MAX_TESTED_BOUND {
        let (stem, cycle) = pumped(witness, bound);
        validate_run(system, &stem, &cycle)?;
        let trace = trace_of(system, &stem, &cycle)?;
        if !eval(&trace, 0, 0, &relativized) || eval(&trace, 0, 0, &failed) {
            return Ok(false);
        }
        let horizon = trace.prefix_len() + trace.loop_len();
        if min_bound(&trace, &spec.assumption, horizon).is_none() {
            return Ok(false);
        }
        if eval(&trace, 0, bound, &spec.guarantee) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The colored trace of a witness lasso: inputs, outputs, and both color
/// propositions per position.
pub fn witness_trace(
    system: &TransitionSystem,
    witness: &ViolationWitness,
) -> Result<UltimatelyPeriodicWord, SynthesisError> {
    validate_run(system, &witness.stem, &witness.cycle)?;
    trace_of(system, &witness.stem, &witness.cycle)
}

fn trace_of(
    system: &TransitionSystem,
    stem: &[WitnessStep],
    cycle: &[WitnessStep],
) -> Result<UltimatelyPeriodicWord, SynthesisError> {
    for color in [ASSUMPTION_COLOR, GUARANTEE_COLOR] {
        if system.inputs().iter().chain(system.outputs()).any(|p| p == color) {
            return Err(SynthesisError::ColorClash(color.to_string()));
        }
    }
    let mut props: Vec<String> = system
        .inputs()
        .iter()
        .chain(system.outputs())
        .cloned()
        .chain([ASSUMPTION_COLOR.to_string(), GUARANTEE_COLOR.to_string()])
        .collect();
    props.sort();

    let letter = |step: &WitnessStep| -> BTreeSet<String> {
        let mut set: BTreeSet<String> = system.label_names(step.state);
        for (i, name) in system.inputs().iter().enumerate() {
            if step.input >> i & 1 != 0 {
                set.insert(name.clone());
            }
        }
        if step.colors.r {
            set.insert(ASSUMPTION_COLOR.to_string());
        }
        if step.colors.r_prime {
            set.insert(GUARANTEE_COLOR.to_string());
        }
        set
    };
    Ok(UltimatelyPeriodicWord::new(
        props,
        stem.iter().map(letter).collect(),
        cycle.iter().map(letter).collect(),
    ))
}

/// Repeat every pump segment until each reaches at least `bound` positions.
fn pumped(witness: &ViolationWitness, bound: usize) -> (Vec<WitnessStep>, Vec<WitnessStep>) {
    let mut stem = witness.stem.clone();
    let mut cycle = witness.cycle.clone();
    let stem_len = witness.stem.len();
    let mut pumps = witness.pumps.clone();
    pumps.sort_by_key(|p| p.start);
    for pump in pumps.iter().rev() {
        let len = pump.end - pump.start;
        let copies = bound.div_ceil(len);
        let segment: Vec<WitnessStep> = if pump.end <= stem_len {
            stem[pump.start..pump.end].to_vec()
        } else {
            cycle[pump.start - stem_len..pump.end - stem_len].to_vec()
        };
        let mut insertion = Vec::with_capacity(copies * len);
        for _ in 0..copies {
            insertion.extend_from_slice(&segment);
        }
        if pump.end <= stem_len {
            stem.splice(pump.end..pump.end, insertion);
        } else {
            let at = pump.end - stem_len;
            cycle.splice(at..at, insertion);
        }
    }
    (stem, cycle)
}

fn validate_run(
    system: &TransitionSystem,
    stem: &[WitnessStep],
    cycle: &[WitnessStep],
) -> Result<(), SynthesisError> {
    if cycle.is_empty() {
        return Err(SynthesisError::NotAPath);
    }
    let input_space = 1u64 << system.inputs().len();
    let seq: Vec<WitnessStep> = stem.iter().chain(cycle.iter()).copied().collect();
    if seq[0].state != system.initial() {
        return Err(SynthesisError::NotAPath);
    }
    for (i, step) in seq.iter().enumerate() {
        if step.state >= system.state_count() || step.input >= input_space {
            return Err(SynthesisError::NotAPath);
        }
        let target = if i + 1 < seq.len() { seq[i + 1].state } else { cycle[0].state };
        if system.step(step.state, step.input) != target {
            return Err(SynthesisError::NotAPath);
        }
    }
    Ok(())
}
