//! Drives a transition system along an ultimately periodic input sequence and
//! records the joint input/output word it produces.

use std::collections::BTreeSet;

use crate::arch::TransitionSystem;
use crate::logic::UltimatelyPeriodicWord;

/// Runs `system` on the input lasso `stem_masks (cycle_masks)^omega` and
/// returns the produced valuation sequence over inputs and outputs.
///
/// The run is eventually periodic even when the system needs several laps
/// around the input cycle before revisiting a state at a lap boundary: the
/// boundary states range over a finite set, so at most `state_count` laps are
/// unrolled before the word closes.
pub fn trace_word(
    system: &TransitionSystem,
    stem_masks: &[u64],
    cycle_masks: &[u64],
) -> UltimatelyPeriodicWord {
    assert!(!cycle_masks.is_empty(), "input cycle must be nonempty");
    let mut props: Vec<String> = system.inputs().to_vec();
    props.extend(system.outputs().iter().cloned());

    let valuation = |state: usize, mask: u64| -> BTreeSet<String> {
        let mut v: BTreeSet<String> = system
            .inputs()
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, name)| name.clone())
            .collect();
        v.extend(system.label_names(state));
        v
    };

    let mut letters = Vec::new();
    let mut state = system.initial();
    for &mask in stem_masks {
        letters.push(valuation(state, mask));
        state = system.step(state, mask);
    }

    let mut boundary = vec![state];
    loop {
        for &mask in cycle_masks {
            letters.push(valuation(state, mask));
            state = system.step(state, mask);
        }
        if let Some(first) = boundary.iter().position(|&s| s == state) {
            let loop_part = letters.split_off(stem_masks.len() + first * cycle_masks.len());
            return UltimatelyPeriodicWord::new(props, letters, loop_part);
        }
        boundary.push(state);
    }
}
