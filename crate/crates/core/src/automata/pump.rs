//! The pump automaton: a nondeterministic safety automaton over letters
//! `(v, x)` with `v` a vertex and `x` a color subset. It has an infinite run
//! on a colored vertex sequence exactly when every bounded `r'`-block of the
//! sequence contains a vertex repetition enclosing an `r` flip, which is what
//! lets such blocks be pumped to arbitrary length.

use crate::graphs::Colors;

/// States of the pump automaton. For a vertex universe of size `|V|` there
/// are exactly `8|V| + 3` states: the start state, `4|V|` remember states,
/// `4|V|` await states, and two done states.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PumpState<V> {
    /// Nothing observed yet.
    Start,
    /// A vertex was guessed as the repetition anchor; its colors are kept for
    /// spotting an `r` flip.
    Remember { vertex: V, colors: Colors },
    /// An `r` flip was seen after the anchor; waiting for the anchor vertex
    /// to repeat. `colors` is the letter that carried the flip.
    AwaitRepeat { vertex: V, colors: Colors },
    /// The current `r'`-block is certified; `r_prime` is the block's color.
    Done { r_prime: bool },
}

/// The pump automaton over a finite vertex universe. All states are
/// accepting; runs die only by having no successor, so an infinite run
/// witnesses membership. Successors are computed on demand from the
/// transition rules rather than stored.
#[derive(Clone, Debug)]
pub struct PumpAutomaton<V> {
    vertices: Vec<V>,
    states: Vec<PumpState<V>>,
    index: std::collections::BTreeMap<PumpState<V>, usize>,
}

impl<V: Clone + Ord> PumpAutomaton<V> {
    /// Builds the automaton for the given vertex universe. Duplicate vertices
    /// are ignored.
    pub fn new(universe: &[V]) -> Self {
        let mut vertices: Vec<V> = universe.to_vec();
        vertices.sort();
        vertices.dedup();
        let mut states = vec![PumpState::Start];
        for v in &vertices {
            for colors in Colors::all() {
                states.push(PumpState::Remember { vertex: v.clone(), colors });
            }
        }
        for v in &vertices {
            for colors in Colors::all() {
                states.push(PumpState::AwaitRepeat { vertex: v.clone(), colors });
            }
        }
        states.push(PumpState::Done { r_prime: false });
        states.push(PumpState::Done { r_prime: true });
        let index = states.iter().cloned().zip(0..).collect();
        PumpAutomaton { vertices, states, index }
    }

    /// The vertex universe the automaton was built over, sorted.
    pub fn universe(&self) -> &[V] {
        &self.vertices
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// The start state has index 0.
    pub fn initial(&self) -> usize {
        0
    }

    pub fn state(&self, id: usize) -> &PumpState<V> {
        &self.states[id]
    }

    pub fn states(&self) -> &[PumpState<V>] {
        &self.states
    }

    pub fn id_of(&self, state: &PumpState<V>) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Successor states on reading the letter `(vertex, colors)`.
    pub fn successors(&self, state: &PumpState<V>, vertex: &V, colors: Colors) -> Vec<PumpState<V>> {
        match state {
            PumpState::Start => {
                vec![PumpState::Remember { vertex: vertex.clone(), colors }]
            }
            PumpState::Remember { vertex: anchor, colors: anchored } => {
                if !anchored.same_r_prime(colors) {
                    return Vec::new();
                }
                let mut out = vec![
                    state.clone(),
                    PumpState::Remember { vertex: vertex.clone(), colors },
                ];
                if !anchored.same_r(colors) {
                    out.push(PumpState::AwaitRepeat { vertex: anchor.clone(), colors });
                }
                out.sort();
                out.dedup();
                out
            }
            PumpState::AwaitRepeat { vertex: anchor, colors: flipped } => {
                if !flipped.same_r_prime(colors) {
                    Vec::new()
                } else if vertex == anchor {
                    vec![PumpState::Done { r_prime: flipped.r_prime }]
                } else {
                    vec![state.clone()]
                }
            }
            PumpState::Done { r_prime } => {
                if colors.r_prime == *r_prime {
                    vec![state.clone()]
                } else {
                    vec![PumpState::Remember { vertex: vertex.clone(), colors }]
                }
            }
        }
    }

    /// Successor state ids; requires every successor to be a state of this
    /// automaton, which holds whenever `vertex` is drawn from the universe.
    pub fn successor_ids(&self, state_id: usize, vertex: &V, colors: Colors) -> Vec<usize> {
        let state = self.states[state_id].clone();
        self.successors(&state, vertex, colors)
            .iter()
            .map(|s| self.id_of(s).expect("successor leaves the declared vertex universe"))
            .collect()
    }

    /// Whether the automaton has an infinite run on the ultimately periodic
    /// letter sequence `stem · cycle^ω`. Since every state is accepting this
    /// decides language membership.
    pub fn has_infinite_run(&self, stem: &[(V, Colors)], cycle: &[(V, Colors)]) -> bool {
        assert!(!cycle.is_empty(), "the cycle must be nonempty");
        let step = |current: &Vec<PumpState<V>>, letter: &(V, Colors)| -> Vec<PumpState<V>> {
            let mut next: Vec<PumpState<V>> = current
                .iter()
                .flat_map(|s| self.successors(s, &letter.0, letter.1))
                .collect();
            next.sort();
            next.dedup();
            next
        };
        let mut current = vec![PumpState::Start];
        for letter in stem {
            current = step(&current, letter);
            if current.is_empty() {
                return false;
            }
        }
        // The reachable-state sets along the cycle are eventually periodic;
        // an infinite run exists exactly when they never become empty.
        let mut seen = std::collections::BTreeSet::new();
        loop {
            if !seen.insert(current.clone()) {
                return true;
            }
            for letter in cycle {
                current = step(&current, letter);
                if current.is_empty() {
                    return false;
                }
            }
        }
    }
}
