//! Explicit nondeterministic Büchi automata: translation from formulas,
//! lasso membership, the product with the pump automaton, and the dual
//! universal co-Büchi reading.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::automata::pump::PumpAutomaton;
use crate::automata::tableau::{degeneralize, formula_to_gba, simplify};
use crate::graphs::scc::{nontrivial, tarjan_scc};
use crate::graphs::Colors;
use crate::logic::{Formula, UltimatelyPeriodicWord};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("prompt operators have no plain automaton translation, rewrite them away first")]
    PromptOperator,
    #[error("alphabet of {0} propositions is too large")]
    TooManyProps(usize),
    #[error("proposition `{0}` is not part of the alphabet")]
    MissingProp(String),
    #[error("state {0} is out of range")]
    UnknownState(usize),
    #[error("letter uses tag {0} but the automaton declares {1} tags")]
    UnknownTag(usize, usize),
    #[error("vertex-universe mismatch between the pump automaton and the product")]
    VertexUniverseMismatch,
}

/// One explicit letter: a valuation over the automaton's propositions, bit
/// `i` standing for proposition `i`, optionally paired with an external tag
/// such as an implementation state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Letter {
    pub valuation: u64,
    pub tag: Option<usize>,
}

impl Letter {
    pub fn plain(valuation: u64) -> Self {
        Letter { valuation, tag: None }
    }

    pub fn tagged(valuation: u64, tag: usize) -> Self {
        Letter { valuation, tag: Some(tag) }
    }
}

/// An explicit nondeterministic Büchi automaton. `accepting` must be visited
/// infinitely often; when `accepting2` is present it must be as well, giving
/// a generalized condition of index two.
#[derive(Clone, Debug)]
pub struct Nba {
    props: Vec<String>,
    tag_names: Vec<String>,
    state_count: usize,
    initial: usize,
    transitions: Vec<Vec<(Letter, usize)>>,
    accepting: BTreeSet<usize>,
    accepting2: Option<BTreeSet<usize>>,
}

impl Nba {
    pub fn new(
        props: Vec<String>,
        tag_names: Vec<String>,
        state_count: usize,
        initial: usize,
        transition_list: &[(usize, Letter, usize)],
        accepting: BTreeSet<usize>,
        accepting2: Option<BTreeSet<usize>>,
    ) -> Result<Self, AutomatonError> {
        if props.len() > 64 {
            return Err(AutomatonError::TooManyProps(props.len()));
        }
        if initial >= state_count {
            return Err(AutomatonError::UnknownState(initial));
        }
        for set in [Some(&accepting), accepting2.as_ref()].into_iter().flatten() {
            if let Some(&bad) = set.iter().find(|&&q| q >= state_count) {
                return Err(AutomatonError::UnknownState(bad));
            }
        }
        let mut transitions = vec![Vec::new(); state_count];
        for &(src, letter, dst) in transition_list {
            if src >= state_count {
                return Err(AutomatonError::UnknownState(src));
            }
            if dst >= state_count {
                return Err(AutomatonError::UnknownState(dst));
            }
            if let Some(tag) = letter.tag {
                if tag >= tag_names.len() {
                    return Err(AutomatonError::UnknownTag(tag, tag_names.len()));
                }
            }
            transitions[src].push((letter, dst));
        }
        for list in &mut transitions {
            list.sort();
            list.dedup();
        }
        Ok(Nba { props, tag_names, state_count, initial, transitions, accepting, accepting2 })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn tag_names(&self) -> &[String] {
        &self.tag_names
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions_from(&self, state: usize) -> &[(Letter, usize)] {
        &self.transitions[state]
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn accepting2(&self) -> Option<&BTreeSet<usize>> {
        self.accepting2.as_ref()
    }

    /// Encodes a set of proposition names as a valuation over this alphabet.
    pub fn valuation_of(&self, names: &BTreeSet<String>) -> Result<u64, AutomatonError> {
        let mut mask = 0;
        for name in names {
            let pos = self
                .props
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| AutomatonError::MissingProp(name.clone()))?;
            mask |= 1 << pos;
        }
        Ok(mask)
    }

    /// Serializes states and transitions in a line-oriented format:
    /// `state 1 init acc`, then `trans 0 {a,r} 1` with tagged letters
    /// written as `trans 0 {a,r}@x3 1`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for q in 0..self.state_count {
            write!(out, "state {q}").unwrap();
            if q == self.initial {
                out.push_str(" init");
            }
            if self.accepting.contains(&q) {
                out.push_str(" acc");
            }
            if self.accepting2.as_ref().is_some_and(|set| set.contains(&q)) {
                out.push_str(" acc2");
            }
            out.push('\n');
        }
        for (src, list) in self.transitions.iter().enumerate() {
            for (letter, dst) in list {
                let names: Vec<&str> = self
                    .props
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| letter.valuation >> i & 1 == 1)
                    .map(|(_, p)| p.as_str())
                    .collect();
                write!(out, "trans {src} {{{}}}", names.join(",")).unwrap();
                if let Some(tag) = letter.tag {
                    write!(out, "@{}", self.tag_names[tag]).unwrap();
                }
                writeln!(out, " {dst}").unwrap();
            }
        }
        out
    }
}

/// Translates a prompt-free formula into an explicit Büchi automaton over
/// the alphabet `props`, which must cover the formula's atoms, via tableau
/// expansion, pruning and bisimulation folding, and degeneralization.
pub fn ltl_to_nba(formula: &Formula, props: &[String]) -> Result<Nba, AutomatonError> {
    if props.len() > 16 {
        return Err(AutomatonError::TooManyProps(props.len()));
    }
    let gba = simplify(&degeneralize(&formula_to_gba(formula, props)?));
    assert_eq!(gba.accepting.len(), 1, "degeneralization yields a single acceptance set");

    let full = (1u64 << props.len()) - 1;
    let mut transition_list = Vec::new();
    for (src, list) in gba.edges.iter().enumerate() {
        for e in list {
            let free = full & !e.pos & !e.neg;
            let mut sub = free;
            loop {
                transition_list.push((src, Letter::plain(e.pos | sub), e.to));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }
    }
    Nba::new(
        props.to_vec(),
        Vec::new(),
        gba.state_count,
        gba.initial,
        &transition_list,
        gba.accepting[0].clone(),
        None,
    )
}

/// Whether the automaton accepts the ultimately periodic letter sequence
/// `stem · cycle^ω`. Letters must match transitions exactly, tags included.
pub fn nba_accepts_lasso(nba: &Nba, stem: &[Letter], cycle: &[Letter]) -> bool {
    assert!(!cycle.is_empty(), "the cycle must be nonempty");
    let positions = stem.len() + cycle.len();
    let letter_at = |i: usize| if i < stem.len() { stem[i] } else { cycle[i - stem.len()] };
    let next_pos = |i: usize| if i + 1 < positions { i + 1 } else { stem.len() };

    let node = |i: usize, q: usize| i * nba.state_count + q;
    let mut adj = vec![Vec::new(); positions * nba.state_count];
    for i in 0..positions {
        let sigma = letter_at(i);
        for q in 0..nba.state_count {
            for &(letter, q2) in nba.transitions_from(q) {
                if letter == sigma {
                    adj[node(i, q)].push(node(next_pos(i), q2));
                }
            }
        }
    }
    let start = node(0, nba.initial);
    let mut reachable = vec![false; adj.len()];
    reachable[start] = true;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !reachable[w] {
                reachable[w] = true;
                queue.push_back(w);
            }
        }
    }
    let (comp, comp_count) = tarjan_scc(&adj);
    let mut members = vec![Vec::new(); comp_count];
    for v in 0..adj.len() {
        members[comp[v]].push(v);
    }
    (0..comp_count).any(|c| {
        let mem = &members[c];
        reachable[mem[0]]
            && nontrivial(&adj, &comp, mem, c)
            && mem.iter().any(|&v| nba.accepting.contains(&(v % nba.state_count)))
            && nba
                .accepting2
                .as_ref()
                .is_none_or(|set| mem.iter().any(|&v| set.contains(&(v % nba.state_count))))
    })
}

/// Convenience wrapper: reads a word's steps as plain letters over the
/// automaton's alphabet, which must cover the word's propositions.
pub fn nba_accepts_word(nba: &Nba, word: &UltimatelyPeriodicWord) -> Result<bool, AutomatonError> {
    let encode = |n: usize| -> Result<Letter, AutomatonError> {
        let names: BTreeSet<String> =
            word.props().iter().filter(|p| word.holds_at(p, n)).cloned().collect();
        Ok(Letter::plain(nba.valuation_of(&names)?))
    };
    let stem: Vec<Letter> = (0..word.prefix_len()).map(encode).collect::<Result<_, _>>()?;
    let cycle: Vec<Letter> = (word.prefix_len()..word.prefix_len() + word.loop_len())
        .map(encode)
        .collect::<Result<_, _>>()?;
    Ok(nba_accepts_lasso(nba, &stem, &cycle))
}

/// The product of a specification automaton with a pump automaton over the
/// vertex universe `X × Q`, where `X` is an implementation's state set given
/// by its size. Letters of the product pair the specification letter with an
/// implementation state tag; the pump component reads the current pair
/// `(x, q)` together with the letter's colors.
pub fn product_spec_pump(
    spec: &Nba,
    pump: &PumpAutomaton<(usize, usize)>,
    system_states: usize,
    r: &str,
    r_prime: &str,
) -> Result<Nba, AutomatonError> {
    assert!(system_states > 0, "the implementation needs at least one state");
    let color_bit = |name: &str| -> Result<u64, AutomatonError> {
        spec.props()
            .iter()
            .position(|p| p == name)
            .map(|i| 1u64 << i)
            .ok_or_else(|| AutomatonError::MissingProp(name.to_string()))
    };
    let r_bit = color_bit(r)?;
    let rp_bit = color_bit(r_prime)?;

    let universe: Vec<(usize, usize)> =
        (0..system_states).flat_map(|x| (0..spec.state_count()).map(move |q| (x, q))).collect();
    if pump.universe() != universe {
        return Err(AutomatonError::VertexUniverseMismatch);
    }
    let s = pump.state_count();

    let id = |q: usize, state: usize| q * s + state;
    let mut transition_list = Vec::new();
    for q in 0..spec.state_count() {
        for &(letter, q2) in spec.transitions_from(q) {
            let colors = Colors::new(letter.valuation & r_bit != 0, letter.valuation & rp_bit != 0);
            for x in 0..system_states {
                let tagged = Letter::tagged(letter.valuation, x);
                for state in 0..s {
                    for s2 in pump.successor_ids(state, &(x, q), colors) {
                        transition_list.push((id(q, state), tagged, id(q2, s2)));
                    }
                }
            }
        }
    }
    let lift = |set: &BTreeSet<usize>| set.iter().flat_map(|&q| (0..s).map(move |p| id(q, p))).collect();
    Nba::new(
        spec.props().to_vec(),
        (0..system_states).map(|x| format!("x{x}")).collect(),
        spec.state_count() * s,
        id(spec.initial(), pump.initial()),
        &transition_list,
        lift(spec.accepting()),
        spec.accepting2().map(lift),
    )
}

/// A universal co-Büchi reading of a Büchi automaton: the very same
/// structure, reinterpreted so that a word is good when no run visits the
/// accepting states infinitely often. `directions` lists the propositions
/// chosen by the environment, `labels` those chosen by the implementation.
#[derive(Clone, Debug)]
pub struct UcwView<'a> {
    pub automaton: &'a Nba,
    pub directions: Vec<String>,
    pub labels: Vec<String>,
}

impl UcwView<'_> {
    /// Universal acceptance: the lasso is good exactly when the underlying
    /// automaton does not accept it.
    pub fn accepts_lasso(&self, stem: &[Letter], cycle: &[Letter]) -> bool {
        !nba_accepts_lasso(self.automaton, stem, cycle)
    }
}

/// Reinterprets `nba` as a universal co-Büchi automaton, splitting its
/// alphabet into environment directions and implementation labels.
pub fn dualize_to_ucw<'a>(nba: &'a Nba, directions: &[String]) -> Result<UcwView<'a>, AutomatonError> {
    for name in directions {
        if !nba.props().contains(name) {
            return Err(AutomatonError::MissingProp(name.clone()));
        }
    }
    let labels = nba.props().iter().filter(|p| !directions.contains(p)).cloned().collect();
    Ok(UcwView { automaton: nba, directions: directions.to_vec(), labels })
}
