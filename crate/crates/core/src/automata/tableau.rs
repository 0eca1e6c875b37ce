//! Tableau expansion from formulas to generalized Büchi automata with
//! guarded transitions, plus the simplification and degeneralization passes
//! shared by the public translation and the model checker.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::automata::AutomatonError;
use crate::graphs::scc::{nontrivial, tarjan_scc};
use crate::logic::Formula;

/// A transition guard: the letter must contain every proposition in `pos`
/// and none in `neg`. Bits index into the automaton's proposition list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct GuardedEdge {
    pub pos: u64,
    pub neg: u64,
    pub to: usize,
}

impl GuardedEdge {
    pub fn admits(&self, letter: u64) -> bool {
        letter & self.pos == self.pos && letter & self.neg == 0
    }
}

/// A generalized Büchi automaton with guarded transitions. A run is
/// accepting when it visits every set in `accepting` infinitely often.
#[derive(Clone, Debug)]
pub(crate) struct GuardedGba {
    pub props: Vec<String>,
    pub state_count: usize,
    pub initial: usize,
    pub edges: Vec<Vec<GuardedEdge>>,
    pub accepting: Vec<BTreeSet<usize>>,
}

/// A fixed-width bit set over closure-formula indices. Tableau nodes are
/// cloned at every disjunctive split, so set operations must stay cheap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(words: usize) -> Self {
        Bits(vec![0; words])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 != 0
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn union_with(&mut self, other: &Bits) {
        for (w, word) in self.0.iter_mut().zip(&other.0) {
            *w |= word;
        }
    }

    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let low = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + low)
            })
        })
    }
}

/// Translates a prompt-free formula in negation normal form into a guarded
/// generalized Büchi automaton over the given proposition list, which must
/// cover the formula's atoms.
pub(crate) fn formula_to_gba(formula: &Formula, props: &[String]) -> Result<GuardedGba, AutomatonError> {
    if formula.has_prompt() {
        return Err(AutomatonError::PromptOperator);
    }
    let props: Vec<String> = props.to_vec();
    if props.len() > 64 {
        return Err(AutomatonError::TooManyProps(props.len()));
    }
    for atom in formula.atoms() {
        if !props.contains(&atom) {
            return Err(AutomatonError::MissingProp(atom));
        }
    }
    let bit = |name: &str| 1u64 << props.iter().position(|p| p == name).unwrap();

    let closure: Vec<&Formula> = formula.subformulas();
    let index: BTreeMap<&Formula, usize> = closure.iter().copied().zip(0..).collect();
    let id_of = |f: &Formula| index[f];
    let root = id_of(formula);
    let words = closure.len().div_ceil(64).max(1);
    let mut relevant = Bits::empty(words);
    for f in &closure {
        if let Formula::Until(_, b) = f {
            relevant.set(id_of(b));
        }
    }

    // One disjunct of a formula's cover: satisfy the literal constraints
    // `pos`/`neg` now and the `next` obligations one step later. `old`
    // records the discharged until right-hand sides, the only part of the
    // expansion history that acceptance needs.
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct Pair {
        old: Bits,
        next: Bits,
        pos: u64,
        neg: u64,
    }

    // A disjunct loses to one with a weaker guard, fewer obligations, and at
    // least the same discharges; dropping it preserves the language.
    fn reduce(mut pairs: Vec<Pair>) -> Vec<Pair> {
        pairs.sort();
        pairs.dedup();
        let dominated = |p: &Pair| {
            pairs.iter().any(|q| {
                q != p
                    && q.pos & !p.pos == 0
                    && q.neg & !p.neg == 0
                    && q.next.is_subset(&p.next)
                    && p.old.is_subset(&q.old)
            })
        };
        let kept: Vec<Pair> = pairs.iter().filter(|p| !dominated(p)).cloned().collect();
        kept
    }

    fn combine(left: &[Pair], right: &[Pair]) -> Vec<Pair> {
        let mut out = Vec::new();
        for a in left {
            for b in right {
                let pos = a.pos | b.pos;
                let neg = a.neg | b.neg;
                if pos & neg != 0 {
                    continue;
                }
                let mut old = a.old.clone();
                old.union_with(&b.old);
                let mut next = a.next.clone();
                next.union_with(&b.next);
                out.push(Pair { old, next, pos, neg });
            }
        }
        reduce(out)
    }

    let unit = |id: usize, pos: u64, neg: u64| {
        let mut old = Bits::empty(words);
        if relevant.get(id) {
            old.set(id);
        }
        Pair { old, next: Bits::empty(words), pos, neg }
    };

    // Covers are computed children first; subformulas are strictly smaller.
    let mut order: Vec<usize> = (0..closure.len()).collect();
    order.sort_by_key(|&i| closure[i].size());
    let mut covers: Vec<Vec<Pair>> = (0..closure.len()).map(|_| Vec::new()).collect();
    for id in order {
        let mut pairs = match closure[id] {
            Formula::False => Vec::new(),
            Formula::True => vec![unit(id, 0, 0)],
            Formula::Atom(name) => vec![unit(id, bit(name), 0)],
            Formula::NegAtom(name) => vec![unit(id, 0, bit(name))],
            Formula::And(a, b) => combine(&covers[id_of(a)], &covers[id_of(b)]),
            Formula::Or(a, b) => {
                let mut v = covers[id_of(a)].clone();
                v.extend(covers[id_of(b)].iter().cloned());
                v
            }
            Formula::Next(a) => {
                let mut pair = unit(id, 0, 0);
                pair.next.set(id_of(a));
                vec![pair]
            }
            Formula::Until(a, b) => {
                let mut v = covers[id_of(b)].clone();
                v.extend(covers[id_of(a)].iter().cloned().map(|mut p| {
                    p.next.set(id);
                    p
                }));
                v
            }
            Formula::Release(a, b) => {
                let mut v = combine(&covers[id_of(a)], &covers[id_of(b)]);
                v.extend(covers[id_of(b)].iter().cloned().map(|mut p| {
                    p.next.set(id);
                    p
                }));
                v
            }
            Formula::PromptEventually(_) => unreachable!("prompt operators were rejected above"),
        };
        if relevant.get(id) {
            for pair in &mut pairs {
                pair.old.set(id);
            }
        }
        covers[id] = reduce(pairs);
    }

    // State 0 owes the root formula; every other state is one cover pair.
    let mut root_obligation = Bits::empty(words);
    root_obligation.set(root);
    let mut done: BTreeMap<(Bits, Bits), usize> = BTreeMap::new();
    let mut obligations: Vec<Bits> = vec![root_obligation];
    let mut olds: Vec<Bits> = vec![Bits::empty(words)];
    let mut edges: Vec<Vec<GuardedEdge>> = vec![Vec::new()];
    let mut cursor = 0;
    while cursor < obligations.len() {
        let mut expansion = vec![Pair {
            old: Bits::empty(words),
            next: Bits::empty(words),
            pos: 0,
            neg: 0,
        }];
        for member in obligations[cursor].clone().ones() {
            expansion = combine(&expansion, &covers[member]);
            if expansion.is_empty() {
                break;
            }
        }
        for pair in expansion {
            let key = (pair.old.clone(), pair.next.clone());
            let to = match done.get(&key) {
                Some(&id) => id,
                None => {
                    let id = obligations.len();
                    done.insert(key, id);
                    obligations.push(pair.next);
                    olds.push(pair.old);
                    edges.push(Vec::new());
                    id
                }
            };
            edges[cursor].push(GuardedEdge { pos: pair.pos, neg: pair.neg, to });
        }
        edges[cursor].sort();
        edges[cursor].dedup();
        cursor += 1;
    }
    let state_count = obligations.len();

    // A state fulfils an until when it does not owe it for the next step or
    // discharges its right-hand side now.
    let mut accepting = Vec::new();
    for (u, f) in closure.iter().enumerate() {
        if let Formula::Until(_, b) = f {
            let b_id = id_of(b);
            let set: BTreeSet<usize> = (0..state_count)
                .filter(|&s| !obligations[s].get(u) || olds[s].get(b_id))
                .collect();
            accepting.push(set);
        }
    }
    if accepting.is_empty() {
        accepting.push((0..state_count).collect());
    }

    Ok(simplify(&GuardedGba { props, state_count, initial: 0, edges, accepting }))
}

/// Removes unreachable states and states from which no live component is
/// reachable, then folds bisimilar states together. A component is live when
/// it is nontrivial and meets every acceptance set.
pub(crate) fn simplify(gba: &GuardedGba) -> GuardedGba {
    let trimmed = prune(gba);
    quotient(&trimmed)
}

fn prune(gba: &GuardedGba) -> GuardedGba {
    let n = gba.state_count;
    let adj: Vec<Vec<usize>> = gba
        .edges
        .iter()
        .map(|list| {
            let mut targets: Vec<usize> = list.iter().map(|e| e.to).collect();
            targets.sort();
            targets.dedup();
            targets
        })
        .collect();

    let mut reachable = vec![false; n];
    reachable[gba.initial] = true;
    let mut queue = VecDeque::from([gba.initial]);
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
    for v in 0..n {
        members[comp[v]].push(v);
    }
    let live = |c: usize| {
        nontrivial(&adj, &comp, &members[c], c)
            && gba.accepting.iter().all(|set| members[c].iter().any(|v| set.contains(v)))
    };
    let mut useful = vec![false; n];
    let mut queue = VecDeque::new();
    for c in 0..comp_count {
        if live(c) {
            for &v in &members[c] {
                useful[v] = true;
                queue.push_back(v);
            }
        }
    }
    let mut radj = vec![Vec::new(); n];
    for v in 0..n {
        for &w in &adj[v] {
            radj[w].push(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &radj[v] {
            if !useful[u] {
                useful[u] = true;
                queue.push_back(u);
            }
        }
    }

    let keep: Vec<usize> = (0..n).filter(|&v| reachable[v] && (useful[v] || v == gba.initial)).collect();
    let mut renumber = vec![usize::MAX; n];
    for (new, &old) in keep.iter().enumerate() {
        renumber[old] = new;
    }
    let edges = keep
        .iter()
        .map(|&old| {
            gba.edges[old]
                .iter()
                .filter(|e| renumber[e.to] != usize::MAX && useful[e.to])
                .map(|e| GuardedEdge { pos: e.pos, neg: e.neg, to: renumber[e.to] })
                .collect()
        })
        .collect();
    let accepting = gba
        .accepting
        .iter()
        .map(|set| set.iter().filter_map(|&v| keep.binary_search(&v).ok()).collect())
        .collect();
    GuardedGba {
        props: gba.props.clone(),
        state_count: keep.len(),
        initial: renumber[gba.initial],
        edges,
        accepting,
    }
}

/// Partition refinement over explicit letters; skipped when the alphabet is
/// too large to enumerate.
fn quotient(gba: &GuardedGba) -> GuardedGba {
    if gba.props.len() > 10 {
        return gba.clone();
    }
    let n = gba.state_count;
    let letters: Vec<u64> = (0..(1u64 << gba.props.len())).collect();

    let acc_signature = |v: usize| -> Vec<bool> { gba.accepting.iter().map(|set| set.contains(&v)).collect() };
    let mut class: Vec<usize> = {
        let mut sigs: Vec<Vec<bool>> = (0..n).map(acc_signature).collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        sigs.drain(..).map(|s| distinct.binary_search(&s).unwrap()).collect()
    };

    loop {
        let signature = |v: usize| -> (usize, Vec<BTreeSet<usize>>) {
            let per_letter = letters
                .iter()
                .map(|&sigma| {
                    gba.edges[v]
                        .iter()
                        .filter(|e| e.admits(sigma))
                        .map(|e| class[e.to])
                        .collect()
                })
                .collect();
            (class[v], per_letter)
        };
        let sigs: Vec<_> = (0..n).map(signature).collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
        // The signature embeds the current class, so refinement only ever
        // splits classes; an unchanged count means a fixed point.
        let stable = distinct.len() == class.iter().collect::<BTreeSet<_>>().len();
        class = next;
        if stable {
            break;
        }
    }

    let class_count = class.iter().max().map_or(0, |m| m + 1);
    // Renumber classes by smallest member so the result is independent of
    // refinement order.
    let mut order: Vec<usize> = (0..class_count).collect();
    let min_member = |c: usize| (0..n).find(|&v| class[v] == c).unwrap();
    order.sort_by_key(|&c| min_member(c));
    let mut rank = vec![0; class_count];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    let class: Vec<usize> = class.iter().map(|&c| rank[c]).collect();

    let mut edges: Vec<BTreeSet<GuardedEdge>> = vec![BTreeSet::new(); class_count];
    for v in 0..n {
        for e in &gba.edges[v] {
            edges[class[v]].insert(GuardedEdge { pos: e.pos, neg: e.neg, to: class[e.to] });
        }
    }
    let accepting = gba
        .accepting
        .iter()
        .map(|set| set.iter().map(|&v| class[v]).collect())
        .collect();
    GuardedGba {
        props: gba.props.clone(),
        state_count: class_count,
        initial: class[gba.initial],
        edges: edges.into_iter().map(|s| s.into_iter().collect()).collect(),
        accepting,
    }
}

/// Collapses the generalized acceptance sets into a single one with the
/// counter construction: states become `(state, level)` pairs, the level
/// advances past each satisfied set in turn, and completing a sweep marks
/// acceptance.
pub(crate) fn degeneralize(gba: &GuardedGba) -> GuardedGba {
    let m = gba.accepting.len();
    if m == 1 {
        return gba.clone();
    }
    let advance = |state: usize, level: usize| -> usize {
        if level == m - 1 && gba.accepting[m - 1].contains(&state) {
            0
        } else if gba.accepting[level].contains(&state) {
            level + 1
        } else {
            level
        }
    };
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let start = (gba.initial, 0);
    ids.insert(start, 0);
    order.push(start);
    queue.push_back(start);
    let mut edges: Vec<Vec<GuardedEdge>> = vec![Vec::new()];
    while let Some((state, level)) = queue.pop_front() {
        let from = ids[&(state, level)];
        let next_level = advance(state, level);
        for e in &gba.edges[state] {
            let target = (e.to, next_level);
            let to = *ids.entry(target).or_insert_with(|| {
                order.push(target);
                edges.push(Vec::new());
                queue.push_back(target);
                order.len() - 1
            });
            edges[from].push(GuardedEdge { pos: e.pos, neg: e.neg, to });
        }
    }
    for list in &mut edges {
        list.sort();
        list.dedup();
    }
    let accepting: BTreeSet<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, &(state, level))| level == m - 1 && gba.accepting[m - 1].contains(&state))
        .map(|(id, _)| id)
        .collect();
    GuardedGba {
        props: gba.props.clone(),
        state_count: order.len(),
        initial: 0,
        edges,
        accepting: vec![accepting],
    }
}

