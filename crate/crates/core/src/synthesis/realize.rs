//! Realizability drivers: diagonal bound schedules and counterexample-guided
//! candidate search, asynchronous against assume-guarantee pairs and
//! synchronous against prompt formulas through the color reduction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::arch::{add_color_output, compose, Architecture, Mode, TransitionSystem};
use crate::automata::{ltl_to_nba, Letter, Nba};
use crate::coloring::{colorize, ColorProp};
use crate::logic::Formula;
use crate::sat::{Lit, Solver, Var};
use crate::synthesis::encode::Unknowns;
use crate::synthesis::mc::McContext;
use crate::synthesis::{AGSpec, SynthesisError, Verdict, ASSUMPTION_COLOR};

/// All bound vectors for `processes` many processes with component sum up to
/// `max_sum`, in nondecreasing-sum order with lexicographic tie breaking.
pub fn bound_schedule(processes: usize, max_sum: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if processes == 0 {
        return out;
    }
    for sum in processes..=max_sum {
        compositions(sum, processes, &mut Vec::new(), &mut out);
    }
    out
}

fn compositions(sum: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(sum);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 1..=sum - (parts - 1) {
        prefix.push(first);
        compositions(sum - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

fn decode_mixed(mut id: usize, sizes: &[usize]) -> Vec<usize> {
    let mut locals = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        locals[i] = id % sizes[i];
        id /= sizes[i];
    }
    locals
}

fn project_mask(input: u64, global: &[String], local: &[String]) -> u64 {
    let mut mask = 0;
    for (i, name) in local.iter().enumerate() {
        let g = global
            .iter()
            .position(|n| n == name)
            .expect("local inputs are environment outputs");
        if input >> g & 1 == 1 {
            mask |= 1 << i;
        }
    }
    mask
}

/// Incremental candidate enumeration at one bound vector: a solver over the
/// shared unknown layout, refined by blocking clauses from counterexamples.
struct Search {
    solver: Solver,
    unknowns: Unknowns,
}

impl Search {
    fn new(a: &Architecture, bounds: &[usize]) -> Result<Self, SynthesisError> {
        let mut solver = Solver::new();
        let unknowns = {
            let mut alloc = |_meaning: String| solver.new_var();
            Unknowns::new(a, bounds, &mut alloc)?
        };
        for clause in unknowns.exactly_one() {
            solver.add_clause(&clause);
        }
        Ok(Search { solver, unknowns })
    }

    fn next_candidate(&mut self) -> Option<(Vec<bool>, BTreeMap<String, TransitionSystem>)> {
        if !self.solver.solve() {
            return None;
        }
        let model: Vec<bool> =
            (0..self.solver.num_vars()).map(|i| self.solver.value(Var::from_index(i))).collect();
        let implementations = self.unknowns.decode(&model);
        Some((model, implementations))
    }

    /// Excludes every candidate that reproduces the counterexample run. The
    /// run is determined by the transition choices taken on it and the
    /// labels of the local states it visits, so a candidate agreeing on
    /// those unknowns admits the same run and is violated as well.
    fn block(&mut self, model: &[bool], steps: &[(usize, u64)], composed_inputs: &[String]) {
        let sizes: Vec<usize> = self.unknowns.processes.iter().map(|p| p.bound).collect();
        let mut lits = BTreeSet::new();
        for &(state, input) in steps {
            let locals = decode_mixed(state, &sizes);
            for (pi, p) in self.unknowns.processes.iter().enumerate() {
                let local = project_mask(input, composed_inputs, &p.inputs);
                for &v in &p.labels[locals[pi]] {
                    lits.insert(if model[v.index()] { Lit::neg(v) } else { Lit::pos(v) });
                }
                if p.moves(local) {
                    let row = &p.delta[&(locals[pi], local)];
                    let to =
                        row.iter().position(|v| model[v.index()]).expect("rows are one-hot");
                    lits.insert(Lit::neg(row[to]));
                }
            }
        }
        let clause: Vec<Lit> = lits.into_iter().collect();
        self.solver.add_clause(&clause);
    }
}

/// Searches implementations of an asynchronous architecture against an
/// assume-guarantee pair, trying bound vectors in schedule order. Returns
/// one verdict per tried vector and stops after the first realization; every
/// reported realization has passed the model checker on the composed system.
pub fn realize_async_ag(
    a: &Architecture,
    spec: &AGSpec,
    max_sum: usize,
) -> Result<Vec<Verdict>, SynthesisError> {
    if a.mode() != Mode::Async {
        return Err(SynthesisError::NotAsync);
    }
    let inputs: Vec<String> = a.env_outputs().iter().cloned().collect();
    let outputs: Vec<String> = a
        .processes()
        .iter()
        .flat_map(|p| p.outputs.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ctx = McContext::new(&inputs, &outputs, spec)?;
    let mut verdicts = Vec::new();
    for bounds in bound_schedule(a.processes().len(), max_sum) {
        let mut search = Search::new(a, &bounds)?;
        loop {
            let Some((model, implementations)) = search.next_candidate() else {
                verdicts.push(Verdict::NoModelAtBound(bounds.clone()));
                break;
            };
            let composed = compose(a, &implementations)?;
            match ctx.check(&composed)? {
                Verdict::Holds => {
                    verdicts.push(Verdict::Realized {
                        implementations,
                        bounds,
                        prompt_bound: None,
                    });
                    return Ok(verdicts);
                }
                Verdict::Violated(witness) => {
                    let steps: Vec<(usize, u64)> = witness
                        .stem
                        .iter()
                        .chain(&witness.cycle)
                        .map(|s| (s.state, s.input))
                        .collect();
                    search.block(&model, &steps, composed.inputs());
                }
                _ => unreachable!("model checking yields holds or violated"),
            }
        }
    }
    Ok(verdicts)
}

/// Searches implementations of a synchronous architecture against a prompt
/// formula. Prompt eventualities are reduced to plain LTL by making `host`
/// (default: the first process) emit the color; prompt-free formulas are
/// synthesized directly. A realization reports the uniform prompt bound
/// certified by the color structure and must pass an independent model check
/// of the color-free system.
pub fn realize_sync(
    a: &Architecture,
    goal: &Formula,
    host: Option<&str>,
    max_sum: usize,
) -> Result<Vec<Verdict>, SynthesisError> {
    if a.mode() != Mode::Sync {
        return Err(SynthesisError::NotSync);
    }
    let host = match host {
        Some(name) => {
            if !a.processes().iter().any(|p| p.name == name) {
                return Err(SynthesisError::NoSuchProcess(name.to_string()));
            }
            name.to_string()
        }
        None => a.processes()[0].name.clone(),
    };
    let uses_color = goal.has_prompt();
    let (arch, target) = if uses_color {
        let r = ColorProp::new(ASSUMPTION_COLOR);
        if a.all_props().contains(r.name()) {
            return Err(SynthesisError::ColorClash(r.name().to_string()));
        }
        (add_color_output(a, &host, r.name())?, colorize(goal, &r)?)
    } else {
        (a.clone(), goal.clone())
    };
    let props: Vec<String> = arch.all_props().into_iter().collect();
    let negated = target.negated().expect("synthesis targets are prompt-free");
    let bad = ltl_to_nba(&negated, &props)?;

    let mut verdicts = Vec::new();
    for bounds in bound_schedule(arch.processes().len(), max_sum) {
        let mut search = Search::new(&arch, &bounds)?;
        loop {
            let Some((model, implementations)) = search.next_candidate() else {
                verdicts.push(Verdict::NoModelAtBound(bounds.clone()));
                break;
            };
            let composed = compose(&arch, &implementations)?;
            match bad_lasso(&composed, &bad, &props) {
                Some(steps) => search.block(&model, &steps, composed.inputs()),
                None => {
                    let prompt_bound = if uses_color {
                        let block = max_r_block(&composed, ASSUMPTION_COLOR)
                            .ok_or(SynthesisError::SelfCheckFailed)?;
                        Some(2 * block)
                    } else {
                        None
                    };
                    let plain = if uses_color {
                        strip_output(&composed, ASSUMPTION_COLOR)
                    } else {
                        composed
                    };
                    let check = McContext::new(
                        plain.inputs(),
                        plain.outputs(),
                        &AGSpec::new(Formula::True, goal.clone()),
                    )?
                    .check(&plain)?;
                    if check != Verdict::Holds {
                        return Err(SynthesisError::SelfCheckFailed);
                    }
                    verdicts.push(Verdict::Realized {
                        implementations,
                        bounds,
                        prompt_bound,
                    });
                    return Ok(verdicts);
                }
            }
        }
    }
    Ok(verdicts)
}

/// Accepting lasso of the product of a closed system with a Büchi automaton
/// over `props`, as (system state, input mask) steps of its stem and cycle;
/// `None` when the product is empty of accepting lassos.
fn bad_lasso(
    system: &TransitionSystem,
    bad: &Nba,
    props: &[String],
) -> Option<Vec<(usize, u64)>> {
    let in_pos: Vec<usize> = system
        .inputs()
        .iter()
        .map(|i| props.iter().position(|p| p == i).expect("system inputs are spec props"))
        .collect();
    let out_pos: Vec<usize> = system
        .outputs()
        .iter()
        .map(|o| props.iter().position(|p| p == o).expect("system outputs are spec props"))
        .collect();
    let masks = 1u64 << system.inputs().len();
    let letter_of = |state: usize, mask: u64| {
        let mut val = 0u64;
        for (i, &p) in in_pos.iter().enumerate() {
            if mask >> i & 1 == 1 {
                val |= 1 << p;
            }
        }
        let label = system.label(state);
        for (i, &p) in out_pos.iter().enumerate() {
            if label >> i & 1 == 1 {
                val |= 1 << p;
            }
        }
        Letter::plain(val)
    };

    let states = system.state_count() * bad.state_count();
    let id = |x: usize, q: usize| x * bad.state_count() + q;
    let mut edges: Vec<Vec<(u64, usize)>> = vec![Vec::new(); states];
    for x in 0..system.state_count() {
        for mask in 0..masks {
            let letter = letter_of(x, mask);
            let x2 = system.step(x, mask);
            for q in 0..bad.state_count() {
                for &(l, q2) in bad.transitions_from(q) {
                    if l == letter {
                        edges[id(x, q)].push((mask, id(x2, q2)));
                    }
                }
            }
        }
    }

    let start = id(system.initial(), bad.initial());
    let reach_from = |source: usize| -> Vec<Option<(usize, u64)>> {
        let mut parent: Vec<Option<(usize, u64)>> = vec![None; states];
        let mut seen = vec![false; states];
        let mut queue = VecDeque::from([source]);
        seen[source] = true;
        while let Some(v) = queue.pop_front() {
            for &(mask, to) in &edges[v] {
                if !seen[to] {
                    seen[to] = true;
                    parent[to] = Some((v, mask));
                    queue.push_back(to);
                }
            }
        }
        parent
    };
    let unwind = |parent: &[Option<(usize, u64)>], from: usize, to: usize| {
        let mut path = Vec::new();
        let mut at = to;
        while at != from {
            let (prev, mask) = parent[at].expect("path exists");
            path.push((prev / bad.state_count(), mask));
            at = prev;
        }
        path.reverse();
        path
    };

    let from_start = reach_from(start);
    for f in 0..states {
        if f != start && from_start[f].is_none() {
            continue;
        }
        if !bad.accepting().contains(&(f % bad.state_count())) {
            continue;
        }
        // A cycle through f: an edge v -> f from some v that f reaches.
        let back = reach_from(f);
        let closing = (0..states)
            .filter(|&v| v == f || back[v].is_some())
            .find_map(|v| {
                edges[v].iter().find(|&&(_, to)| to == f).map(|&(mask, _)| (v, mask))
            });
        let Some((v, mask)) = closing else { continue };
        let mut steps = unwind(&from_start, start, f);
        steps.extend(unwind(&back, f, v));
        steps.push((v / bad.state_count(), mask));
        return Some(steps);
    }
    None
}

/// Longest run of equal color values over the reachable part of the system,
/// counted in states; `None` when some reachable cycle never changes color
/// (no finite block bound exists) or the color is not an output.
pub fn max_r_block(system: &TransitionSystem, color: &str) -> Option<usize> {
    let bit = system.outputs().iter().position(|o| o == color)?;
    let masks = 1u64 << system.inputs().len();
    let mut reachable = vec![false; system.state_count()];
    let mut queue = VecDeque::from([system.initial()]);
    reachable[system.initial()] = true;
    while let Some(x) = queue.pop_front() {
        for mask in 0..masks {
            let to = system.step(x, mask);
            if !reachable[to] {
                reachable[to] = true;
                queue.push_back(to);
            }
        }
    }

    // Longest vertex path inside one color class; a cycle means unbounded.
    let mut best = 0usize;
    let mut memo = vec![0usize; system.state_count()];
    let mut active = vec![false; system.state_count()];
    fn longest(
        x: usize,
        system: &TransitionSystem,
        masks: u64,
        class: &dyn Fn(usize) -> bool,
        memo: &mut [usize],
        active: &mut [bool],
    ) -> Option<usize> {
        if memo[x] != 0 {
            return Some(memo[x]);
        }
        if active[x] {
            return None;
        }
        active[x] = true;
        let mut len = 1;
        for mask in 0..masks {
            let to = system.step(x, mask);
            if class(to) {
                len = len.max(1 + longest(to, system, masks, class, memo, active)?);
            }
        }
        active[x] = false;
        memo[x] = len;
        Some(len)
    }
    for value in [false, true] {
        let class = |x: usize| system.label(x) >> bit & 1 == u64::from(value);
        memo.fill(0);
        active.fill(false);
        for x in 0..system.state_count() {
            if reachable[x] && class(x) {
                best = best.max(longest(x, system, masks, &class, &mut memo, &mut active)?);
            }
        }
    }
    Some(best)
}

fn strip_output(system: &TransitionSystem, name: &str) -> TransitionSystem {
    let keep: Vec<(usize, String)> = system
        .outputs()
        .iter()
        .enumerate()
        .filter(|(_, o)| *o != name)
        .map(|(i, o)| (i, o.clone()))
        .collect();
    let masks = 1u64 << system.inputs().len();
    let delta: Vec<Vec<usize>> = (0..system.state_count())
        .map(|x| (0..masks).map(|m| system.step(x, m)).collect())
        .collect();
    let labels: Vec<u64> = (0..system.state_count())
        .map(|x| {
            let mut bits = 0u64;
            for (j, (old, _)) in keep.iter().enumerate() {
                if system.label(x) >> old & 1 == 1 {
                    bits |= 1 << j;
                }
            }
            bits
        })
        .collect();
    TransitionSystem::new(
        system.inputs().to_vec(),
        keep.into_iter().map(|(_, o)| o).collect(),
        system.initial(),
        delta,
        labels,
    )
    .expect("dropping an output preserves well-formedness")
}
