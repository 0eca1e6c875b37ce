//! Propositional bounded synthesis: one-hot transition and labeling unknowns
//! per process, plus a ranking annotation over the product of the error
//! automaton and the pump automaton, lowered to CNF with lexicographic
//! comparators.

use std::collections::BTreeMap;

use crate::arch::{ArchError, Architecture, Mode, TransitionSystem};
use crate::automata::{dualize_to_ucw, ltl_to_nba, product_spec_pump, Letter, PumpAutomaton};
use crate::coloring::{colorize, colorize_neg, ColorProp};
use crate::logic::Formula;
use crate::sat::{Lit, Solver, Var};
use crate::synthesis::{AGSpec, SynthesisError, ASSUMPTION_COLOR, GUARANTEE_COLOR};

/// One process's solver unknowns: a one-hot successor choice per (state,
/// scheduled input letter) and one labeling bit per (state, output).
/// Unscheduled letters have no variables; they decode to self loops.
pub(crate) struct ProcessVars {
    pub name: String,
    pub bound: usize,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    sched_bit: Option<usize>,
    stutters: bool,
    pub delta: BTreeMap<(usize, u64), Vec<Var>>,
    pub labels: Vec<Vec<Var>>,
}

impl ProcessVars {
    /// Whether a local input letter lets this process move. Synchronous
    /// processes always move; asynchronous ones only on their scheduling bit.
    pub fn moves(&self, local_mask: u64) -> bool {
        !self.stutters || self.sched_bit.is_some_and(|b| local_mask >> b & 1 == 1)
    }
}

/// The complete unknown layout for one bound vector, shared between the
/// monolithic encoding and the candidate-search realizability loop.
pub(crate) struct Unknowns {
    pub processes: Vec<ProcessVars>,
}

impl Unknowns {
    /// Allocates variables through `alloc` (called once per fresh variable
    /// with a printable meaning) in a fixed deterministic order.
    pub fn new(
        a: &Architecture,
        bounds: &[usize],
        alloc: &mut impl FnMut(String) -> Var,
    ) -> Result<Self, SynthesisError> {
        if bounds.len() != a.processes().len() {
            return Err(SynthesisError::BoundArity {
                expected: a.processes().len(),
                found: bounds.len(),
            });
        }
        if bounds.contains(&0) {
            return Err(SynthesisError::ZeroBound);
        }
        let stutters = a.mode() == Mode::Async;
        let mut processes = Vec::new();
        for (p, &bound) in a.processes().iter().zip(bounds) {
            for prop in &p.inputs {
                if !a.env_outputs().contains(prop) {
                    return Err(ArchError::UnsupportedRouting {
                        process: p.name.clone(),
                        prop: prop.clone(),
                    }
                    .into());
                }
            }
            let inputs: Vec<String> = p.inputs.iter().cloned().collect();
            let outputs: Vec<String> = p.outputs.iter().cloned().collect();
            let sched = Architecture::sched_prop(&p.name);
            let sched_bit = inputs.iter().position(|i| *i == sched);
            let mut vars = ProcessVars {
                name: p.name.clone(),
                bound,
                inputs,
                outputs,
                sched_bit,
                stutters,
                delta: BTreeMap::new(),
                labels: Vec::new(),
            };
            for x in 0..bound {
                for mask in 0..1u64 << vars.inputs.len() {
                    if !vars.moves(mask) {
                        continue;
                    }
                    let row: Vec<Var> = (0..bound)
                        .map(|to| alloc(format!("delta {} {} {} {}", vars.name, x, mask, to)))
                        .collect();
                    vars.delta.insert((x, mask), row);
                }
                let row: Vec<Var> = vars
                    .outputs
                    .iter()
                    .map(|o| alloc(format!("label {} {} {}", vars.name, x, o)))
                    .collect();
                vars.labels.push(row);
            }
            processes.push(vars);
        }
        Ok(Unknowns { processes })
    }

    /// Clauses making every one-hot successor row pick exactly one state.
    pub fn exactly_one(&self) -> Vec<Vec<Lit>> {
        let mut clauses = Vec::new();
        for p in &self.processes {
            for row in p.delta.values() {
                clauses.push(row.iter().map(|&v| Lit::pos(v)).collect());
                for (i, &v) in row.iter().enumerate() {
                    for &w in &row[i + 1..] {
                        clauses.push(vec![Lit::neg(v), Lit::neg(w)]);
                    }
                }
            }
        }
        clauses
    }

    /// Reads one implementation per process out of a model.
    pub fn decode(&self, model: &[bool]) -> BTreeMap<String, TransitionSystem> {
        let mut out = BTreeMap::new();
        for p in &self.processes {
            let width = 1u64 << p.inputs.len();
            let mut delta = Vec::with_capacity(p.bound);
            let mut labels = Vec::with_capacity(p.bound);
            for x in 0..p.bound {
                let row: Vec<usize> = (0..width)
                    .map(|mask| match p.delta.get(&(x, mask)) {
                        Some(vars) => vars
                            .iter()
                            .position(|v| model[v.index()])
                            .expect("a satisfying model picks one successor"),
                        None => x,
                    })
                    .collect();
                delta.push(row);
                let mut bits = 0u64;
                for (j, v) in p.labels[x].iter().enumerate() {
                    if model[v.index()] {
                        bits |= 1 << j;
                    }
                }
                labels.push(bits);
            }
            let system =
                TransitionSystem::new(p.inputs.clone(), p.outputs.clone(), 0, delta, labels)
                    .expect("decoded implementations are well formed");
            out.insert(p.name.clone(), system);
        }
        out
    }
}

/// A CNF bounded-synthesis instance: the unknowns above plus binary-encoded
/// annotation values over the run graph, with a decode map back to one
/// implementation per process.
pub struct ConstraintSystem {
    meanings: Vec<String>,
    clauses: Vec<Vec<Lit>>,
    unknowns: Unknowns,
}

impl ConstraintSystem {
    pub fn var_count(&self) -> usize {
        self.meanings.len()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Runs the solver; `Some(model)` holds one boolean per variable.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let mut solver = Solver::new();
        for _ in 0..self.meanings.len() {
            solver.new_var();
        }
        for clause in &self.clauses {
            solver.add_clause(clause);
        }
        if !solver.solve() {
            return None;
        }
        Some((0..self.meanings.len()).map(|i| solver.value(Var::from_index(i))).collect())
    }

    /// Maps a satisfying model to one implementation per process.
    pub fn decode(&self, model: &[bool]) -> BTreeMap<String, TransitionSystem> {
        assert_eq!(model.len(), self.meanings.len(), "model width mismatch");
        self.unknowns.decode(model)
    }

    /// Standard DIMACS CNF with the variable map as `c var` comments.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (i, meaning) in self.meanings.iter().enumerate() {
            out.push_str(&format!("c var {} {}\n", i + 1, meaning));
        }
        out.push_str(&format!("p cnf {} {}\n", self.meanings.len(), self.clauses.len()));
        for clause in &self.clauses {
            for &lit in clause {
                let v = lit.var().index() + 1;
                if lit.is_pos() {
                    out.push_str(&format!("{v} "));
                } else {
                    out.push_str(&format!("-{v} "));
                }
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Builds the full propositional instance for one bound vector: the decoded
/// system is correct at the bounds if and only if the instance is
/// satisfiable. The error automaton reads the guarantee's failing colorings
/// conjoined with the assumption's colorings; its product with the pump
/// automaton over implementation-state/automaton-state pairs must admit a
/// ranking annotation under every direction, colors included.
///
/// The instance size is cubic in the error automaton, so this is a tool for
/// small interfaces; the realizability drivers search candidates directly.
pub fn encode_bounded_synthesis(
    a: &Architecture,
    spec: &AGSpec,
    bounds: &[usize],
) -> Result<ConstraintSystem, SynthesisError> {
    if a.mode() == Mode::Sync {
        return Err(SynthesisError::NotAsync);
    }
    for color in [ASSUMPTION_COLOR, GUARANTEE_COLOR] {
        if a.all_props().contains(color) {
            return Err(SynthesisError::ColorClash(color.to_string()));
        }
    }

    let mut meanings: Vec<String> = Vec::new();
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let unknowns = {
        let mut alloc = |meaning: String| {
            let v = Var::from_index(meanings.len());
            meanings.push(meaning);
            v
        };
        Unknowns::new(a, bounds, &mut alloc)?
    };
    clauses.extend(unknowns.exactly_one());

    let r = ColorProp::new(ASSUMPTION_COLOR);
    let rp = ColorProp::new(GUARANTEE_COLOR);
    let chi =
        Formula::and(colorize_neg(&spec.guarantee, &rp)?, colorize(&spec.assumption, &r)?);
    let mut prop_set = a.all_props();
    prop_set.insert(r.name().to_string());
    prop_set.insert(rp.name().to_string());
    let props: Vec<String> = prop_set.into_iter().collect();
    let nba = ltl_to_nba(&chi, &props)?;

    let x_total: usize = unknowns.processes.iter().map(|p| p.bound).product();
    let universe: Vec<(usize, usize)> =
        (0..x_total).flat_map(|x| (0..nba.state_count()).map(move |q| (x, q))).collect();
    let pump = PumpAutomaton::new(&universe);
    let product = product_spec_pump(&nba, &pump, x_total, r.name(), rp.name())?;
    let directions: Vec<String> = props
        .iter()
        .filter(|p| {
            a.env_outputs().contains(*p) || *p == r.name() || *p == rp.name()
        })
        .cloned()
        .collect();
    let ucw = dualize_to_ucw(&product, &directions)?;
    let n_states = ucw.automaton.state_count();
    let rejecting: Vec<bool> = {
        let mut v = vec![false; n_states];
        for &q in ucw.automaton.accepting() {
            v[q] = true;
        }
        v
    };
    let mut step: Vec<BTreeMap<Letter, Vec<usize>>> = vec![BTreeMap::new(); n_states];
    for n in 0..n_states {
        for &(letter, n2) in ucw.automaton.transitions_from(n) {
            step[n].entry(letter).or_default().push(n2);
        }
    }

    // Annotation variables: a defined flag and a binary value per node of
    // the run graph, most significant bit first. The value ceiling is the
    // run graph's node count.
    let node_count = x_total * n_states;
    let node = |x: usize, n: usize| x * n_states + n;
    let ceiling = node_count;
    let bits = (usize::BITS - ceiling.leading_zeros()) as usize;
    let mut alloc = |meaning: String| {
        let v = Var::from_index(meanings.len());
        meanings.push(meaning);
        v
    };
    let defined: Vec<Var> =
        (0..node_count).map(|v| alloc(format!("lambda-defined {v}"))).collect();
    let value: Vec<Vec<Var>> = (0..node_count)
        .map(|v| (0..bits).map(|j| alloc(format!("lambda {v} bit {j}"))).collect())
        .collect();

    // Lexicographic comparator cache: one activation variable per (source,
    // target) node pair, implying value(target) >= value(source), strictly
    // when the target's automaton state is rejecting.
    let mut comparators: BTreeMap<(usize, usize), Var> = BTreeMap::new();
    let mut compare = |u: usize, v: usize, strict: bool, clauses: &mut Vec<Vec<Lit>>| -> Var {
        if let Some(&cmp) = comparators.get(&(u, v)) {
            return cmp;
        }
        let cmp = alloc(format!("compare {u} {v}"));
        let a_bits = &value[v];
        let b_bits = &value[u];
        // prefix[j] is forced true when the first j bits agree.
        let prefix: Vec<Var> =
            (1..=bits).map(|j| alloc(format!("prefix {u} {v} {j}"))).collect();
        for j in 0..bits {
            let eq_hi: Vec<Lit> = if j == 0 {
                Vec::new()
            } else {
                vec![Lit::neg(prefix[j - 1])]
            };
            let mut both_true = eq_hi.clone();
            both_true.extend([Lit::neg(a_bits[j]), Lit::neg(b_bits[j]), Lit::pos(prefix[j])]);
            clauses.push(both_true);
            let mut both_false = eq_hi.clone();
            both_false.extend([Lit::pos(a_bits[j]), Lit::pos(b_bits[j]), Lit::pos(prefix[j])]);
            clauses.push(both_false);
            let mut ge = vec![Lit::neg(cmp)];
            ge.extend(eq_hi);
            ge.extend([Lit::pos(a_bits[j]), Lit::neg(b_bits[j])]);
            clauses.push(ge);
        }
        if strict {
            clauses.push(vec![Lit::neg(cmp), Lit::neg(prefix[bits - 1])]);
        }
        comparators.insert((u, v), cmp);
        cmp
    };

    let sizes: Vec<usize> = unknowns.processes.iter().map(|p| p.bound).collect();
    let decode_x = |mut id: usize| -> Vec<usize> {
        let mut locals = vec![0; sizes.len()];
        for i in (0..sizes.len()).rev() {
            locals[i] = id % sizes[i];
            id /= sizes[i];
        }
        locals
    };
    let encode_x =
        |locals: &[usize]| locals.iter().zip(&sizes).fold(0, |acc, (&x, &n)| acc * n + x);

    let prop_bit = |name: &str| props.iter().position(|p| p == name).unwrap();
    let dir_bits: Vec<usize> = directions.iter().map(|d| prop_bit(d)).collect();
    let out_bits: Vec<usize> = ucw.labels.iter().map(|o| prop_bit(o)).collect();
    // Each output proposition belongs to exactly one process.
    let out_owner: Vec<(usize, usize)> = ucw
        .labels
        .iter()
        .map(|o| {
            unknowns
                .processes
                .iter()
                .enumerate()
                .find_map(|(pi, p)| {
                    p.outputs.iter().position(|po| po == o).map(|bit| (pi, bit))
                })
                .expect("every label belongs to a process")
        })
        .collect();
    let local_in_bits: Vec<Vec<usize>> = unknowns
        .processes
        .iter()
        .map(|p| p.inputs.iter().map(|i| prop_bit(i)).collect())
        .collect();

    clauses.push(vec![Lit::pos(defined[node(0, ucw.automaton.initial())])]);

    for x in 0..x_total {
        let locals = decode_x(x);
        for sigma in 0..1u64 << dir_bits.len() {
            let mut dir_val = 0u64;
            for (i, &b) in dir_bits.iter().enumerate() {
                if sigma >> i & 1 == 1 {
                    dir_val |= 1 << b;
                }
            }
            // Per-process local letters and successor alternatives under
            // this direction.
            let mut moving: Vec<Option<(u64, usize)>> = Vec::new();
            for (pi, p) in unknowns.processes.iter().enumerate() {
                let mut local = 0u64;
                for (i, &b) in local_in_bits[pi].iter().enumerate() {
                    if dir_val >> b & 1 == 1 {
                        local |= 1 << i;
                    }
                }
                moving.push(p.moves(local).then_some((local, p.bound)));
            }
            let mut combos: Vec<(Vec<Lit>, Vec<usize>)> = vec![(Vec::new(), Vec::new())];
            for (pi, m) in moving.iter().enumerate() {
                let mut next = Vec::new();
                for (guards, chosen) in &combos {
                    match m {
                        None => {
                            let mut c = chosen.clone();
                            c.push(locals[pi]);
                            next.push((guards.clone(), c));
                        }
                        Some((local, bound)) => {
                            let row = &unknowns.processes[pi].delta[&(locals[pi], *local)];
                            for to in 0..*bound {
                                let mut g = guards.clone();
                                g.push(Lit::neg(row[to]));
                                let mut c = chosen.clone();
                                c.push(to);
                                next.push((g, c));
                            }
                        }
                    }
                }
                combos = next;
            }

            for out_val in 0..1u64 << out_bits.len() {
                let mut letter_val = dir_val;
                let mut label_guards = Vec::new();
                for (i, &b) in out_bits.iter().enumerate() {
                    let (pi, bit) = out_owner[i];
                    let var = unknowns.processes[pi].labels[locals[pi]][bit];
                    if out_val >> i & 1 == 1 {
                        letter_val |= 1 << b;
                        label_guards.push(Lit::neg(var));
                    } else {
                        label_guards.push(Lit::pos(var));
                    }
                }
                let letter = Letter::tagged(letter_val, x);
                for n in 0..n_states {
                    let Some(succs) = step[n].get(&letter) else { continue };
                    let u = node(x, n);
                    for (guards, chosen) in &combos {
                        let x2 = encode_x(chosen);
                        for &n2 in succs {
                            let v = node(x2, n2);
                            let cmp = compare(u, v, rejecting[n2], &mut clauses);
                            let base: Vec<Lit> = [Lit::neg(defined[u])]
                                .into_iter()
                                .chain(label_guards.iter().copied())
                                .chain(guards.iter().copied())
                                .collect();
                            let mut with_def = base.clone();
                            with_def.push(Lit::pos(defined[v]));
                            clauses.push(with_def);
                            let mut with_cmp = base;
                            with_cmp.push(Lit::pos(cmp));
                            clauses.push(with_cmp);
                        }
                    }
                }
            }
        }
    }

    Ok(ConstraintSystem { meanings, clauses, unknowns })
}
