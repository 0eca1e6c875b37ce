//! Assume-guarantee model checking over colored products.
//!
//! The check asks for a colored run of the system on which the assumption
//! stays color-bounded while the guarantee fails against its own color, and
//! on which every guarantee-color block can be pumped. Blocks can be pumped
//! exactly when they visit a vertex that lies on a cycle of their color
//! slice spanning both assumption-color classes, so a two-bit monitor per
//! block replaces an explicit repetition automaton: the product stays linear
//! in the system and tableau sizes, and a violating lasso is made pumpable
//! afterwards by splicing those local cycles into each block.

use std::collections::VecDeque;

use crate::arch::TransitionSystem;
use crate::automata::tableau::{formula_to_gba, simplify, GuardedGba};
use crate::coloring::{rel, ColorProp};
use crate::graphs::scc::tarjan_scc;
use crate::graphs::Colors;

use super::{
    AGSpec, PumpSegment, SynthesisError, Verdict, ViolationWitness, WitnessStep,
    ASSUMPTION_COLOR, GUARANTEE_COLOR,
};

fn color_of(idx: usize) -> Colors {
    Colors::new(idx & 1 != 0, idx & 2 != 0)
}

/// Tableau and letter layout shared by every check against one interface.
pub(crate) struct McContext {
    gba: GuardedGba,
    /// Letter bit per system input, in system input order.
    input_bits: Vec<usize>,
    /// Letter bit per system output, in system output order.
    output_bits: Vec<usize>,
    r_bit: usize,
    rp_bit: usize,
}

impl McContext {
    pub(crate) fn new(
        inputs: &[String],
        outputs: &[String],
        spec: &AGSpec,
    ) -> Result<Self, SynthesisError> {
        let mut props: Vec<String> = inputs.iter().chain(outputs.iter()).cloned().collect();
        for color in [ASSUMPTION_COLOR, GUARANTEE_COLOR] {
            if props.iter().any(|p| p == color) || spec.atoms().iter().any(|a| a == color) {
                return Err(SynthesisError::ColorClash(color.to_string()));
            }
            props.push(color.to_string());
        }
        props.sort();

        let r = ColorProp::new(ASSUMPTION_COLOR);
        let rp = ColorProp::new(GUARANTEE_COLOR);
        let chi = crate::logic::Formula::and(
            rel(&spec.assumption, &r)?,
            rel(&spec.guarantee, &rp)?
                .negated()
                .expect("relativized formulas are prompt-free"),
        );
        let gba = simplify(&formula_to_gba(&chi, &props)?);

        let bit = |name: &str| props.iter().position(|p| p == name).unwrap();
        Ok(McContext {
            input_bits: inputs.iter().map(|p| bit(p)).collect(),
            output_bits: outputs.iter().map(|p| bit(p)).collect(),
            r_bit: bit(ASSUMPTION_COLOR),
            rp_bit: bit(GUARANTEE_COLOR),
            gba,
        })
    }

    /// Decide the pair on one closed system with this context's interface.
    pub(crate) fn check(&self, system: &TransitionSystem) -> Result<Verdict, SynthesisError> {
        Product::build(self, system).search()
    }
}

/// Decide whether `system` meets the assume-guarantee pair `spec`.
///
/// `Violated` verdicts carry a colored lasso that [`super::replay_violation`]
/// confirms with the evaluator alone. Propositions named after the two
/// color tracks must not occur in the system or the specification.
pub fn mc_prompt_ag(system: &TransitionSystem, spec: &AGSpec) -> Result<Verdict, SynthesisError> {
    McContext::new(system.inputs(), system.outputs(), spec)?.check(system)
}

/// Colored product of a system, a color choice per step, and the tableau.
struct Product<'a> {
    ctx: &'a McContext,
    tableau_states: usize,
    /// Outgoing `(input, target)` edges per product vertex.
    adj: Vec<Vec<(u64, usize)>>,
    /// Initial vertices, one per color choice at the first position.
    initials: Vec<usize>,
    /// Color-slice component per vertex, computed within the vertex's own
    /// guarantee-color class.
    slice_comp: Vec<usize>,
    /// Whether the vertex's slice component spans both assumption classes.
    core: Vec<bool>,
}

impl<'a> Product<'a> {
    fn state_of(&self, v: usize) -> usize {
        v / (4 * self.tableau_states)
    }

    fn color_of(&self, v: usize) -> Colors {
        color_of(v / self.tableau_states % 4)
    }

    fn build(ctx: &'a McContext, system: &TransitionSystem) -> Product<'a> {
        let tableau_states = ctx.gba.state_count;
        let input_count = ctx.input_bits.len();

        let mut input_letters = vec![0u64; 1 << input_count];
        for mask in 0..1u64 << input_count {
            for (i, bit) in ctx.input_bits.iter().enumerate() {
                if mask >> i & 1 != 0 {
                    input_letters[mask as usize] |= 1 << bit;
                }
            }
        }
        let output_letter = |state: usize| -> u64 {
            let mut letter = 0;
            for (i, bit) in ctx.output_bits.iter().enumerate() {
                if system.label(state) >> i & 1 != 0 {
                    letter |= 1 << bit;
                }
            }
            letter
        };

        let count = system.state_count() * 4 * tableau_states;
        let mut adj: Vec<Vec<(u64, usize)>> = vec![Vec::new(); count];
        for state in 0..system.state_count() {
            for color in 0..4 {
                let mut base = output_letter(state);
                if color & 1 != 0 {
                    base |= 1 << ctx.r_bit;
                }
                if color & 2 != 0 {
                    base |= 1 << ctx.rp_bit;
                }
                for tab in 0..tableau_states {
                    let v = (state * 4 + color) * tableau_states + tab;
                    for (mask, input_letter) in input_letters.iter().enumerate() {
                        let letter = base | input_letter;
                        let next_state = system.step(state, mask as u64);
                        for edge in &ctx.gba.edges[tab] {
                            if !edge.admits(letter) {
                                continue;
                            }
                            for next_color in 0..4 {
                                adj[v].push((
                                    mask as u64,
                                    (next_state * 4 + next_color) * tableau_states + edge.to,
                                ));
                            }
                        }
                    }
                }
            }
        }

        let initials = (0..4)
            .map(|c| (system.initial() * 4 + c) * tableau_states + ctx.gba.initial)
            .collect();

        let mut product = Product {
            ctx,
            tableau_states,
            adj,
            initials,
            slice_comp: vec![usize::MAX; count],
            core: vec![false; count],
        };
        product.compute_cores();
        product
    }

    /// Mark the vertices whose guarantee-color slice holds a cycle through
    /// both assumption-color classes.
    fn compute_cores(&mut self) {
        for class in [false, true] {
            let sliced: Vec<Vec<usize>> = (0..self.adj.len())
                .map(|v| {
                    if self.color_of(v).r_prime != class {
                        return Vec::new();
                    }
                    self.adj[v]
                        .iter()
                        .map(|&(_, w)| w)
                        .filter(|&w| self.color_of(w).r_prime == class)
                        .collect()
                })
                .collect();
            let (comp, comp_count) = tarjan_scc(&sliced);
            let mut spans = vec![(false, false); comp_count];
            for v in 0..self.adj.len() {
                if self.color_of(v).r_prime == class {
                    if self.color_of(v).r {
                        spans[comp[v]].0 = true;
                    } else {
                        spans[comp[v]].1 = true;
                    }
                }
            }
            for v in 0..self.adj.len() {
                if self.color_of(v).r_prime == class {
                    self.slice_comp[v] = comp[v];
                    self.core[v] = spans[comp[v]].0 && spans[comp[v]].1;
                }
            }
        }
    }

    /// Monitor node: vertex plus one bit recording whether the current
    /// guarantee-color block has visited a core vertex.
    fn node(&self, v: usize, visited: bool) -> usize {
        v * 2 + visited as usize
    }

    fn monitored_successors(&self, node: usize) -> Vec<(u64, usize)> {
        let (v, visited) = (node / 2, node % 2 == 1);
        let here = self.color_of(v).r_prime;
        let mut out = Vec::with_capacity(self.adj[v].len());
        for &(input, w) in &self.adj[v] {
            if self.color_of(w).r_prime == here {
                out.push((input, self.node(w, visited || self.core[w])));
            } else if visited {
                out.push((input, self.node(w, self.core[w])));
            }
        }
        out
    }

    fn search(&self) -> Result<Verdict, SynthesisError> {
        let node_count = self.adj.len() * 2;
        let monitored: Vec<Vec<(u64, usize)>> =
            (0..node_count).map(|n| self.monitored_successors(n)).collect();
        let plain: Vec<Vec<usize>> = monitored
            .iter()
            .map(|out| out.iter().map(|&(_, w)| w).collect())
            .collect();

        let start: Vec<usize> = self.initials.iter().map(|&v| self.node(v, self.core[v])).collect();
        let mut pred: Vec<Option<(usize, u64)>> = vec![None; node_count];
        let mut seen = vec![false; node_count];
        let mut queue = VecDeque::new();
        for &n in &start {
            if !seen[n] {
                seen[n] = true;
                queue.push_back(n);
            }
        }
        while let Some(n) = queue.pop_front() {
            for &(input, w) in &monitored[n] {
                if !seen[w] {
                    seen[w] = true;
                    pred[w] = Some((n, input));
                    queue.push_back(w);
                }
            }
        }

        let (comp, comp_count) = tarjan_scc(&plain);
        let accepting_sets = self.ctx.gba.accepting.len() + 4;
        let in_set = |node: usize, set: usize| -> bool {
            let v = node / 2;
            if set < self.ctx.gba.accepting.len() {
                self.ctx.gba.accepting[set].contains(&(v % self.tableau_states))
            } else {
                let colors = self.color_of(v);
                match set - self.ctx.gba.accepting.len() {
                    0 => colors.r,
                    1 => !colors.r,
                    2 => colors.r_prime,
                    _ => !colors.r_prime,
                }
            }
        };

        let mut members: Vec<Vec<usize>> = vec![Vec::new(); comp_count];
        for n in 0..node_count {
            members[comp[n]].push(n);
        }
        let mut chosen = None;
        'comps: for c in 0..comp_count {
            let list = &members[c];
            if list.is_empty() || !seen[list[0]] {
                continue;
            }
            if list.len() == 1 && !plain[list[0]].contains(&list[0]) {
                continue;
            }
            for set in 0..accepting_sets {
                if !list.iter().any(|&n| in_set(n, set)) {
                    continue 'comps;
                }
            }
            chosen = Some(c);
            break;
        }
        let Some(target_comp) = chosen else {
            return Ok(Verdict::Holds);
        };

        let list = &members[target_comp];
        let anchor = *list.iter().find(|&&n| seen[n]).unwrap();

        let mut stem_nodes = vec![anchor];
        let mut stem_inputs = Vec::new();
        let mut cursor = anchor;
        while let Some((prev, input)) = pred[cursor] {
            stem_nodes.push(prev);
            stem_inputs.push(input);
            cursor = prev;
        }
        stem_nodes.reverse();
        stem_inputs.reverse();

        let mut reps = Vec::new();
        for set in 0..accepting_sets {
            reps.push(*list.iter().find(|&&n| in_set(n, set)).unwrap());
        }
        reps.push(anchor);
        let mut cycle_steps: Vec<(usize, u64)> = Vec::new();
        let mut cur = anchor;
        for &rep in &reps {
            for step in self.path_within(&monitored, &comp, target_comp, cur, rep) {
                cycle_steps.push(step);
            }
            cur = rep;
        }

        let mut stem_steps: Vec<(usize, u64)> = stem_nodes[..stem_nodes.len() - 1]
            .iter()
            .zip(&stem_inputs)
            .map(|(&n, &input)| (n, input))
            .collect();

        let flip = (0..cycle_steps.len())
            .find(|&i| {
                let prev = cycle_steps[(i + cycle_steps.len() - 1) % cycle_steps.len()].0;
                self.color_of(prev / 2).r_prime != self.color_of(cycle_steps[i].0 / 2).r_prime
            })
            .expect("an accepting cycle changes the guarantee color");
        stem_steps.extend_from_slice(&cycle_steps[..flip]);
        cycle_steps.rotate_left(flip);

        let mut stem: Vec<(usize, u64)> =
            stem_steps.iter().map(|&(n, input)| (n / 2, input)).collect();
        let mut cycle: Vec<(usize, u64)> =
            cycle_steps.iter().map(|&(n, input)| (n / 2, input)).collect();
        let pumps = self.pump_blocks(&mut stem, &mut cycle);

        let to_step = |&(v, input): &(usize, u64)| WitnessStep {
            state: self.state_of(v),
            colors: self.color_of(v),
            input,
        };
        Ok(Verdict::Violated(ViolationWitness {
            stem: stem.iter().map(to_step).collect(),
            cycle: cycle.iter().map(to_step).collect(),
            pumps,
        }))
    }

    /// Splice a both-class slice cycle into every guarantee-color block so
    /// each block carries an explicit repetition around an assumption flip.
    ///
    /// A block straddling the stem-to-cycle seam appears in later laps as
    /// its cycle portion alone, so its splice point is drawn from there.
    fn pump_blocks(
        &self,
        stem: &mut Vec<(usize, u64)>,
        cycle: &mut Vec<(usize, u64)>,
    ) -> Vec<PumpSegment> {
        let seq: Vec<(usize, u64)> = stem.iter().chain(cycle.iter()).copied().collect();
        let stem_len = stem.len();
        let mut boundaries = vec![0];
        for i in 1..seq.len() {
            if self.color_of(seq[i].0).r_prime != self.color_of(seq[i - 1].0).r_prime {
                boundaries.push(i);
            }
        }
        boundaries.push(seq.len());

        let mut pumps: Vec<PumpSegment> = Vec::new();
        for window in boundaries.windows(2).rev() {
            let (lo, hi) = (window[0], window[1]);
            let from = if hi > stem_len { lo.max(stem_len) } else { lo };
            let pos = (from..hi)
                .find(|&i| self.core[seq[i].0])
                .expect("every block of a monitored run visits a core vertex");
            let walk = self.slice_cycle(seq[pos].0);
            let flip = (1..walk.len())
                .find(|&i| self.color_of(walk[i].0).r != self.color_of(walk[i - 1].0).r)
                .expect("a both-class walk flips strictly inside");
            for pump in &mut pumps {
                pump.start += walk.len();
                pump.flip += walk.len();
                pump.end += walk.len();
            }
            pumps.push(PumpSegment { start: pos, flip: pos + flip, end: pos + walk.len() });
            if pos < stem_len {
                stem.splice(pos..pos, walk);
            } else {
                let at = pos - stem_len;
                cycle.splice(at..at, walk);
            }
        }
        pumps.reverse();
        pumps
    }

    /// A closed walk through both assumption classes, starting and ending at
    /// `v`, inside `v`'s guarantee-color slice component. Returned as steps
    /// `(vertex, input)` covering the walk up to but not including the final
    /// return to `v`.
    fn slice_cycle(&self, v: usize) -> Vec<(usize, u64)> {
        let (mut walk, turn) = self
            .sliced_bfs(v, |w| self.color_of(w).r != self.color_of(v).r)
            .expect("core components span both assumption classes");
        let (back, _) = self
            .sliced_bfs(turn, |w| w == v)
            .expect("slice components are strongly connected");
        walk.extend(back);
        walk
    }

    /// Shortest path inside `from`'s slice component to the first vertex
    /// satisfying `goal`, as `(vertex, input)` steps ending just before the
    /// goal, paired with the goal vertex itself. The start vertex is never
    /// tested against `goal`.
    fn sliced_bfs(
        &self,
        from: usize,
        goal: impl Fn(usize) -> bool,
    ) -> Option<(Vec<(usize, u64)>, usize)> {
        let class = self.color_of(from).r_prime;
        let comp = self.slice_comp[from];
        let mut pred: Vec<Option<(usize, u64)>> = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[from] = true;
        let mut queue = VecDeque::new();
        queue.push_back(from);
        let mut found = None;
        'search: while let Some(v) = queue.pop_front() {
            for &(input, w) in &self.adj[v] {
                if self.color_of(w).r_prime != class || self.slice_comp[w] != comp {
                    continue;
                }
                if !seen[w] {
                    seen[w] = true;
                    pred[w] = Some((v, input));
                    if goal(w) {
                        found = Some(w);
                        break 'search;
                    }
                    queue.push_back(w);
                }
            }
        }
        let goal_vertex = found?;
        let mut steps = Vec::new();
        let mut cursor = goal_vertex;
        while let Some((prev, input)) = pred[cursor] {
            steps.push((prev, input));
            cursor = prev;
        }
        steps.reverse();
        Some((steps, goal_vertex))
    }

    /// Shortest path between two nodes staying inside one monitored
    /// component, as `(node, input)` steps; empty when the nodes coincide.
    fn path_within(
        &self,
        monitored: &[Vec<(u64, usize)>],
        comp: &[usize],
        target_comp: usize,
        from: usize,
        to: usize,
    ) -> Vec<(usize, u64)> {
        if from == to {
            return Vec::new();
        }
        let mut pred: Vec<Option<(usize, u64)>> = vec![None; monitored.len()];
        let mut seen = vec![false; monitored.len()];
        seen[from] = true;
        let mut queue = VecDeque::new();
        queue.push_back(from);
        'search: while let Some(n) = queue.pop_front() {
            for &(input, w) in &monitored[n] {
                if comp[w] != target_comp || seen[w] {
                    continue;
                }
                seen[w] = true;
                pred[w] = Some((n, input));
                if w == to {
                    break 'search;
                }
                queue.push_back(w);
            }
        }
        let mut steps = Vec::new();
        let mut cursor = to;
        while let Some((prev, input)) = pred[cursor] {
            steps.push((prev, input));
            cursor = prev;
        }
        steps.reverse();
        steps
    }
}
