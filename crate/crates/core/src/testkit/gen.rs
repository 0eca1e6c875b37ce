use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arch::TransitionSystem;
use crate::coloring::ColorProp;
use crate::graphs::{BuchiGraph, ColoredBuchiGraph, Colors};
use crate::logic::{Formula, UltimatelyPeriodicWord};

/// Seeded source of random test inputs. Two generators built from the same
/// seed produce the same stream.
pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A random formula in negation normal form with roughly `budget` nodes.
    pub fn formula(&mut self, props: &[&str], budget: usize, allow_prompt: bool) -> Formula {
        if budget <= 1 {
            let i = self.rng.gen_range(0..props.len());
            return if self.rng.gen_bool(0.5) {
                Formula::Atom(props[i].to_string())
            } else {
                Formula::NegAtom(props[i].to_string())
            };
        }
        let max = if allow_prompt { 7 } else { 6 };
        match self.rng.gen_range(0..max) {
            0 => {
                let left = self.rng.gen_range(1..budget);
                Formula::and(
                    self.formula(props, left, allow_prompt),
                    self.formula(props, budget - left, allow_prompt),
                )
            }
            1 => {
                let left = self.rng.gen_range(1..budget);
                Formula::or(
                    self.formula(props, left, allow_prompt),
                    self.formula(props, budget - left, allow_prompt),
                )
            }
            2 => Formula::next(self.formula(props, budget - 1, allow_prompt)),
            3 => {
                let left = self.rng.gen_range(1..budget);
                Formula::until(
                    self.formula(props, left, allow_prompt),
                    self.formula(props, budget - left, allow_prompt),
                )
            }
            4 => {
                let left = self.rng.gen_range(1..budget);
                Formula::release(
                    self.formula(props, left, allow_prompt),
                    self.formula(props, budget - left, allow_prompt),
                )
            }
            5 => {
                let body = self.formula(props, budget - 1, allow_prompt);
                if self.rng.gen_bool(0.5) {
                    Formula::eventually(body)
                } else {
                    Formula::always(body)
                }
            }
            _ => Formula::prompt_eventually(self.formula(props, budget - 1, allow_prompt)),
        }
    }

    /// A random formula guaranteed to contain a prompt eventuality.
    pub fn prompt_formula(&mut self, props: &[&str], budget: usize) -> Formula {
        loop {
            let f = self.formula(props, budget, true);
            if f.has_prompt() {
                return f;
            }
        }
    }

    /// A random ultimately periodic word over `props`.
    pub fn word(
        &mut self,
        props: &[&str],
        max_prefix: usize,
        max_loop: usize,
    ) -> UltimatelyPeriodicWord {
        let prefix_len = self.rng.gen_range(0..=max_prefix);
        let loop_len = self.rng.gen_range(1..=max_loop);
        let step = |g: &mut Self| -> BTreeSet<String> {
            props
                .iter()
                .filter(|_| g.rng.gen_bool(0.5))
                .map(|p| p.to_string())
                .collect()
        };
        let prefix = (0..prefix_len).map(|_| step(self)).collect();
        let loop_part = (0..loop_len).map(|_| step(self)).collect();
        UltimatelyPeriodicWord::new(
            props.iter().map(|p| p.to_string()).collect(),
            prefix,
            loop_part,
        )
    }

    /// A coloring of `w` whose blocks all have length at least `k`: a few
    /// random blocks drawn from `[k, 3k]`, then a steady alternation.
    pub fn spaced_coloring(
        &mut self,
        w: &UltimatelyPeriodicWord,
        r: &ColorProp,
        k: usize,
    ) -> UltimatelyPeriodicWord {
        assert!(k >= 1);
        self.block_coloring(w, r, k, 3 * k)
    }

    /// A coloring of `w` whose blocks all have length at most `k`.
    pub fn bounded_coloring(
        &mut self,
        w: &UltimatelyPeriodicWord,
        r: &ColorProp,
        k: usize,
    ) -> UltimatelyPeriodicWord {
        assert!(k >= 1);
        self.block_coloring(w, r, 1, k)
    }

    /// Overlay `r` onto `w` with random block lengths from `[lo, hi]`. The
    /// word starts with a batch of random blocks covering the prefix, then
    /// settles into a fixed alternation so the result stays periodic. The
    /// steady part starts with the opposite color, so no block is merged
    /// across the seam.
    fn block_coloring(
        &mut self,
        w: &UltimatelyPeriodicWord,
        r: &ColorProp,
        lo: usize,
        hi: usize,
    ) -> UltimatelyPeriodicWord {
        assert!(w.prop_index(r.name()).is_none(), "color must be fresh");
        let mut blocks = Vec::new();
        let mut total = 0;
        while total <= w.prefix_len() || blocks.len() < 2 {
            let len = self.rng.gen_range(lo..=hi);
            blocks.push(len);
            total += len;
        }
        let first_color = self.rng.gen_bool(0.5);
        let steady_len = self.rng.gen_range(lo..=hi);
        let steady_color = first_color == (blocks.len() % 2 == 0);
        let color = move |n: usize| -> bool {
            let mut pos = n;
            for (i, &len) in blocks.iter().enumerate() {
                if pos < len {
                    return first_color == (i % 2 == 0);
                }
                pos -= len;
            }
            steady_color == ((pos / steady_len) % 2 == 0)
        };
        let step = |n: usize| -> BTreeSet<String> {
            let mut set: BTreeSet<String> = w
                .props()
                .iter()
                .filter(|p| w.holds_at(p, n))
                .cloned()
                .collect();
            if color(n) {
                set.insert(r.name().to_string());
            }
            set
        };
        // Beyond `total` the color has period 2 * steady_len and the base
        // word has its loop length; their lcm is a loop for the overlay.
        let loop_len = lcm(w.loop_len(), 2 * steady_len);
        let prefix = (0..total).map(step).collect();
        let loop_part = (total..total + loop_len).map(step).collect();
        let mut props: Vec<String> = w.props().to_vec();
        props.push(r.name().to_string());
        UltimatelyPeriodicWord::new(props, prefix, loop_part)
    }

    /// A random colored Büchi graph with `1..=max_vertices` vertices. Most
    /// vertices get at least one successor so nontrivial paths exist, and
    /// acceptance sets are sampled independently.
    pub fn colored_graph(&mut self, max_vertices: usize) -> ColoredBuchiGraph {
        let n = self.rng.gen_range(1..=max_vertices);
        let labels: Vec<Colors> = (0..n)
            .map(|_| Colors::new(self.rng.gen_bool(0.5), self.rng.gen_bool(0.5)))
            .collect();
        let mut edges = Vec::new();
        let density = 1.5 / n as f64;
        for src in 0..n {
            for dst in 0..n {
                if self.rng.gen_bool(density.min(1.0)) {
                    edges.push((src, dst));
                }
            }
            if edges.iter().all(|&(s, _)| s != src) && self.rng.gen_bool(0.85) {
                edges.push((src, self.rng.gen_range(0..n)));
            }
        }
        let acc1 = (0..n).filter(|_| self.rng.gen_bool(0.4)).collect();
        let acc2 = (0..n).filter(|_| self.rng.gen_bool(0.4)).collect();
        let initial = self.rng.gen_range(0..n);
        ColoredBuchiGraph::new(labels, &edges, initial, acc1, acc2)
            .expect("random graph construction is well-formed")
    }

    /// A random plain Büchi graph, same shape as [`Generator::colored_graph`]
    /// without the labels.
    pub fn buchi_graph(&mut self, max_vertices: usize) -> BuchiGraph {
        let g = self.colored_graph(max_vertices);
        let edges: Vec<(usize, usize)> = (0..g.vertex_count())
            .flat_map(|v| g.successors(v).iter().map(move |&w| (v, w)))
            .collect();
        BuchiGraph::new(
            g.vertex_count(),
            &edges,
            g.initial(),
            g.acc1().clone(),
            g.acc2().clone(),
        )
        .expect("random graph construction is well-formed")
    }

    /// A random ultimately periodic sequence of colored vertices over the
    /// universe `0..universe`, for exercising sequence-level checks.
    pub fn colored_sequence(
        &mut self,
        universe: usize,
        max_stem: usize,
        max_cycle: usize,
    ) -> (Vec<(usize, Colors)>, Vec<(usize, Colors)>) {
        let stem_len = self.rng.gen_range(0..=max_stem);
        let cycle_len = self.rng.gen_range(1..=max_cycle);
        let draw = |g: &mut Self| {
            (
                g.rng.gen_range(0..universe),
                Colors::new(g.rng.gen_bool(0.5), g.rng.gen_bool(0.5)),
            )
        };
        let stem = (0..stem_len).map(|_| draw(self)).collect();
        let cycle = (0..cycle_len).map(|_| draw(self)).collect();
        (stem, cycle)
    }

    /// A random total Moore machine over the given interface, with up to
    /// `max_states` states and state 0 initial.
    pub fn moore_system(
        &mut self,
        inputs: &[&str],
        outputs: &[&str],
        max_states: usize,
    ) -> TransitionSystem {
        let states = self.rng.gen_range(1..=max_states);
        let width = 1usize << inputs.len();
        let delta = (0..states)
            .map(|_| (0..width).map(|_| self.rng.gen_range(0..states)).collect())
            .collect();
        let labels = (0..states).map(|_| self.rng.gen_range(0..1u64 << outputs.len())).collect();
        TransitionSystem::new(
            inputs.iter().map(|s| s.to_string()).collect(),
            outputs.iter().map(|s| s.to_string()).collect(),
            0,
            delta,
            labels,
        )
        .expect("random machines are total by construction")
    }

    /// A random ultimately periodic input sequence as (stem, cycle) masks
    /// over `input_count` input bits.
    pub fn input_lasso(&mut self, input_count: usize, max_len: usize) -> (Vec<u64>, Vec<u64>) {
        let width = 1u64 << input_count;
        let stem_len = self.rng.gen_range(0..=max_len);
        let cycle_len = self.rng.gen_range(1..=max_len);
        let stem = (0..stem_len).map(|_| self.rng.gen_range(0..width)).collect();
        let cycle = (0..cycle_len).map(|_| self.rng.gen_range(0..width)).collect();
        (stem, cycle)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
