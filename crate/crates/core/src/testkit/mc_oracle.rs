//! Reference assume-guarantee check built from first principles: colorize the
//! pair, translate to a Büchi automaton, form the colored product graph with
//! existential inputs and colors, and decide pumpable emptiness.
//!
//! This deliberately avoids the production model-checking path so the two can
//! be compared on small instances.

use std::collections::{BTreeMap, BTreeSet};

use crate::arch::TransitionSystem;
use crate::automata::{ltl_to_nba, Letter};
use crate::coloring::{colorize, colorize_neg, ColorProp};
use crate::graphs::{pumpable_nonempty, ColoredBuchiGraph, Colors};
use crate::logic::Formula;

/// Decides whether every trace of `system` that satisfies `assumption` for
/// some bound also satisfies `guarantee` for some bound.
///
/// Builds the automaton for `colorize_neg(guarantee, r') & colorize(assumption, r)`
/// over inputs, outputs and both colors, then searches the product of the
/// system with the automaton, colors chosen freely along edges, for a pumpable
/// accepting path. The pair holds exactly when all four initial color choices
/// come up empty.
///
/// Panics on malformed inputs; intended for test harnesses only.
pub fn ag_holds_oracle(
    system: &TransitionSystem,
    assumption: &Formula,
    guarantee: &Formula,
) -> bool {
    let r = ColorProp::new("r");
    let rp = ColorProp::new("r'");
    let chi = Formula::and(
        colorize_neg(guarantee, &rp).expect("guarantee accepts the color"),
        colorize(assumption, &r).expect("assumption accepts the color"),
    );

    let mut props: BTreeSet<String> = system.inputs().iter().cloned().collect();
    props.extend(system.outputs().iter().cloned());
    props.insert(r.name().to_string());
    props.insert(rp.name().to_string());
    let props: Vec<String> = props.into_iter().collect();
    let nba = ltl_to_nba(&chi, &props).expect("colorized pair translates");

    // Bit sources for each automaton proposition, in prop order.
    enum Source {
        Input(usize),
        Output(usize),
        ColorR,
        ColorRp,
    }
    let sources: Vec<Source> = props
        .iter()
        .map(|p| {
            if p == r.name() {
                Source::ColorR
            } else if p == rp.name() {
                Source::ColorRp
            } else if let Some(i) = system.inputs().iter().position(|n| n == p) {
                Source::Input(i)
            } else {
                let i = system.outputs().iter().position(|n| n == p).expect("known prop");
                Source::Output(i)
            }
        })
        .collect();
    let letter_for = |input_mask: u64, label: u64, color: usize| -> Letter {
        let mut val = 0u64;
        for (bit, src) in sources.iter().enumerate() {
            let on = match *src {
                Source::Input(i) => input_mask >> i & 1 == 1,
                Source::Output(i) => label >> i & 1 == 1,
                Source::ColorR => color & 1 == 1,
                Source::ColorRp => color & 2 == 2,
            };
            if on {
                val |= 1 << bit;
            }
        }
        Letter::plain(val)
    };

    let by_letter: Vec<BTreeMap<Letter, Vec<usize>>> = (0..nba.state_count())
        .map(|q| {
            let mut m: BTreeMap<Letter, Vec<usize>> = BTreeMap::new();
            for &(letter, to) in nba.transitions_from(q) {
                m.entry(letter).or_default().push(to);
            }
            m
        })
        .collect();

    // Vertex (x, c, q) with c packing the colors: bit 0 is r, bit 1 is r'.
    let states = system.state_count();
    let nq = nba.state_count();
    let id = |x: usize, c: usize, q: usize| (x * 4 + c) * nq + q;
    let vertex_count = states * 4 * nq;

    let mut labels = vec![Colors::new(false, false); vertex_count];
    for x in 0..states {
        for c in 0..4 {
            for q in 0..nq {
                labels[id(x, c, q)] = Colors::new(c & 1 == 1, c & 2 == 2);
            }
        }
    }

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for x in 0..states {
        for c in 0..4 {
            for input_mask in 0..1u64 << system.inputs().len() {
                let letter = letter_for(input_mask, system.label(x), c);
                let x_next = system.step(x, input_mask);
                for q in 0..nq {
                    let Some(targets) = by_letter[q].get(&letter) else { continue };
                    for &q_next in targets {
                        for c_next in 0..4 {
                            edges.insert((id(x, c, q), id(x_next, c_next, q_next)));
                        }
                    }
                }
            }
        }
    }
    let edge_list: Vec<(usize, usize)> = edges.into_iter().collect();

    let mut acc1 = BTreeSet::new();
    for x in 0..states {
        for c in 0..4 {
            for &q in nba.accepting() {
                acc1.insert(id(x, c, q));
            }
        }
    }
    let acc2: BTreeSet<usize> = (0..vertex_count).collect();

    (0..4).all(|c| {
        let g = ColoredBuchiGraph::new(
            labels.clone(),
            &edge_list,
            id(system.initial(), c, nba.initial()),
            acc1.clone(),
            acc2.clone(),
        );
        pumpable_nonempty(&g).is_none()
    })
}
