use std::collections::BTreeSet;

use promptltl::automata::{PumpAutomaton, PumpState};
use promptltl::graphs::{
    buchi_nonempty, is_pumpable_lasso, is_pumpable_sequence, pumpable_nonempty, reduce_to_buchi,
    BuchiGraph, ColoredBuchiGraph, Colors, GraphError, Lasso,
};
use promptltl::testkit::graph_oracle::{buchi_nonempty_oracle, pumpable_nonempty_oracle};
use promptltl::testkit::{enumerate_lassos, Generator, LassoCaps};

fn colors(r: bool, r_prime: bool) -> Colors {
    Colors::new(r, r_prime)
}

fn set(vs: &[usize]) -> BTreeSet<usize> {
    vs.iter().copied().collect()
}

#[test]
fn graph_text_round_trips() {
    let text = "\
# a two-vertex example
vertex 0 {r}
vertex 1 {r,r'}
edge 0 1
edge 1 0
init 0
acc1 0
acc2 1
";
    let g = ColoredBuchiGraph::from_text(text).unwrap();
    assert_eq!(g.vertex_count(), 2);
    assert_eq!(g.label(0), colors(true, false));
    assert_eq!(g.label(1), colors(true, true));
    assert_eq!(g.successors(0), &[1]);
    assert_eq!(ColoredBuchiGraph::from_text(&g.to_text()).unwrap(), g);
}

#[test]
fn graph_parse_errors_name_the_line() {
    let err = ColoredBuchiGraph::from_text("vertex 0 {r}\nedge 0 7\ninit 0\n").unwrap_err();
    assert_eq!(err, GraphError::UnknownVertex(7));
    let err = ColoredBuchiGraph::from_text("vertex 0 {r}\nvertex 2 {}\n").unwrap_err();
    assert!(matches!(err, GraphError::Parse { line: 2, .. }));
    let err = ColoredBuchiGraph::from_text("vertex 0 {q}\n").unwrap_err();
    assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    let err = ColoredBuchiGraph::from_text("vertex 0 {}\n").unwrap_err();
    assert_eq!(err, GraphError::NoInitial);
}

#[test]
fn pump_automaton_has_the_stated_size() {
    for n in [1usize, 2, 3, 10] {
        let universe: Vec<usize> = (0..n).collect();
        let pump = PumpAutomaton::new(&universe);
        assert_eq!(pump.state_count(), 8 * n + 3);
    }
}

#[test]
fn pump_transitions_follow_the_phase_rules() {
    let pump = PumpAutomaton::new(&[0usize, 1]);
    let start = PumpState::Start;
    // Phase entry: the first letter is remembered verbatim.
    assert_eq!(
        pump.successors(&start, &0, colors(true, false)),
        vec![PumpState::Remember { vertex: 0, colors: colors(true, false) }]
    );
    // While r' is stable the anchor may be kept or re-guessed; an r flip
    // additionally opens the await phase carrying the new colors.
    let remember = PumpState::Remember { vertex: 0, colors: colors(true, false) };
    let advanced = pump.successors(&remember, &1, colors(false, false));
    assert!(advanced.contains(&remember));
    assert!(advanced.contains(&PumpState::Remember { vertex: 1, colors: colors(false, false) }));
    assert!(advanced.contains(&PumpState::AwaitRepeat { vertex: 0, colors: colors(false, false) }));
    assert_eq!(advanced.len(), 3);
    let stable = pump.successors(&remember, &1, colors(true, false));
    assert_eq!(stable.len(), 2);
    assert!(!stable.iter().any(|s| matches!(s, PumpState::AwaitRepeat { .. })));
    // Crossing an r'-change mid-phase kills the run.
    assert!(pump.successors(&remember, &1, colors(true, true)).is_empty());
    // The await phase waits for the anchor vertex and then seals the block.
    let await_repeat = PumpState::AwaitRepeat { vertex: 0, colors: colors(false, false) };
    assert_eq!(pump.successors(&await_repeat, &1, colors(true, false)), vec![await_repeat.clone()]);
    assert_eq!(
        pump.successors(&await_repeat, &0, colors(true, false)),
        vec![PumpState::Done { r_prime: false }]
    );
    assert!(pump.successors(&await_repeat, &1, colors(false, true)).is_empty());
    // A sealed block tolerates anything with the same r' and restarts at the
    // next r'-change point.
    let done = PumpState::Done { r_prime: false };
    assert_eq!(pump.successors(&done, &1, colors(true, false)), vec![done.clone()]);
    assert_eq!(
        pump.successors(&done, &1, colors(true, true)),
        vec![PumpState::Remember { vertex: 1, colors: colors(true, true) }]
    );
}

#[test]
fn pump_accepts_the_hand_traced_word() {
    // Over V = {v}: ((v,{r})(v,{})) repeated, with r' constant, pumps:
    // remember, await on the flip, done on the repeat, then stay.
    let pump = PumpAutomaton::new(&[7usize]);
    let cycle = vec![(7, colors(true, false)), (7, colors(false, false))];
    assert!(pump.has_infinite_run(&[], &cycle));
}

#[test]
fn reduction_builds_the_full_product() {
    let g = ColoredBuchiGraph::new(
        vec![colors(true, false), colors(false, false)],
        &[(0, 1), (1, 0)],
        0,
        set(&[0]),
        set(&[1]),
    )
    .unwrap();
    let reduction = reduce_to_buchi(&g);
    assert_eq!(reduction.graph.vertex_count(), 38);
    assert_eq!(reduction.pump().state_count(), 19);
    assert_eq!(reduction.source_vertex(reduction.graph.initial()), 0);
    assert_eq!(reduction.pump_state(reduction.graph.initial()), &PumpState::Start);
    for n in 1..=10usize {
        let labels = vec![colors(false, false); n];
        let edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        let g = ColoredBuchiGraph::new(labels, &edges, 0, set(&[0]), set(&[0])).unwrap();
        assert_eq!(reduce_to_buchi(&g).graph.vertex_count(), n * (8 * n + 3));
    }
}

#[test]
fn edgeless_graph_reduces_to_an_empty_product() {
    let g = ColoredBuchiGraph::new(vec![colors(true, true)], &[], 0, set(&[0]), set(&[0])).unwrap();
    let reduction = reduce_to_buchi(&g);
    assert!(buchi_nonempty(&reduction.graph).is_none());
    assert!(pumpable_nonempty(&g).is_none());
}

#[test]
fn buchi_witnesses_cycle_through_both_sets() {
    let g = BuchiGraph::new(1, &[(0, 0)], 0, set(&[0]), set(&[0])).unwrap();
    let lasso = buchi_nonempty(&g).unwrap();
    assert_eq!(lasso, Lasso { stem: vec![], cycle: vec![0] });

    let g = BuchiGraph::new(2, &[(0, 1), (1, 0)], 0, set(&[0]), set(&[1])).unwrap();
    let lasso = buchi_nonempty(&g).unwrap();
    assert!(g.contains_lasso(&lasso));
    assert!(lasso.cycle.contains(&0) && lasso.cycle.contains(&1));

    // Accepting vertices in different components that never share a cycle.
    let g = BuchiGraph::new(3, &[(0, 1), (1, 1), (0, 2), (2, 2)], 0, set(&[1]), set(&[2])).unwrap();
    assert!(buchi_nonempty(&g).is_none());
}

#[test]
fn vacuous_block_structure_is_pumpable() {
    // One r'-change point at position 0 and no adjacent pair to constrain.
    let g = ColoredBuchiGraph::new(vec![colors(true, false)], &[(0, 0)], 0, set(&[0]), set(&[0]))
        .unwrap();
    let lasso = pumpable_nonempty(&g).expect("vacuously pumpable");
    assert!(lasso.is_path_of(&g));
    assert!(is_pumpable_lasso(&g, &lasso).unwrap());
}

#[test]
fn unit_blocks_leave_no_room_to_pump() {
    let g = ColoredBuchiGraph::new(
        vec![colors(true, true), colors(false, false)],
        &[(0, 1), (1, 0)],
        0,
        set(&[0]),
        set(&[1]),
    )
    .unwrap();
    assert!(pumpable_nonempty(&g).is_none());
    let lasso = Lasso { stem: vec![], cycle: vec![0, 1] };
    assert!(!is_pumpable_lasso(&g, &lasso).unwrap());
}

#[test]
fn repetition_enclosing_a_flip_makes_blocks_pumpable() {
    // Blocks visit 0,1,0 (r' low) and 2,3,2 (r' high); each encloses an r
    // flip inside a vertex repetition.
    let g = ColoredBuchiGraph::new(
        vec![colors(false, false), colors(true, false), colors(false, true), colors(true, true)],
        &[(0, 1), (1, 0), (0, 2), (2, 3), (3, 2), (2, 0)],
        0,
        set(&[0]),
        set(&[2]),
    )
    .unwrap();
    let lasso = pumpable_nonempty(&g).expect("blocks are pumpable");
    assert!(lasso.is_path_of(&g));
    assert!(is_pumpable_lasso(&g, &lasso).unwrap());
    assert!(is_pumpable_sequence(
        &[],
        &[
            (0, colors(false, false)),
            (1, colors(true, false)),
            (0, colors(false, false)),
            (2, colors(false, true)),
            (3, colors(true, true)),
            (2, colors(false, true)),
        ],
    ));
}

#[test]
fn repetition_without_a_flip_is_not_pumpable() {
    assert!(!is_pumpable_sequence(
        &[],
        &[
            (0, colors(true, false)),
            (1, colors(true, false)),
            (0, colors(true, false)),
            (0, colors(true, true)),
            (1, colors(true, true)),
            (0, colors(true, true)),
        ],
    ));
}

#[test]
fn trailing_constant_blocks_are_unconstrained() {
    // After position 2 the color r' never changes again; the single bounded
    // block [0, 2) has no repetition but the trailing block imposes nothing.
    let stem = [(0, colors(false, false)), (1, colors(true, false))];
    let cycle = [(2, colors(false, true))];
    assert!(!is_pumpable_sequence(&stem, &cycle));
    let stem = [(0, colors(false, false)), (1, colors(true, false)), (0, colors(false, false))];
    assert!(is_pumpable_sequence(&stem, &cycle));
}

#[test]
fn pumpability_check_rejects_non_paths() {
    let g = ColoredBuchiGraph::new(vec![colors(true, false)], &[(0, 0)], 0, set(&[0]), set(&[0]))
        .unwrap();
    let broken = Lasso { stem: vec![], cycle: vec![0, 0, 1] };
    assert_eq!(is_pumpable_lasso(&g, &broken), Err(GraphError::NotAPath));
}

#[test]
fn lasso_enumeration_deduplicates_rotations() {
    let g = ColoredBuchiGraph::new(
        vec![colors(false, false), colors(false, false)],
        &[(0, 1), (1, 0)],
        0,
        set(&[0]),
        set(&[1]),
    )
    .unwrap();
    let caps = LassoCaps { max_stem: 3, max_cycle: 4, max_count: 1000 };
    let lassos = enumerate_lassos(&g, caps);
    assert_eq!(lassos, vec![Lasso { stem: vec![], cycle: vec![0, 1] }]);

    let g = ColoredBuchiGraph::new(vec![colors(false, false)], &[(0, 0)], 0, set(&[0]), set(&[0]))
        .unwrap();
    let caps = LassoCaps { max_stem: 0, max_cycle: 1, max_count: 1000 };
    assert_eq!(enumerate_lassos(&g, caps).len(), 1);
}

#[test]
fn enumerated_lassos_are_paths() {
    let mut gen = Generator::new(11);
    for _ in 0..40 {
        let g = gen.colored_graph(4);
        let caps = LassoCaps { max_stem: 4, max_cycle: 5, max_count: 500 };
        for lasso in enumerate_lassos(&g, caps) {
            assert!(lasso.is_path_of(&g), "enumerated lasso must be a path\n{}", g.to_text());
        }
    }
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn pump_language_is_definitional_pumpability(seed in any::<u64>()) {
            let mut gen = Generator::new(seed);
            let universe: Vec<usize> = (0..3).collect();
            let pump = PumpAutomaton::new(&universe);
            for _ in 0..10 {
                let (stem, cycle) = gen.colored_sequence(3, 4, 5);
                let run = pump.has_infinite_run(&stem, &cycle);
                let definitional = is_pumpable_sequence(&stem, &cycle);
                prop_assert_eq!(run, definitional, "stem {:?} cycle {:?}", stem, cycle);
            }
        }

        #[test]
        fn buchi_emptiness_matches_the_closure_oracle(seed in any::<u64>()) {
            let mut gen = Generator::new(seed);
            for _ in 0..8 {
                let g = gen.buchi_graph(8);
                let verdict = buchi_nonempty(&g);
                prop_assert_eq!(verdict.is_some(), buchi_nonempty_oracle(&g));
                if let Some(lasso) = verdict {
                    prop_assert!(g.contains_lasso(&lasso));
                    prop_assert!(lasso.cycle.iter().any(|v| g.acc1().contains(v)));
                    prop_assert!(lasso.cycle.iter().any(|v| g.acc2().contains(v)));
                }
            }
        }

        #[test]
        fn pumpable_emptiness_matches_the_closure_oracle(seed in any::<u64>()) {
            let mut gen = Generator::new(seed);
            for _ in 0..4 {
                let g = gen.colored_graph(5);
                let verdict = pumpable_nonempty(&g);
                prop_assert_eq!(verdict.is_some(), pumpable_nonempty_oracle(&g), "{}", g.to_text());
                if let Some(lasso) = verdict {
                    prop_assert!(lasso.is_path_of(&g));
                    prop_assert!(is_pumpable_lasso(&g, &lasso).unwrap());
                }
            }
        }

        #[test]
        fn enumerated_pumpable_lassos_imply_nonemptiness(seed in any::<u64>()) {
            let mut gen = Generator::new(seed);
            let g = gen.colored_graph(4);
            let caps = LassoCaps {
                max_stem: g.vertex_count(),
                max_cycle: g.vertex_count() + 1,
                max_count: 2000,
            };
            let found = enumerate_lassos(&g, caps).into_iter().any(|lasso| {
                lasso.cycle.iter().any(|v| g.acc1().contains(v))
                    && lasso.cycle.iter().any(|v| g.acc2().contains(v))
                    && is_pumpable_lasso(&g, &lasso).unwrap()
            });
            if found {
                prop_assert!(pumpable_nonempty(&g).is_some(), "{}", g.to_text());
            }
        }
    }
}
