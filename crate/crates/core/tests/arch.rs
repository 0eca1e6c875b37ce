use std::collections::{BTreeMap, BTreeSet};

use promptltl::arch::{
    add_color_output, asynchronize, compose, incomparable_information, parse_architecture,
    ArchError, Architecture, Mode, TransitionSystem,
};
use promptltl::coloring::{is_k_bounded, is_k_spaced, ColorProp};
use promptltl::logic::UltimatelyPeriodicWord;

const INDEPENDENT: &str = "\
mode: sync
env outputs: a b
process p1 inputs: a outputs: c
process p2 inputs: b outputs: d
";

#[test]
fn independent_architecture_parses_and_round_trips() {
    let a = parse_architecture(INDEPENDENT).unwrap();
    assert_eq!(a.mode(), Mode::Sync);
    assert_eq!(a.processes().len(), 2);
    assert_eq!(a.process("p1").unwrap().inputs, BTreeSet::from(["a".to_string()]));
    assert_eq!(parse_architecture(&a.to_text()).unwrap(), a);
    assert!(incomparable_information(&a));
}

#[test]
fn validation_rejects_broken_interfaces() {
    let e = parse_architecture(
        "mode: sync\nenv outputs: a\nprocess p1 inputs: a outputs: c\nprocess p2 inputs: a outputs: c\n",
    )
    .unwrap_err();
    assert_eq!(e, ArchError::OverlappingOutputs("c".into()));

    let e = parse_architecture("mode: sync\nenv outputs: a\nprocess p1 inputs: z outputs: c\n")
        .unwrap_err();
    assert_eq!(e, ArchError::DanglingInput { process: "p1".into(), prop: "z".into() });

    let e = parse_architecture("mode: sync\nenv outputs: a\n").unwrap_err();
    assert_eq!(e, ArchError::NoProcesses);

    let e = parse_architecture("mode: sync\nenv outputs: a\nprocessor p1\n").unwrap_err();
    assert!(matches!(e, ArchError::Parse { line: 3, .. }));

    let e = parse_architecture("env outputs: a\nprocess p1 inputs: a outputs: c\n").unwrap_err();
    assert!(matches!(e, ArchError::Parse { .. }));
}

#[test]
fn asynchronize_adds_one_scheduling_input_per_process() {
    let a = parse_architecture(INDEPENDENT).unwrap();
    let b = asynchronize(&a).unwrap();
    assert_eq!(b.mode(), Mode::Async);
    assert!(b.env_outputs().contains("sched_p1"));
    assert!(b.env_outputs().contains("sched_p2"));
    for (before, after) in a.processes().iter().zip(b.processes()) {
        assert_eq!(after.inputs.len(), before.inputs.len() + 1);
        assert!(after.inputs.contains(&Architecture::sched_prop(&before.name)));
        assert_eq!(after.outputs, before.outputs);
    }
    assert_eq!(asynchronize(&b).unwrap_err(), ArchError::NameClash("sched_p1".into()));
}

#[test]
fn color_output_lands_on_the_chosen_host() {
    let a = parse_architecture(INDEPENDENT).unwrap();
    let on_p1 = add_color_output(&a, "p1", "r").unwrap();
    let on_p2 = add_color_output(&a, "p2", "r").unwrap();
    assert!(on_p1.process("p1").unwrap().outputs.contains("r"));
    assert!(!on_p1.process("p2").unwrap().outputs.contains("r"));
    assert_eq!(on_p1.all_props(), on_p2.all_props());
    assert_eq!(add_color_output(&a, "env", "r").unwrap_err(), ArchError::ColorOnEnvironment);
    assert_eq!(add_color_output(&a, "p1", "a").unwrap_err(), ArchError::NameClash("a".into()));
    assert_eq!(
        add_color_output(&a, "p9", "r").unwrap_err(),
        ArchError::UnknownProcess("p9".into())
    );
}

#[test]
fn canonical_alternator_emits_spaced_and_bounded_colorings() {
    for k in 1..=3usize {
        let a = parse_architecture("mode: sync\nenv outputs:\nprocess p1 inputs: outputs: o\n")
            .unwrap();
        let a = add_color_output(&a, "p1", "r").unwrap();
        let n = 2 * k;
        let delta: Vec<Vec<usize>> = (0..n).map(|x| vec![(x + 1) % n]).collect();
        let labels: Vec<u64> = (0..n).map(|x| if x < k { 0b10 } else { 0 }).collect();
        let f = TransitionSystem::new(
            vec![],
            vec!["o".into(), "r".into()],
            0,
            delta,
            labels,
        )
        .unwrap();
        let global = compose(&a, &BTreeMap::from([("p1".to_string(), f)])).unwrap();
        let mut visited = vec![global.initial()];
        loop {
            let next = global.step(*visited.last().unwrap(), 0);
            if next == global.initial() {
                break;
            }
            visited.push(next);
        }
        let steps: Vec<BTreeSet<String>> =
            visited.iter().map(|&x| global.label_names(x)).collect();
        let w = UltimatelyPeriodicWord::new(vec![], vec![], steps);
        let r = ColorProp::new("r");
        assert!(is_k_spaced(&w, &r, k));
        assert!(is_k_bounded(&w, &r, k));
    }
}

fn scheduled_alternator(sched: &str, out: &str) -> TransitionSystem {
    TransitionSystem::new(
        vec![sched.to_string()],
        vec![out.to_string()],
        0,
        vec![vec![0, 1], vec![1, 0]],
        vec![0, 1],
    )
    .unwrap()
}

fn two_alternators() -> (Architecture, BTreeMap<String, TransitionSystem>) {
    let a = parse_architecture(
        "mode: sync\nenv outputs:\nprocess p1 inputs: outputs: g1\nprocess p2 inputs: outputs: g2\n",
    )
    .unwrap();
    let a = asynchronize(&a).unwrap();
    let impls = BTreeMap::from([
        ("p1".to_string(), scheduled_alternator("sched_p1", "g1")),
        ("p2".to_string(), scheduled_alternator("sched_p2", "g2")),
    ]);
    (a, impls)
}

#[test]
fn alternators_compose_to_the_full_product() {
    let (a, impls) = two_alternators();
    let global = compose(&a, &impls).unwrap();
    assert_eq!(global.state_count(), 4);
    assert_eq!(global.inputs(), ["sched_p1", "sched_p2"]);
    assert_eq!(global.outputs(), ["g1", "g2"]);
    // First process is the most significant digit of the state id.
    assert_eq!(global.initial(), 0);
    assert_eq!(global.step(0, 0b01), 2);
    assert_eq!(global.step(0, 0b10), 1);
    assert_eq!(global.step(0, 0b11), 3);
    assert!(global.label_names(2).contains("g1"));
    // Unscheduled components and their outputs are fixed points.
    for state in 0..4usize {
        for mask in 0..4u64 {
            let next = global.step(state, mask);
            if mask & 0b01 == 0 {
                assert_eq!(next / 2, state / 2, "p1 moved unscheduled");
                assert_eq!(global.label(next) & 0b01, global.label(state) & 0b01);
            }
            if mask & 0b10 == 0 {
                assert_eq!(next % 2, state % 2, "p2 moved unscheduled");
            }
        }
    }
}

#[test]
fn unscheduled_state_changes_are_rejected() {
    let (a, mut impls) = two_alternators();
    let restless = TransitionSystem::new(
        vec!["sched_p1".to_string()],
        vec!["g1".to_string()],
        0,
        vec![vec![1, 1], vec![0, 0]],
        vec![0, 1],
    )
    .unwrap();
    impls.insert("p1".to_string(), restless);
    assert_eq!(
        compose(&a, &impls).unwrap_err(),
        ArchError::StutteringViolation { process: "p1".into(), state: 0 }
    );
}

#[test]
fn composition_checks_interfaces_and_routing() {
    let a = parse_architecture(INDEPENDENT).unwrap();
    let tracker = |inp: &str, out: &str| {
        TransitionSystem::new(
            vec![inp.to_string()],
            vec![out.to_string()],
            0,
            vec![vec![0, 1], vec![0, 1]],
            vec![0, 1],
        )
        .unwrap()
    };
    let good = BTreeMap::from([
        ("p1".to_string(), tracker("a", "c")),
        ("p2".to_string(), tracker("b", "d")),
    ]);
    assert!(compose(&a, &good).is_ok());

    let mut wrong_input = good.clone();
    wrong_input.insert("p1".to_string(), tracker("b", "c"));
    assert!(matches!(
        compose(&a, &wrong_input).unwrap_err(),
        ArchError::InputMismatch { .. }
    ));

    let mut wrong_output = good.clone();
    wrong_output.insert("p1".to_string(), tracker("a", "q"));
    assert!(matches!(
        compose(&a, &wrong_output).unwrap_err(),
        ArchError::OutputMismatch { .. }
    ));

    let mut missing = good.clone();
    missing.remove("p2");
    assert_eq!(compose(&a, &missing).unwrap_err(), ArchError::MissingImplementation("p2".into()));

    let mut extra = good.clone();
    extra.insert("p3".to_string(), tracker("a", "e"));
    assert_eq!(compose(&a, &extra).unwrap_err(), ArchError::UnknownProcess("p3".into()));

    let pipeline = parse_architecture(
        "mode: sync\nenv outputs: a\nprocess p1 inputs: a outputs: c\nprocess p2 inputs: c outputs: d\n",
    )
    .unwrap();
    assert!(!incomparable_information(&pipeline));
    let impls = BTreeMap::from([
        ("p1".to_string(), tracker("a", "c")),
        ("p2".to_string(), tracker("c", "d")),
    ]);
    assert_eq!(
        compose(&pipeline, &impls).unwrap_err(),
        ArchError::UnsupportedRouting { process: "p2".into(), prop: "c".into() }
    );
}

#[test]
fn single_process_information_is_comparable() {
    let a = parse_architecture("mode: sync\nenv outputs: a\nprocess p1 inputs: a outputs: c\n")
        .unwrap();
    assert!(!incomparable_information(&a));
}

#[test]
fn outputs_depend_only_on_projected_histories() {
    let a = parse_architecture(INDEPENDENT).unwrap();
    let tracker = |inp: &str, out: &str| {
        TransitionSystem::new(
            vec![inp.to_string()],
            vec![out.to_string()],
            0,
            vec![vec![0, 1], vec![0, 1]],
            vec![0, 1],
        )
        .unwrap()
    };
    let impls = BTreeMap::from([
        ("p1".to_string(), tracker("a", "c")),
        ("p2".to_string(), tracker("b", "d")),
    ]);
    let global = compose(&a, &impls).unwrap();
    // Inputs sorted: bit 0 is a, bit 1 is b. Two histories with the same
    // a-projection must produce the same c-outputs, whatever b does.
    let run = |inputs: &[u64]| -> Vec<u64> {
        let mut state = global.initial();
        let mut outs = vec![global.label(state)];
        for &m in inputs {
            state = global.step(state, m);
            outs.push(global.label(state));
        }
        outs
    };
    let left = run(&[0b01, 0b00, 0b01, 0b11]);
    let right = run(&[0b11, 0b10, 0b01, 0b01]);
    let c_bit = global.outputs().iter().position(|o| o == "c").unwrap();
    for (l, r) in left.iter().zip(&right) {
        assert_eq!(l >> c_bit & 1, r >> c_bit & 1);
    }
}

#[test]
fn system_text_round_trips() {
    let text = "\
# a one-input system
states: 2
init: 0
label 0: g
label 1:
trans 0 {} -> 1
trans 0 {a} -> 0
trans 1 {} -> 1
trans 1 {a} -> 0
";
    let s = TransitionSystem::from_text(text).unwrap();
    assert_eq!(s.inputs(), ["a"]);
    assert_eq!(s.outputs(), ["g"]);
    assert_eq!(s.state_count(), 2);
    assert_eq!(s.step(0, 0), 1);
    assert_eq!(s.step(0, 1), 0);
    assert_eq!(s.label_names(0), BTreeSet::from(["g".to_string()]));
    assert_eq!(s.input_mask(&BTreeSet::from(["a".to_string()])).unwrap(), 1);
    assert_eq!(
        s.input_mask(&BTreeSet::from(["z".to_string()])).unwrap_err(),
        ArchError::UnknownInput("z".into())
    );
    assert_eq!(TransitionSystem::from_text(&s.to_text()).unwrap(), s);
}

#[test]
fn partial_tables_are_rejected() {
    let text = "states: 2\ninit: 0\ntrans 0 {} -> 1\ntrans 0 {a} -> 0\ntrans 1 {} -> 1\n";
    assert_eq!(
        TransitionSystem::from_text(text).unwrap_err(),
        ArchError::MissingTransition { state: 1, input: "{a}".into() }
    );
    let text = "states: 1\ninit: 0\ntrans 0 {} -> 0\ntrans 0 {} -> 0\n";
    assert!(matches!(
        TransitionSystem::from_text(text).unwrap_err(),
        ArchError::Parse { line: 4, .. }
    ));
    let text = "states: 1\ninit: 0\ntrans 0 {} -> 3\n";
    assert_eq!(TransitionSystem::from_text(text).unwrap_err(), ArchError::UnknownState(3));
    let text = "init: 0\ntrans 0 {} -> 0\n";
    assert!(matches!(TransitionSystem::from_text(text).unwrap_err(), ArchError::Parse { .. }));
}
