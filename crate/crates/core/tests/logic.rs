use promptltl::logic::{eval, min_bound, parse_formula, parse_word, Formula};

fn atom(s: &str) -> Formula {
    Formula::Atom(s.to_string())
}

fn neg(s: &str) -> Formula {
    Formula::NegAtom(s.to_string())
}

#[test]
fn parses_prompt_eventually() {
    let f = parse_formula("FP a").unwrap();
    assert_eq!(f, Formula::prompt_eventually(atom("a")));
}

#[test]
fn uppercase_runs_split_longest_first() {
    let spaced = parse_formula("G FP a").unwrap();
    let fused = parse_formula("GFP a").unwrap();
    assert_eq!(spaced, fused);
    assert_eq!(fused, Formula::always(Formula::prompt_eventually(atom("a"))));

    let gf = parse_formula("GF a").unwrap();
    assert_eq!(gf, Formula::always(Formula::eventually(atom("a"))));
}

#[test]
fn negation_is_pushed_to_atoms() {
    let f = parse_formula("!(a U b)").unwrap();
    assert_eq!(f, Formula::release(neg("a"), neg("b")));

    let g = parse_formula("!(a & X b)").unwrap();
    assert_eq!(g, Formula::or(neg("a"), Formula::next(neg("b"))));

    let h = parse_formula("!!a").unwrap();
    assert_eq!(h, atom("a"));
}

#[test]
fn negated_prompt_operator_is_rejected() {
    let e = parse_formula("!(FP a)").unwrap_err();
    assert!(e.msg.contains("negated prompt operator"), "got: {}", e.msg);
    assert!(parse_formula("!(X FP a)").is_err());
    assert!(parse_formula("G ! FP a").is_err());
}

#[test]
fn implication_desugars() {
    let f = parse_formula("a -> b").unwrap();
    assert_eq!(f, Formula::or(neg("a"), atom("b")));
    // The antecedent is negated, so a prompt operator may not appear there.
    assert!(parse_formula("FP a -> b").is_err());
    assert!(parse_formula("a -> FP b").is_ok());
}

#[test]
fn precedence_binds_as_documented() {
    // Unary tighter than U/R, U/R tighter than &, & tighter than |.
    let f = parse_formula("a | b & c U X d").unwrap();
    assert_eq!(
        f,
        Formula::or(
            atom("a"),
            Formula::and(atom("b"), Formula::until(atom("c"), Formula::next(atom("d"))))
        )
    );
    // U is right associative.
    let g = parse_formula("a U b U c").unwrap();
    assert_eq!(
        g,
        Formula::until(atom("a"), Formula::until(atom("b"), atom("c")))
    );
}

#[test]
fn display_round_trips() {
    for src in [
        "a",
        "!a",
        "true",
        "false",
        "a & b | c",
        "a & (b | c)",
        "X (a U b)",
        "FP (a & b)",
        "G FP a",
        "F (a R b)",
        "a U b U c",
        "(a U b) U c",
        "G (r -> FP g)",
    ] {
        let f = parse_formula(src).unwrap();
        let printed = f.to_string();
        let back = parse_formula(&printed)
            .unwrap_or_else(|e| panic!("reparse of {printed:?}: {e}"));
        assert_eq!(back, f, "round trip through {printed:?}");
    }
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_formula("a &").unwrap_err();
    assert_eq!(e.pos, 3);
    let e = parse_formula("a @ b").unwrap_err();
    assert_eq!(e.pos, 2);
    let e = parse_formula("(a | b").unwrap_err();
    assert_eq!(e.pos, 0);
    assert!(parse_formula("a Q b").is_err());
}

#[test]
fn word_literals_parse_and_print() {
    let w = parse_word("{a}{}; {a,b}{b}").unwrap();
    assert_eq!(w.prefix_len(), 2);
    assert_eq!(w.loop_len(), 2);
    assert!(w.holds_at("a", 0));
    assert!(!w.holds_at("a", 1));
    assert!(w.holds_at("a", 2) && w.holds_at("b", 2));
    assert!(w.holds_at("b", 3));
    // Position 4 wraps to the loop start.
    assert!(w.holds_at("a", 4));
    assert_eq!(w.to_string(), "{a}{};{a,b}{b}");

    assert!(parse_word("{a}{b}").is_err());
    assert!(parse_word("{a};").is_err());
    assert!(parse_word("{a};{A}").is_err());
}

#[test]
fn prompt_bound_changes_the_verdict() {
    // a appears every third step, so waiting two steps always suffices but
    // waiting one step does not.
    let w = parse_word(";{}{}{a}").unwrap();
    let f = parse_formula("G FP a").unwrap();
    assert!(eval(&w, 0, 2, &f));
    assert!(!eval(&w, 0, 1, &f));
    assert_eq!(min_bound(&w, &f, 10), Some(2));
}

#[test]
fn evaluation_positions_index_the_suffix() {
    let w = parse_word("{a};{}{b}").unwrap();
    let f = parse_formula("a").unwrap();
    assert!(eval(&w, 0, 0, &f));
    assert!(!eval(&w, 1, 0, &f));
    let g = parse_formula("b").unwrap();
    assert!(eval(&w, 2, 0, &g));
    assert!(!eval(&w, 3, 0, &g));
    // Positions beyond the representation fold into the loop.
    assert!(eval(&w, 100, 0, &g));
    assert!(!eval(&w, 101, 0, &g));
}

#[test]
fn plain_operators_ignore_the_bound() {
    let w = parse_word("{a};{}{b}").unwrap();
    let f = parse_formula("F b & a & X !a").unwrap();
    assert!(eval(&w, 0, 0, &f));
    assert!(eval(&w, 0, 7, &f));

    let g = parse_formula("G F b").unwrap();
    assert!(eval(&w, 0, 0, &g));
    let h = parse_formula("G F a").unwrap();
    assert!(!eval(&w, 0, 0, &h));
}

#[test]
fn until_and_release_fixpoints() {
    let w = parse_word("{a}{a}{b};{}").unwrap();
    assert!(eval(&w, 0, 0, &parse_formula("a U b").unwrap()));
    assert!(!eval(&w, 0, 0, &parse_formula("a U c").unwrap()));

    // b R a: a must hold up to and including the first b.
    let v = parse_word(";{a}{a,b}{}").unwrap();
    assert!(eval(&v, 0, 0, &parse_formula("b R a").unwrap()));
    let u = parse_word(";{a}{b}{}").unwrap();
    assert!(!eval(&u, 0, 0, &parse_formula("b R a").unwrap()));
    // G via R: holds only when the body never fails.
    assert!(eval(&parse_word(";{a}").unwrap(), 0, 0, &parse_formula("G a").unwrap()));
    assert!(!eval(&parse_word("{a};{a}{}").unwrap(), 0, 0, &parse_formula("G a").unwrap()));
}

#[test]
fn min_bound_none_when_unsatisfiable() {
    let w = parse_word(";{}{a}").unwrap();
    assert_eq!(min_bound(&w, &parse_formula("G FP b").unwrap(), 5), None);
    assert_eq!(min_bound(&w, &parse_formula("G FP a").unwrap(), 5), Some(1));
    assert_eq!(min_bound(&w, &parse_formula("F a").unwrap(), 5), Some(0));
    // A cap below the least sufficient bound reports absence.
    assert_eq!(min_bound(&w, &parse_formula("G FP a").unwrap(), 0), None);
}

#[test]
fn nested_prompts_share_the_bound() {
    // The inner prompt needs two steps (b to a), the outer needs three
    // (position 1 to the next b), and both read the same bound.
    let w = parse_word(";{b}{}{a}{}").unwrap();
    let f = parse_formula("G FP (b & FP a)").unwrap();
    assert_eq!(min_bound(&w, &f, 10), Some(3));
    assert!(eval(&w, 0, 3, &f));
    assert!(!eval(&w, 0, 2, &f));
}

#[test]
fn formula_size_counts_distinct_subformulas() {
    let f = parse_formula("a & a").unwrap();
    assert_eq!(f.size(), 2);
    let g = parse_formula("(a U b) | (a U b)").unwrap();
    assert_eq!(g.size(), 4);
    let h = parse_formula("FP a").unwrap();
    assert_eq!(h.size(), 2);
}

#[test]
fn suffix_reindexes_into_the_loop() {
    let w = parse_word("{a};{b}{c}").unwrap();
    let s1 = w.suffix(1);
    assert_eq!(s1.to_string(), ";{b}{c}");
    let s2 = w.suffix(2);
    assert_eq!(s2.to_string(), ";{c}{b}");
    let s4 = w.suffix(4);
    assert_eq!(s4.to_string(), ";{c}{b}");
}

mod properties {
    use promptltl::logic::{eval, min_bound, parse_formula};
    use promptltl::testkit::oracle::{
        brute_force_eval, brute_force_eval_widened, brute_force_min_bound,
    };
    use promptltl::testkit::Generator;
    use proptest::prelude::*;

    const PROPS: [&str; 3] = ["a", "b", "c"];

    proptest! {
        #[test]
        fn eval_matches_reference(seed in any::<u64>()) {
            let mut g = Generator::new(seed);
            let f = g.formula(&PROPS, 8, true);
            let w = g.word(&PROPS, 3, 4);
            let n = (seed % 5) as usize;
            for k in 0..6 {
                prop_assert_eq!(
                    eval(&w, n, k, &f),
                    brute_force_eval(&w, n, k, &f),
                    "formula {} word {} pos {} bound {}", f, w, n, k
                );
            }
        }

        #[test]
        fn reference_scan_window_is_saturated(seed in any::<u64>()) {
            let mut g = Generator::new(seed);
            let f = g.formula(&PROPS, 8, true);
            let w = g.word(&PROPS, 3, 4);
            for k in 0..4 {
                prop_assert_eq!(
                    brute_force_eval(&w, 0, k, &f),
                    brute_force_eval_widened(&w, 0, k, &f)
                );
            }
        }

        #[test]
        fn min_bound_matches_linear_scan(seed in any::<u64>()) {
            let mut g = Generator::new(seed);
            let f = g.formula(&PROPS, 6, true);
            let w = g.word(&PROPS, 2, 4);
            for cap in [0, 3, 12] {
                prop_assert_eq!(
                    min_bound(&w, &f, cap),
                    brute_force_min_bound(&w, &f, cap)
                );
            }
        }

        #[test]
        fn satisfaction_is_upward_closed(seed in any::<u64>()) {
            let mut g = Generator::new(seed);
            let f = g.formula(&PROPS, 8, true);
            let w = g.word(&PROPS, 3, 4);
            let n = (seed % 4) as usize;
            for k in 0..5 {
                if eval(&w, n, k, &f) {
                    prop_assert!(eval(&w, n, k + 1, &f), "{} at {} on {}", f, k, w);
                }
            }
        }

        #[test]
        fn prompt_free_formulas_ignore_the_bound(seed in any::<u64>()) {
            let mut g = Generator::new(seed);
            let f = g.formula(&PROPS, 8, false);
            let w = g.word(&PROPS, 3, 4);
            let base = eval(&w, 0, 0, &f);
            for k in [3, 17] {
                prop_assert_eq!(eval(&w, 0, k, &f), base);
            }
        }

        #[test]
        fn display_parse_round_trip(seed in any::<u64>()) {
            let mut g = Generator::new(seed);
            let f = g.formula(&PROPS, 10, true);
            let printed = f.to_string();
            let back = parse_formula(&printed).expect("printed formula parses");
            prop_assert_eq!(back, f, "printed as {}", printed);
        }

        #[test]
        fn eval_at_position_matches_suffix_eval(seed in any::<u64>()) {
            let mut g = Generator::new(seed);
            let f = g.formula(&PROPS, 6, true);
            let w = g.word(&PROPS, 3, 3);
            let n = (seed % 7) as usize;
            for k in 0..4 {
                prop_assert_eq!(
                    eval(&w, n, k, &f),
                    eval(&w.suffix(n), 0, k, &f),
                    "formula {} word {} pos {}", f, w, n
                );
            }
        }
    }
}
