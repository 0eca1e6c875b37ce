use promptltl::coloring::{
    alt, apply_coloring, change_points, colorize, colorize_neg, is_k_bounded, is_k_spaced,
    rel, ColorProp, ColoringError,
};
use promptltl::logic::{eval, min_bound, parse_formula, parse_word};
use promptltl::testkit::Generator;

fn r() -> ColorProp {
    ColorProp::new("r")
}

#[test]
fn rel_is_identity_without_prompts() {
    for src in ["a", "G a", "a U (b & X c)", "!(a -> b)"] {
        let f = parse_formula(src).unwrap();
        assert_eq!(rel(&f, &r()).unwrap(), f);
    }
}

#[test]
fn rel_rewrites_prompts_into_two_blocks() {
    let f = parse_formula("FP a").unwrap();
    let expected = parse_formula("(r -> (r U (!r U a))) & (!r -> (!r U (r U a)))").unwrap();
    assert_eq!(rel(&f, &r()).unwrap(), expected);

    let g = parse_formula("X FP a").unwrap();
    let expected =
        parse_formula("X ((r -> (r U (!r U a))) & (!r -> (!r U (r U a))))").unwrap();
    assert_eq!(rel(&g, &r()).unwrap(), expected);
}

#[test]
fn rel_output_is_prompt_free_and_linear() {
    let mut g = Generator::new(11);
    for _ in 0..200 {
        let f = g.formula(&["a", "b", "c"], 30, true);
        let rewritten = rel(&f, &r()).unwrap();
        assert!(!rewritten.has_prompt());
        assert!(
            rewritten.size() <= 9 * f.size() + 7,
            "size {} vs {}",
            rewritten.size(),
            f.size()
        );
    }
}

#[test]
fn rel_rejects_a_used_color() {
    let f = parse_formula("r U a").unwrap();
    assert_eq!(
        rel(&f, &r()).unwrap_err(),
        ColoringError::ColorInFormula("r".to_string())
    );
}

#[test]
fn alt_demands_both_colors_forever() {
    let f = alt(&r());
    assert_eq!(f, parse_formula("G F r & G F !r").unwrap());
    assert!(eval(&parse_word(";{r}{}").unwrap(), 0, 0, &f));
    assert!(!eval(&parse_word(";{r}").unwrap(), 0, 0, &f));
    assert!(eval(&parse_word("{r}{r}{};{r}{}{}").unwrap(), 0, 0, &f));
}

#[test]
fn colorize_appends_the_alternation() {
    let f = parse_formula("FP a").unwrap();
    let c = colorize(&f, &r()).unwrap();
    let expected = promptltl::Formula::and(rel(&f, &r()).unwrap(), alt(&r()));
    assert_eq!(c, expected);

    let g = parse_formula("G a").unwrap();
    let cg = colorize(&g, &r()).unwrap();
    assert_eq!(cg, parse_formula("(G a) & (G F r & G F !r)").unwrap());
}

#[test]
fn colorize_size_stays_linear() {
    let mut g = Generator::new(12);
    for _ in 0..200 {
        let f = g.formula(&["a", "b"], 30, true);
        let c = colorize(&f, &r()).unwrap();
        assert!(c.size() <= 9 * f.size() + 11, "size {} vs {}", c.size(), f.size());
    }
}

#[test]
fn colorize_neg_negates_the_rewriting() {
    let rp = ColorProp::new("rp");
    let f = parse_formula("a").unwrap();
    let c = colorize_neg(&f, &rp).unwrap();
    assert_eq!(
        c,
        promptltl::Formula::and(alt(&rp), parse_formula("!a").unwrap())
    );
    assert!(!c.has_prompt());

    // With a never true, failing FP a is easy: any alternating word works.
    let g = parse_formula("FP a").unwrap();
    let cg = colorize_neg(&g, &rp).unwrap();
    assert!(!cg.has_prompt());
    let w = parse_word(";{rp}{}").unwrap();
    assert!(eval(&w, 0, 0, &cg));
}

#[test]
fn change_points_include_zero_and_repeat() {
    let w = parse_word(";{r}{r}{}{}").unwrap();
    let cp = change_points(&w, &r()).unwrap();
    assert!(cp.has_infinitely_many());
    assert_eq!(cp.up_to(8), vec![0, 2, 4, 6, 8]);
    assert!(cp.contains(0) && cp.contains(6));
    assert!(!cp.contains(5));

    let constant = parse_word(";{r}").unwrap();
    let cp = change_points(&constant, &r()).unwrap();
    assert!(!cp.has_infinitely_many());
    assert_eq!(cp.up_to(10), vec![0]);

    // A one-step prefix against an alternating loop changes everywhere.
    let seam = parse_word("{};{r}{}").unwrap();
    let cp = change_points(&seam, &r()).unwrap();
    assert_eq!(cp.up_to(5), vec![0, 1, 2, 3, 4, 5]);

    let missing = parse_word(";{a}").unwrap();
    assert_eq!(
        change_points(&missing, &r()).unwrap_err(),
        ColoringError::ColorMissing("r".to_string())
    );
}

#[test]
fn spacing_and_boundedness_read_block_lengths() {
    let w = parse_word(";{r}{r}{}{}").unwrap();
    assert!(is_k_spaced(&w, &r(), 2));
    assert!(!is_k_spaced(&w, &r(), 3));
    assert!(is_k_bounded(&w, &r(), 2));
    assert!(!is_k_bounded(&w, &r(), 1));

    let constant = parse_word(";{r}").unwrap();
    assert!(!is_k_spaced(&constant, &r(), 1));
    assert!(!is_k_bounded(&constant, &r(), 5));

    let quick = parse_word(";{r}{}").unwrap();
    assert!(is_k_bounded(&quick, &r(), 1));
    assert!(is_k_spaced(&quick, &r(), 1));
}

#[test]
fn canonical_coloring_projects_back() {
    let w = parse_word(";{}").unwrap();
    let colored = apply_coloring(&w, &r(), 2).unwrap();
    assert_eq!(colored.to_string(), ";{r}{r}{}{}");

    let mut g = Generator::new(13);
    for _ in 0..200 {
        let w = g.word(&["a", "b"], 3, 4);
        let k = 1 + (g.rng().gen_range(0..5_usize));
        let colored = apply_coloring(&w, &r(), k).unwrap();
        for n in 0..w.prefix_len() + 2 * colored.loop_len() {
            for p in ["a", "b"] {
                assert_eq!(colored.holds_at(p, n), w.holds_at(p, n));
            }
        }
        assert!(is_k_spaced(&colored, &r(), k));
        assert!(is_k_bounded(&colored, &r(), k));
    }

    let already = parse_word(";{r}").unwrap();
    assert_eq!(
        apply_coloring(&already, &r(), 1).unwrap_err(),
        ColoringError::ColorInWord("r".to_string())
    );
}

use rand::Rng;

#[test]
fn random_colorings_respect_their_bounds() {
    let mut g = Generator::new(14);
    for _ in 0..100 {
        let w = g.word(&["a"], 2, 3);
        let k = 1 + g.rng().gen_range(0..4_usize);
        let spaced = g.spaced_coloring(&w, &r(), k);
        assert!(is_k_spaced(&spaced, &r(), k), "k={k} word={spaced}");
        let bounded = g.bounded_coloring(&w, &r(), k);
        assert!(is_k_bounded(&bounded, &r(), k), "k={k} word={bounded}");
        for n in 0..w.prefix_len() + w.loop_len() {
            assert_eq!(spaced.holds_at("a", n), w.holds_at("a", n));
            assert_eq!(bounded.holds_at("a", n), w.holds_at("a", n));
        }
    }
}

#[test]
fn spaced_colorings_satisfy_the_colored_formula() {
    // Holding with bound k transfers to every k-spaced coloring.
    let mut g = Generator::new(15);
    let mut checked = 0;
    while checked < 60 {
        let f = g.prompt_formula(&["a", "b"], 6);
        let w = g.word(&["a", "b"], 2, 3);
        let Some(k) = min_bound(&w, &f, 12) else { continue };
        let k = k.max(1);
        let c = colorize(&f, &r()).unwrap();
        let canonical = apply_coloring(&w, &r(), k).unwrap();
        assert!(eval(&canonical, 0, 0, &c), "formula {f} word {w} k {k}");
        for _ in 0..3 {
            let colored = g.spaced_coloring(&w, &r(), k);
            assert!(eval(&colored, 0, 0, &c), "formula {f} word {colored} k {k}");
        }
        checked += 1;
    }
}

#[test]
fn bounded_colorings_certify_twice_the_bound() {
    // A k-bounded coloring satisfying the colored formula certifies the
    // original with bound 2k.
    let mut g = Generator::new(16);
    let mut certified = 0;
    for _ in 0..400 {
        let f = g.prompt_formula(&["a", "b"], 6);
        let w = g.word(&["a", "b"], 2, 3);
        let k = 1 + g.rng().gen_range(0..3_usize);
        let c = colorize(&f, &r()).unwrap();
        let colored = g.bounded_coloring(&w, &r(), k);
        if eval(&colored, 0, 0, &c) {
            assert!(eval(&w, 0, 2 * k, &f), "formula {f} word {w} k {k}");
            certified += 1;
        }
    }
    assert!(certified >= 40, "only {certified} certifying samples");
}
