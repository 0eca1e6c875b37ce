//! Reference implementations, deliberately written by unfolding the
//! definitions instead of sharing machinery with the checked code.

use std::collections::BTreeMap;

use crate::logic::{Formula, UltimatelyPeriodicWord};

/// Evaluate by direct recursion on the semantics, starting at position `n`.
/// Untils and releases scan forward far enough to visit every distinct
/// suffix once more after the word has looped; results are cached per
/// (subformula, folded position) because a suffix repeats exactly when its
/// folded position does.
pub fn brute_force_eval(w: &UltimatelyPeriodicWord, n: usize, k: usize, f: &Formula) -> bool {
    let scan = w.prefix_len() + 2 * w.loop_len();
    go(w, k, f, n, scan, &mut BTreeMap::new())
}

/// Same verdict with a doubled scan window; comparing against
/// `brute_force_eval` checks that the window is already saturated.
pub fn brute_force_eval_widened(
    w: &UltimatelyPeriodicWord,
    n: usize,
    k: usize,
    f: &Formula,
) -> bool {
    let scan = 2 * (w.prefix_len() + 2 * w.loop_len());
    go(w, k, f, n, scan, &mut BTreeMap::new())
}

/// The least bound at most `k_max` under which the formula holds at
/// position 0, by linear scan from below.
pub fn brute_force_min_bound(
    w: &UltimatelyPeriodicWord,
    f: &Formula,
    k_max: usize,
) -> Option<usize> {
    (0..=k_max).find(|&k| brute_force_eval(w, 0, k, f))
}

fn fold(w: &UltimatelyPeriodicWord, n: usize) -> usize {
    if n < w.prefix_len() {
        n
    } else {
        w.prefix_len() + (n - w.prefix_len()) % w.loop_len()
    }
}

fn go<'f>(
    w: &UltimatelyPeriodicWord,
    k: usize,
    f: &'f Formula,
    n: usize,
    scan: usize,
    cache: &mut BTreeMap<(&'f Formula, usize), bool>,
) -> bool {
    let n = fold(w, n);
    if let Some(&v) = cache.get(&(f, n)) {
        return v;
    }
    let v = match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => w.holds_at(a, n),
        Formula::NegAtom(a) => !w.holds_at(a, n),
        Formula::And(a, b) => {
            go(w, k, a, n, scan, cache) && go(w, k, b, n, scan, cache)
        }
        Formula::Or(a, b) => {
            go(w, k, a, n, scan, cache) || go(w, k, b, n, scan, cache)
        }
        Formula::Next(a) => go(w, k, a, n + 1, scan, cache),
        Formula::Until(a, b) => (0..=scan).any(|j| {
            go(w, k, b, n + j, scan, cache)
                && (0..j).all(|i| go(w, k, a, n + i, scan, cache))
        }),
        Formula::Release(a, b) => (0..=scan).all(|j| {
            go(w, k, b, n + j, scan, cache)
                || (0..j).any(|i| go(w, k, a, n + i, scan, cache))
        }),
        Formula::PromptEventually(a) => {
            (0..=k).any(|j| go(w, k, a, n + j, scan, cache))
        }
    };
    cache.insert((f, n), v);
    v
}
