//! The alternating color rewriting.
//!
//! A prompt eventuality `FP psi` is replaced by a plain LTL formula over an
//! extra color proposition: the body must be reached before the color flips
//! twice. Together with the requirement that the color flips forever, bounds
//! on the color block lengths translate back and forth into prompt bounds:
//! a formula holding with bound `k` holds on every coloring whose blocks are
//! at least `k` long, and a coloring with blocks at most `k` certifies the
//! original formula with bound `2k`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::logic::{Formula, UltimatelyPeriodicWord};

/// A fresh proposition used to carry the alternating color.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ColorProp(String);

impl ColorProp {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ColorProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("color proposition '{0}' already occurs in the formula")]
    ColorInFormula(String),
    #[error("color proposition '{0}' already occurs in the word")]
    ColorInWord(String),
    #[error("color proposition '{0}' does not occur in the word")]
    ColorMissing(String),
}

/// Replace every prompt eventuality by the two-block reachability pattern
/// over `r`: the body must hold before the current color block and the next
/// one have both passed. FP-free formulas come back unchanged.
pub fn rel(f: &Formula, r: &ColorProp) -> Result<Formula, ColoringError> {
    if f.atoms().contains(r.name()) {
        return Err(ColoringError::ColorInFormula(r.name().to_string()));
    }
    Ok(rel_unchecked(f, r))
}

fn rel_unchecked(f: &Formula, r: &ColorProp) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => f.clone(),
        Formula::And(a, b) => {
            Formula::and(rel_unchecked(a, r), rel_unchecked(b, r))
        }
        Formula::Or(a, b) => Formula::or(rel_unchecked(a, r), rel_unchecked(b, r)),
        Formula::Next(a) => Formula::next(rel_unchecked(a, r)),
        Formula::Until(a, b) => {
            Formula::until(rel_unchecked(a, r), rel_unchecked(b, r))
        }
        Formula::Release(a, b) => {
            Formula::release(rel_unchecked(a, r), rel_unchecked(b, r))
        }
        Formula::PromptEventually(a) => {
            let body = rel_unchecked(a, r);
            let pos = Formula::Atom(r.name().to_string());
            let neg = Formula::NegAtom(r.name().to_string());
            // r -> (r U (!r U body))  when the current block is an r-block,
            // !r -> (!r U (r U body)) when it is a !r-block.
            let from_pos = Formula::or(
                neg.clone(),
                Formula::until(pos.clone(), Formula::until(neg.clone(), body.clone())),
            );
            let from_neg = Formula::or(
                pos.clone(),
                Formula::until(neg, Formula::until(pos, body)),
            );
            Formula::and(from_pos, from_neg)
        }
    }
}

/// The color changes infinitely often: `G F r & G F !r`.
pub fn alt(r: &ColorProp) -> Formula {
    Formula::and(
        Formula::always(Formula::eventually(Formula::Atom(r.name().to_string()))),
        Formula::always(Formula::eventually(Formula::NegAtom(r.name().to_string()))),
    )
}

/// The colored overapproximation `rel(f, r) & alt(r)`.
pub fn colorize(f: &Formula, r: &ColorProp) -> Result<Formula, ColoringError> {
    Ok(Formula::and(rel(f, r)?, alt(r)))
}

/// The colored complement `alt(r) & !rel(f, r)`, in negation normal form.
/// Negating is legal because `rel` output contains no prompt operator.
pub fn colorize_neg(f: &Formula, r: &ColorProp) -> Result<Formula, ColoringError> {
    let relativized = rel(f, r)?;
    let negated = relativized
        .negated()
        .expect("rel output is prompt-free and negatable");
    Ok(Formula::and(alt(r), negated))
}

/// Positions where the color flips, described finitely: explicit points
/// before the periodic regime plus a repeating pattern of offsets.
///
/// Position 0 always counts as a change point. The periodic regime starts
/// one step into the loop because a flip compares adjacent positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangePoints {
    /// Change points at positions below `start`, in increasing order.
    pub initial: Vec<usize>,
    /// First position governed by the repeating pattern.
    pub start: usize,
    /// Length of the repeating pattern (the loop length).
    pub period: usize,
    /// Change points in `[start, start + period)`; each repeats at every
    /// multiple of `period` after it. Empty means finitely many changes.
    pub offsets: Vec<usize>,
}

impl ChangePoints {
    pub fn has_infinitely_many(&self) -> bool {
        !self.offsets.is_empty()
    }

    pub fn contains(&self, n: usize) -> bool {
        if n < self.start {
            self.initial.binary_search(&n).is_ok()
        } else {
            let folded = self.start + (n - self.start) % self.period;
            self.offsets.binary_search(&folded).is_ok()
        }
    }

    /// All change points up to and including `n`, in increasing order.
    pub fn up_to(&self, n: usize) -> Vec<usize> {
        let mut points: Vec<usize> =
            self.initial.iter().copied().filter(|&p| p <= n).collect();
        let mut round = 0;
        loop {
            let mut pushed = false;
            for &o in &self.offsets {
                let p = o + round * self.period;
                if p <= n {
                    points.push(p);
                    pushed = true;
                }
            }
            if !pushed {
                break;
            }
            round += 1;
        }
        points
    }
}

/// Compute the change points of `r` in `w`, which must mention the color.
pub fn change_points(
    w: &UltimatelyPeriodicWord,
    r: &ColorProp,
) -> Result<ChangePoints, ColoringError> {
    if w.prop_index(r.name()).is_none() {
        return Err(ColoringError::ColorMissing(r.name().to_string()));
    }
    Ok(change_points_unchecked(w, r))
}

fn change_points_unchecked(w: &UltimatelyPeriodicWord, r: &ColorProp) -> ChangePoints {
    let color = |n: usize| w.holds_at(r.name(), n);
    let start = w.prefix_len() + 1;
    let period = w.loop_len();
    let mut initial = vec![0];
    for n in 1..start {
        if color(n) != color(n - 1) {
            initial.push(n);
        }
    }
    let mut offsets = Vec::new();
    for n in start..start + period {
        if color(n) != color(n - 1) {
            offsets.push(n);
        }
    }
    ChangePoints {
        initial,
        start,
        period,
        offsets,
    }
}

/// Consecutive gaps between change points, covering every distinct block
/// length; empty when some block is infinite.
fn block_lengths(w: &UltimatelyPeriodicWord, r: &ColorProp) -> Vec<usize> {
    let cp = change_points_unchecked(w, r);
    if !cp.has_infinitely_many() {
        return Vec::new();
    }
    // Two full periods past the start expose every gap, including the one
    // that wraps from the end of a period to the start of the next.
    let points = cp.up_to(cp.start + 2 * cp.period);
    points.windows(2).map(|p| p[1] - p[0]).collect()
}

/// Every color block is at least `k` long and the color flips forever.
/// A word that never mentions `r` has a single infinite block, so no.
pub fn is_k_spaced(w: &UltimatelyPeriodicWord, r: &ColorProp, k: usize) -> bool {
    assert!(k >= 1, "spacing bound must be at least 1");
    let lens = block_lengths(w, r);
    !lens.is_empty() && lens.iter().all(|&l| l >= k)
}

/// Every color block is at most `k` long; this forces infinitely many
/// flips, since an unbroken tail would be an infinite block.
pub fn is_k_bounded(w: &UltimatelyPeriodicWord, r: &ColorProp, k: usize) -> bool {
    let lens = block_lengths(w, r);
    !lens.is_empty() && lens.iter().all(|&l| l <= k)
}

/// Overlay the canonical coloring that flips every `k` steps: position `n`
/// carries the color exactly when `n / k` is even. The loop is expanded to
/// the least common multiple of its length and `2k` so the overlay stays
/// periodic.
pub fn apply_coloring(
    w: &UltimatelyPeriodicWord,
    r: &ColorProp,
    k: usize,
) -> Result<UltimatelyPeriodicWord, ColoringError> {
    assert!(k >= 1, "block length must be at least 1");
    if w.prop_index(r.name()).is_some() {
        return Err(ColoringError::ColorInWord(r.name().to_string()));
    }
    let colored = |n: usize| (n / k) % 2 == 0;
    let step = |n: usize| -> BTreeSet<String> {
        let mut set: BTreeSet<String> = w
            .props()
            .iter()
            .filter(|p| w.holds_at(p, n))
            .cloned()
            .collect();
        if colored(n) {
            set.insert(r.name().to_string());
        }
        set
    };
    let prefix_len = w.prefix_len();
    // Beyond the prefix both ingredients repeat: the base word with its loop
    // length and the overlay with period 2k, so their lcm is a loop again.
    let loop_len = lcm(w.loop_len(), 2 * k);
    let prefix: Vec<BTreeSet<String>> = (0..prefix_len).map(step).collect();
    let loop_part: Vec<BTreeSet<String>> =
        (prefix_len..prefix_len + loop_len).map(step).collect();
    let mut props = w.props().to_vec();
    props.push(r.name().to_string());
    Ok(UltimatelyPeriodicWord::new(props, prefix, loop_part))
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
