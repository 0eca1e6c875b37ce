use std::collections::BTreeMap;

use super::formula::Formula;
use super::word::UltimatelyPeriodicWord;

/// Evaluate `formula` on `word` at position `n` with prompt bound `k`.
///
/// A prompt eventuality holds at a position when its body holds at most `k`
/// steps later; the plain operators keep their usual semantics and ignore
/// the bound. Satisfaction is computed bottom-up over the distinct
/// subformulas with one table entry per position of the folded word
/// (prefix positions plus one slot per loop position).
pub fn eval(word: &UltimatelyPeriodicWord, n: usize, k: usize, formula: &Formula) -> bool {
    let tables = Tables::build(word, k, formula);
    let pos = tables.canon(n);
    tables.holds(formula, pos)
}

/// The least bound at most `k_max` under which `formula` holds on `word`
/// at position 0, if any.
///
/// Satisfaction is monotone in the bound. Beyond one full sweep of the
/// folded word every prompt window already covers all positions it can
/// ever reach, so bounds past that sweep are equivalent to it and binary
/// search suffices.
pub fn min_bound(
    word: &UltimatelyPeriodicWord,
    formula: &Formula,
    k_max: usize,
) -> Option<usize> {
    let saturation = word.prefix_len() + word.loop_len();
    let hi = k_max.min(saturation);
    if !eval(word, 0, hi, formula) {
        return None;
    }
    let mut lo = 0;
    let mut hi = hi;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if eval(word, 0, mid, formula) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

struct Tables<'f> {
    index: BTreeMap<&'f Formula, usize>,
    sat: Vec<Vec<bool>>,
    prefix_len: usize,
    total: usize,
}

impl<'f> Tables<'f> {
    fn build(word: &UltimatelyPeriodicWord, k: usize, formula: &'f Formula) -> Self {
        let prefix_len = word.prefix_len();
        let total = prefix_len + word.loop_len();
        let subs = formula.subformulas();
        let mut index = BTreeMap::new();
        for (i, sub) in subs.iter().enumerate() {
            index.insert(*sub, i);
        }
        let mut tables = Self {
            index,
            sat: Vec::with_capacity(subs.len()),
            prefix_len,
            total,
        };
        for sub in &subs {
            let table = tables.compute(word, k, sub);
            tables.sat.push(table);
        }
        tables
    }

    fn holds(&self, f: &Formula, pos: usize) -> bool {
        self.sat[self.index[f]][pos]
    }

    /// Successor of a folded position, wrapping from the loop end to its
    /// start.
    fn succ(&self, pos: usize) -> usize {
        if pos + 1 < self.total {
            pos + 1
        } else {
            self.prefix_len
        }
    }

    /// Fold an absolute position into the table range.
    fn canon(&self, pos: usize) -> usize {
        if pos < self.total {
            pos
        } else {
            let loop_len = self.total - self.prefix_len;
            self.prefix_len + (pos - self.prefix_len) % loop_len
        }
    }

    fn compute(&self, word: &UltimatelyPeriodicWord, k: usize, f: &Formula) -> Vec<bool> {
        let total = self.total;
        match f {
            Formula::True => vec![true; total],
            Formula::False => vec![false; total],
            Formula::Atom(name) => (0..total).map(|n| word.holds_at(name, n)).collect(),
            Formula::NegAtom(name) => (0..total).map(|n| !word.holds_at(name, n)).collect(),
            Formula::And(a, b) => {
                let ta = &self.sat[self.index[a.as_ref()]];
                let tb = &self.sat[self.index[b.as_ref()]];
                (0..total).map(|n| ta[n] && tb[n]).collect()
            }
            Formula::Or(a, b) => {
                let ta = &self.sat[self.index[a.as_ref()]];
                let tb = &self.sat[self.index[b.as_ref()]];
                (0..total).map(|n| ta[n] || tb[n]).collect()
            }
            Formula::Next(a) => {
                let ta = &self.sat[self.index[a.as_ref()]];
                (0..total).map(|n| ta[self.succ(n)]).collect()
            }
            Formula::Until(a, b) => {
                let ta = &self.sat[self.index[a.as_ref()]];
                let tb = &self.sat[self.index[b.as_ref()]];
                self.fixpoint(false, |n, next| tb[n] || (ta[n] && next))
            }
            Formula::Release(a, b) => {
                let ta = &self.sat[self.index[a.as_ref()]];
                let tb = &self.sat[self.index[b.as_ref()]];
                self.fixpoint(true, |n, next| tb[n] && (ta[n] || next))
            }
            Formula::PromptEventually(a) => {
                let ta = &self.sat[self.index[a.as_ref()]];
                // Window positions repeat once every slot has been visited.
                let window = k.min(total);
                (0..total)
                    .map(|n| (0..=window).any(|j| ta[self.canon(n + j)]))
                    .collect()
            }
        }
    }

    /// Solve `table[n] = step(n, table[succ(n)])` backwards. Two sweeps over
    /// the loop reach the fixpoint because a shortest witness or refutation
    /// never needs to wrap more than once; the prefix then resolves in a
    /// single straight-line pass.
    fn fixpoint(&self, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
        let mut table = vec![init; self.total];
        for _ in 0..2 {
            for n in (self.prefix_len..self.total).rev() {
                table[n] = step(n, table[self.succ(n)]);
            }
        }
        for n in (0..self.prefix_len).rev() {
            table[n] = step(n, table[self.succ(n)]);
        }
        table
    }
}
