use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A temporal formula in negation normal form.
///
/// Negation only occurs on atoms. `F φ` and `G φ` are sugar for
/// `true U φ` and `false R φ`; the parser desugars them, and
/// [`Display`](fmt::Display) folds them back for readability.
/// `PromptEventually` is the bounded eventuality: at bound `k` it requires its
/// operand within the next `k` steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    NegAtom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    PromptEventually(Box<Formula>),
}

/// Negating a formula that contains a prompt eventuality would leave negation
/// normal form; there is no dual operator for it.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("negated prompt operator: FP has no negation normal form")]
pub struct NegationError;

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn neg_atom(name: impl Into<String>) -> Self {
        Formula::NegAtom(name.into())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Box::new(a), Box::new(b))
    }

    /// `F φ`, i.e. `true U φ`.
    pub fn eventually(f: Formula) -> Self {
        Formula::until(Formula::True, f)
    }

    /// `G φ`, i.e. `false R φ`.
    pub fn always(f: Formula) -> Self {
        Formula::release(Formula::False, f)
    }

    pub fn prompt_eventually(f: Formula) -> Self {
        Formula::PromptEventually(Box::new(f))
    }

    /// `a -> b` desugared to `!a | b`; fails if `a` contains a prompt
    /// eventuality, which cannot be negated.
    pub fn implies(a: Formula, b: Formula) -> Result<Self, NegationError> {
        Ok(Formula::or(a.negated()?, b))
    }

    /// The dual formula in negation normal form.
    pub fn negated(&self) -> Result<Formula, NegationError> {
        Ok(match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(a) => Formula::NegAtom(a.clone()),
            Formula::NegAtom(a) => Formula::Atom(a.clone()),
            Formula::And(a, b) => Formula::or(a.negated()?, b.negated()?),
            Formula::Or(a, b) => Formula::and(a.negated()?, b.negated()?),
            Formula::Next(f) => Formula::next(f.negated()?),
            Formula::Until(a, b) => Formula::release(a.negated()?, b.negated()?),
            Formula::Release(a, b) => Formula::until(a.negated()?, b.negated()?),
            Formula::PromptEventually(_) => return Err(NegationError),
        })
    }

    /// Number of distinct subformulas, counting the formula itself.
    pub fn size(&self) -> usize {
        let mut seen = BTreeSet::new();
        self.collect_subformulas(&mut seen);
        seen.len()
    }

    fn collect_subformulas<'a>(&'a self, seen: &mut BTreeSet<&'a Formula>) {
        if !seen.insert(self) {
            return;
        }
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => {}
            Formula::Next(f) | Formula::PromptEventually(f) => f.collect_subformulas(seen),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => {
                a.collect_subformulas(seen);
                b.collect_subformulas(seen);
            }
        }
    }

    /// Distinct subformulas in bottom-up order (children before parents).
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut order = Vec::new();
        let mut seen = BTreeSet::new();
        self.postorder(&mut order, &mut seen);
        order
    }

    fn postorder<'a>(&'a self, order: &mut Vec<&'a Formula>, seen: &mut BTreeSet<&'a Formula>) {
        if seen.contains(self) {
            return;
        }
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => {}
            Formula::Next(f) | Formula::PromptEventually(f) => f.postorder(order, seen),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => {
                a.postorder(order, seen);
                b.postorder(order, seen);
            }
        }
        if seen.insert(self) {
            order.push(self);
        }
    }

    /// Names of the atomic propositions occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        for sub in self.subformulas() {
            match sub {
                Formula::Atom(a) | Formula::NegAtom(a) => {
                    set.insert(a.clone());
                }
                _ => {}
            }
        }
        set
    }

    /// True if any prompt eventuality occurs.
    pub fn has_prompt(&self) -> bool {
        self.subformulas()
            .iter()
            .any(|f| matches!(f, Formula::PromptEventually(_)))
    }
}

// Precedence levels used for printing: higher binds tighter.
// or = 1, and = 2, until/release = 3, unary = 4, atoms = 5.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Until(a, _) if **a == Formula::True => 4, // prints as F
        Formula::Release(a, _) if **a == Formula::False => 4, // prints as G
        Formula::Until(..) | Formula::Release(..) => 3,
        Formula::Next(..) | Formula::PromptEventually(..) => 4,
        Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => 5,
    }
}

fn fmt_with(f: &Formula, out: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
    let prec = precedence(f);
    let parens = prec < min_prec;
    if parens {
        write!(out, "(")?;
    }
    match f {
        Formula::True => write!(out, "true")?,
        Formula::False => write!(out, "false")?,
        Formula::Atom(a) => write!(out, "{a}")?,
        Formula::NegAtom(a) => write!(out, "!{a}")?,
        // The parser folds `&` and `|` to the left, so only the left operand
        // may omit parentheses at equal precedence.
        Formula::And(a, b) => {
            fmt_with(a, out, 2)?;
            write!(out, " & ")?;
            fmt_with(b, out, 3)?;
        }
        Formula::Or(a, b) => {
            fmt_with(a, out, 1)?;
            write!(out, " | ")?;
            fmt_with(b, out, 2)?;
        }
        Formula::Next(g) => {
            write!(out, "X ")?;
            fmt_with(g, out, 4)?;
        }
        Formula::PromptEventually(g) => {
            write!(out, "FP ")?;
            fmt_with(g, out, 4)?;
        }
        Formula::Until(a, b) if **a == Formula::True => {
            write!(out, "F ")?;
            fmt_with(b, out, 4)?;
        }
        Formula::Release(a, b) if **a == Formula::False => {
            write!(out, "G ")?;
            fmt_with(b, out, 4)?;
        }
        Formula::Until(a, b) => {
            // Right-associative: the left operand needs strictly tighter binding.
            fmt_with(a, out, 4)?;
            write!(out, " U ")?;
            fmt_with(b, out, 3)?;
        }
        Formula::Release(a, b) => {
            fmt_with(a, out, 4)?;
            write!(out, " R ")?;
            fmt_with(b, out, 3)?;
        }
    }
    if parens {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_with(self, out, 0)
    }
}
