//! A small conflict-driven SAT solver: two-literal watching, first-UIP
//! learning, activity-ordered decisions with phase saving, and Luby restarts.
//! Clauses may be added between `solve` calls, which is how the synthesis
//! layer blocks already-seen candidates. Everything is deterministic: no
//! randomness, ties broken by variable index.

use std::collections::BinaryHeap;

/// A propositional variable, handed out consecutively by [`Solver::new_var`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The variable with the given index; valid only below the solver's
    /// variable count.
    pub fn from_index(i: usize) -> Var {
        Var(i as u32)
    }
}

/// A literal: a variable with a polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(v: Var) -> Self {
        Lit(v.0 << 1)
    }

    pub fn neg(v: Var) -> Self {
        Lit(v.0 << 1 | 1)
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_pos(self) -> bool {
        self.0 & 1 == 0
    }

    fn code(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

/// Max-heap entries ordered by activity, ties to the smaller variable. The
/// stored activity doubles as a staleness stamp: an entry whose activity no
/// longer matches the variable's current one is skipped.
struct HeapEntry(f64, u32);

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

#[derive(Default)]
pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    assign: Vec<Option<bool>>,
    level: Vec<usize>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    act_inc: f64,
    heap: BinaryHeap<HeapEntry>,
    phase: Vec<bool>,
    model: Vec<bool>,
    unsat: bool,
    conflicts: u64,
}

impl Solver {
    pub fn new() -> Self {
        Solver { act_inc: 1.0, ..Solver::default() }
    }

    pub fn new_var(&mut self) -> Var {
        let v = Var(self.assign.len() as u32);
        self.assign.push(None);
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.phase.push(false);
        self.model.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.push(HeapEntry(0.0, v.0));
        v
    }

    pub fn num_vars(&self) -> usize {
        self.assign.len()
    }

    pub fn num_conflicts(&self) -> u64 {
        self.conflicts
    }

    /// The value of `v` in the most recent satisfying assignment. Meaningful
    /// only after `solve` returned true.
    pub fn value(&self, v: Var) -> bool {
        self.model[v.index()]
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.assign[l.var().index()].map(|b| b == l.is_pos())
    }

    /// Adds a clause. Tautologies and clauses already satisfied at the top
    /// level are dropped; an empty clause makes the solver permanently
    /// unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        self.cancel_until(0);
        if self.unsat {
            return;
        }
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort();
        c.dedup();
        if c.windows(2).any(|w| w[0].var() == w[1].var()) {
            return;
        }
        if c.iter().any(|&l| self.lit_value(l) == Some(true)) {
            return;
        }
        c.retain(|&l| self.lit_value(l).is_none());
        match c.len() {
            0 => self.unsat = true,
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
            }
            _ => {
                self.attach(c);
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> usize {
        let cref = self.clauses.len();
        self.watches[c[0].code()].push(cref);
        self.watches[c[1].code()].push(cref);
        self.clauses.push(c);
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var().index();
        debug_assert!(self.assign[v].is_none());
        self.assign[v] = Some(l.is_pos());
        self.level[v] = self.trail_lim.len();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let l = self.trail[self.qhead];
            self.qhead += 1;
            let fl = !l;
            let mut ws = std::mem::take(&mut self.watches[fl.code()]);
            let mut i = 0;
            while i < ws.len() {
                let cref = ws[i];
                if self.clauses[cref][0] == fl {
                    self.clauses[cref].swap(0, 1);
                }
                let first = self.clauses[cref][0];
                if self.lit_value(first) == Some(true) {
                    i += 1;
                    continue;
                }
                let replacement = (2..self.clauses[cref].len())
                    .find(|&j| self.lit_value(self.clauses[cref][j]) != Some(false));
                if let Some(j) = replacement {
                    self.clauses[cref].swap(1, j);
                    let w = self.clauses[cref][1];
                    self.watches[w.code()].push(cref);
                    ws.swap_remove(i);
                    continue;
                }
                if self.lit_value(first) == Some(false) {
                    self.watches[fl.code()] = ws;
                    self.qhead = self.trail.len();
                    return Some(cref);
                }
                self.enqueue(first, Some(cref));
                i += 1;
            }
            self.watches[fl.code()] = ws;
        }
        None
    }

    /// First-UIP conflict analysis: returns the asserting clause (the UIP
    /// literal first, a highest-level companion second) and the backjump
    /// level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, usize) {
        let current = self.trail_lim.len();
        let mut learnt = vec![Lit(0)];
        let mut seen = vec![false; self.num_vars()];
        let mut open = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].len() {
                let q = self.clauses[confl][k];
                let v = q.var().index();
                if !seen[v] && self.level[v] > 0 {
                    seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= current {
                        open += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if seen[self.trail[idx].var().index()] {
                    break;
                }
            }
            let pl = self.trail[idx];
            seen[pl.var().index()] = false;
            open -= 1;
            if open == 0 {
                learnt[0] = !pl;
                break;
            }
            confl = self.reason[pl.var().index()].expect("implied literal has a reason");
            p = Some(pl);
        }
        let backjump = if learnt.len() == 1 {
            0
        } else {
            let offset = learnt[1..]
                .iter()
                .enumerate()
                .max_by_key(|(_, l)| self.level[l.var().index()])
                .map(|(i, _)| i)
                .unwrap();
            learnt.swap(1, offset + 1);
            self.level[learnt[1].var().index()]
        };
        (learnt, backjump)
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.act_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.act_inc *= 1e-100;
            self.heap.clear();
            for (i, &a) in self.activity.iter().enumerate() {
                self.heap.push(HeapEntry(a, i as u32));
            }
        }
        self.heap.push(HeapEntry(self.activity[v], v as u32));
    }

    fn cancel_until(&mut self, lvl: usize) {
        while self.trail_lim.len() > lvl {
            let lim = self.trail_lim.pop().unwrap();
            while self.trail.len() > lim {
                let l = self.trail.pop().unwrap();
                let v = l.var().index();
                self.phase[v] = l.is_pos();
                self.assign[v] = None;
                self.reason[v] = None;
                self.heap.push(HeapEntry(self.activity[v], v as u32));
            }
        }
        self.qhead = self.qhead.min(self.trail.len());
    }

    fn decide(&mut self) -> Option<Lit> {
        while let Some(HeapEntry(act, v)) = self.heap.pop() {
            let vi = v as usize;
            if self.assign[vi].is_none() && act == self.activity[vi] {
                let var = Var(v);
                return Some(if self.phase[vi] { Lit::pos(var) } else { Lit::neg(var) });
            }
        }
        None
    }

    pub fn solve(&mut self) -> bool {
        if self.unsat {
            return false;
        }
        self.cancel_until(0);
        let mut restarts = 0u32;
        let mut budget = 100 * luby(restarts);
        let mut since_restart = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                if self.trail_lim.is_empty() {
                    self.unsat = true;
                    return false;
                }
                self.conflicts += 1;
                since_restart += 1;
                let (learnt, backjump) = self.analyze(confl);
                self.cancel_until(backjump);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let asserted = learnt[0];
                    let cref = self.attach(learnt);
                    self.enqueue(asserted, Some(cref));
                }
                self.act_inc /= 0.95;
                if since_restart >= budget {
                    restarts += 1;
                    budget = 100 * luby(restarts);
                    since_restart = 0;
                    self.cancel_until(0);
                }
            } else if let Some(l) = self.decide() {
                self.trail_lim.push(self.trail.len());
                self.enqueue(l, None);
            } else {
                self.model = self.assign.iter().map(|a| a.unwrap_or(false)).collect();
                self.cancel_until(0);
                return true;
            }
        }
    }
}

/// The Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ...
fn luby(mut x: u32) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < x as u64 + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x as u64 {
        size = (size - 1) / 2;
        seq -= 1;
        x %= size as u32;
    }
    1 << seq
}
