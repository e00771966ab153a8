//! A small exact solver for systems of linear equalities over boolean
//! variables. Each constraint tracks the value already fixed and the range
//! still reachable by its free variables; a variable is forced as soon as one
//! of its values would push a constraint out of range.

use crate::error::{Error, Result};

const UNSET: u8 = 2;

#[derive(Debug, Clone)]
struct Constraint {
    terms: Vec<(usize, i64)>,
    target: i64,
    fixed: i64,
    neg_free: i64,
    pos_free: i64,
}

impl Constraint {
    fn feasible(&self) -> bool {
        self.fixed + self.neg_free <= self.target && self.target <= self.fixed + self.pos_free
    }

    /// Whether assigning `value` to a free variable with coefficient `c` keeps
    /// the target reachable.
    fn allows(&self, c: i64, value: bool) -> bool {
        let (lo, hi) = (self.fixed + self.neg_free, self.fixed + self.pos_free);
        let (lo, hi) = if value {
            (lo + c.max(0), hi + c.min(0))
        } else {
            (lo - c.min(0), hi - c.max(0))
        };
        lo <= self.target && self.target <= hi
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BoolSystem {
    values: Vec<u8>,
    constraints: Vec<Constraint>,
    occurs: Vec<Vec<(usize, i64)>>,
    trail: Vec<usize>,
    nodes: u64,
}

impl BoolSystem {
    pub(crate) fn new(vars: usize) -> Self {
        Self {
            values: vec![UNSET; vars],
            constraints: Vec::new(),
            occurs: vec![Vec::new(); vars],
            trail: Vec::new(),
            nodes: 0,
        }
    }

    /// Adds `Σ c·x_v = target`; repeated variables are merged.
    pub(crate) fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (usize, i64)>,
        target: i64,
    ) {
        let mut merged: Vec<(usize, i64)> = Vec::new();
        let mut all: Vec<(usize, i64)> = terms.into_iter().collect();
        all.sort_unstable_by_key(|&(v, _)| v);
        for (v, c) in all {
            match merged.last_mut() {
                Some((w, d)) if *w == v => *d += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        let idx = self.constraints.len();
        for &(v, c) in &merged {
            self.occurs[v].push((idx, c));
        }
        self.constraints.push(Constraint {
            neg_free: merged.iter().map(|&(_, c)| c.min(0)).sum(),
            pos_free: merged.iter().map(|&(_, c)| c.max(0)).sum(),
            terms: merged,
            target,
            fixed: 0,
        });
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    /// The lexicographically least solution (variables in index order,
    /// `false < true`), or `None`. Exceeding `max_nodes` branching decisions
    /// is an error, never a `None`.
    pub(crate) fn solve(&mut self, max_nodes: u64) -> Result<Option<Vec<bool>>> {
        let all: Vec<usize> = (0..self.constraints.len()).collect();
        if !self.propagate(all) {
            return Ok(None);
        }
        if self.search(0, max_nodes)? {
            Ok(Some(self.values.iter().map(|&v| v == 1).collect()))
        } else {
            Ok(None)
        }
    }

    fn search(&mut self, from: usize, max_nodes: u64) -> Result<bool> {
        let Some(var) = (from..self.values.len()).find(|&v| self.values[v] == UNSET) else {
            return Ok(true);
        };
        for value in [false, true] {
            self.nodes += 1;
            if self.nodes > max_nodes {
                return Err(Error::BudgetExceeded {
                    nodes: self.nodes - 1,
                });
            }
            let mark = self.trail.len();
            let touched = self.assign(var, value);
            if self.propagate(touched) && self.search(var + 1, max_nodes)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }

    fn assign(&mut self, var: usize, value: bool) -> Vec<usize> {
        self.values[var] = value as u8;
        self.trail.push(var);
        let mut touched = Vec::with_capacity(self.occurs[var].len());
        for &(ci, c) in &self.occurs[var] {
            let con = &mut self.constraints[ci];
            if c > 0 {
                con.pos_free -= c;
            } else {
                con.neg_free -= c;
            }
            if value {
                con.fixed += c;
            }
            touched.push(ci);
        }
        touched
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().expect("trail longer than mark");
            let value = self.values[var] == 1;
            for &(ci, c) in &self.occurs[var] {
                let con = &mut self.constraints[ci];
                if c > 0 {
                    con.pos_free += c;
                } else {
                    con.neg_free += c;
                }
                if value {
                    con.fixed -= c;
                }
            }
            self.values[var] = UNSET;
        }
    }

    /// Runs forcing to a fixpoint; false on a contradiction (the caller undoes).
    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(ci) = queue.pop() {
            if !self.constraints[ci].feasible() {
                return false;
            }
            let mut forced = Vec::new();
            {
                let con = &self.constraints[ci];
                for &(v, c) in &con.terms {
                    if self.values[v] != UNSET {
                        continue;
                    }
                    match (con.allows(c, false), con.allows(c, true)) {
                        (true, true) => {}
                        (false, false) => return false,
                        (zero_ok, _) => forced.push((v, !zero_ok)),
                    }
                }
            }
            for (v, value) in forced {
                if self.values[v] == UNSET {
                    queue.extend(self.assign(v, value));
                } else if (self.values[v] == 1) != value {
                    return false;
                }
            }
        }
        true
    }
}
