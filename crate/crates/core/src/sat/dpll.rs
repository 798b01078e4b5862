//! Conflict-driven DPLL: two watched literals, unit propagation, first-UIP
//! clause learning with backjumping. No restarts, no activity heuristics;
//! branching picks the lowest-index unassigned variable, false first, so
//! runs are deterministic.

use crate::logic::{Assignment, CnfFormula, Literal};

use super::SatResult;

const UNASSIGNED: i8 = -1;

/// Literal codes: variable v (1-based) maps to 2(v-1) for the negative
/// literal and 2(v-1)+1 for the positive one.
fn code(lit: Literal) -> u32 {
    (lit.var().id() - 1) * 2 + lit.is_positive() as u32
}

fn var_index(code: u32) -> usize {
    (code / 2) as usize
}

fn is_positive(code: u32) -> bool {
    code & 1 == 1
}

struct Solver {
    nvars: usize,
    clauses: Vec<Vec<u32>>,
    watches: Vec<Vec<usize>>, // indexed by literal code
    assign: Vec<i8>,          // -1 unassigned, 0 false, 1 true
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
}

enum Enqueue {
    Ok,
    Conflict,
}

impl Solver {
    fn new(nvars: usize) -> Solver {
        Solver {
            nvars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); nvars * 2],
            assign: vec![UNASSIGNED; nvars],
            level: vec![0; nvars],
            reason: vec![None; nvars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
        }
    }

    fn lit_value(&self, code: u32) -> i8 {
        let v = self.assign[var_index(code)];
        if v == UNASSIGNED {
            UNASSIGNED
        } else {
            (v == is_positive(code) as i8) as i8
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a problem clause; returns false on immediate inconsistency.
    fn add_clause(&mut self, lits: Vec<u32>) -> bool {
        debug_assert!(!lits.is_empty());
        if lits.len() == 1 {
            return match self.enqueue(lits[0], None) {
                Enqueue::Ok => true,
                Enqueue::Conflict => false,
            };
        }
        let idx = self.clauses.len();
        self.watches[lits[0] as usize].push(idx);
        self.watches[lits[1] as usize].push(idx);
        self.clauses.push(lits);
        true
    }

    fn enqueue(&mut self, lit: u32, reason: Option<usize>) -> Enqueue {
        match self.lit_value(lit) {
            1 => Enqueue::Ok,
            0 => Enqueue::Conflict,
            _ => {
                let v = var_index(lit);
                self.assign[v] = is_positive(lit) as i8;
                self.level[v] = self.decision_level();
                self.reason[v] = reason;
                self.trail.push(lit);
                Enqueue::Ok
            }
        }
    }

    /// Propagates until fixpoint; returns the conflicting clause if any.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let lit = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = lit ^ 1;
            let mut watch_list = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            while i < watch_list.len() {
                let ci = watch_list[i];
                // Ensure the falsified literal sits at slot 1.
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.lit_value(first) == 1 {
                    i += 1;
                    continue;
                }
                // Look for a non-false replacement watch.
                let mut moved = false;
                for j in 2..self.clauses[ci].len() {
                    if self.lit_value(self.clauses[ci][j]) != 0 {
                        self.clauses[ci].swap(1, j);
                        let new_watch = self.clauses[ci][1];
                        self.watches[new_watch as usize].push(ci);
                        watch_list.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                // Unit or conflicting.
                match self.enqueue(first, Some(ci)) {
                    Enqueue::Ok => i += 1,
                    Enqueue::Conflict => {
                        self.watches[false_lit as usize] = watch_list;
                        return Some(ci);
                    }
                }
            }
            self.watches[false_lit as usize] = watch_list;
        }
        None
    }

    /// First-UIP conflict analysis; returns the learned clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<u32>, u32) {
        let current = self.decision_level();
        let mut seen = vec![false; self.nvars];
        let mut learned: Vec<u32> = vec![0];
        let mut counter = 0usize;
        let mut idx = self.trail.len();
        let mut resolving: Option<u32> = None;

        loop {
            for &q in &self.clauses[confl] {
                if Some(q) == resolving {
                    continue;
                }
                let v = var_index(q);
                if !seen[v] && self.level[v] > 0 {
                    seen[v] = true;
                    if self.level[v] == current {
                        counter += 1;
                    } else {
                        learned.push(q);
                    }
                }
            }
            // Walk back to the most recent marked trail literal.
            loop {
                idx -= 1;
                if seen[var_index(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            seen[var_index(lit)] = false;
            counter -= 1;
            if counter == 0 {
                learned[0] = lit ^ 1;
                break;
            }
            confl = self.reason[var_index(lit)].expect("non-decision literal has a reason");
            resolving = Some(lit);
        }

        let backjump = learned[1..]
            .iter()
            .map(|&q| self.level[var_index(q)])
            .max()
            .unwrap_or(0);
        // Watch a literal from the backjump level in slot 1.
        if learned.len() > 1 {
            let mut best = 1;
            for j in 2..learned.len() {
                if self.level[var_index(learned[j])] > self.level[var_index(learned[best])] {
                    best = j;
                }
            }
            learned.swap(1, best);
        }
        (learned, backjump)
    }

    fn backtrack(&mut self, target: u32) {
        while self.decision_level() > target {
            let lim = self.trail_lim.pop().unwrap();
            while self.trail.len() > lim {
                let lit = self.trail.pop().unwrap();
                let v = var_index(lit);
                self.assign[v] = UNASSIGNED;
                self.reason[v] = None;
            }
        }
        self.qhead = self.trail.len();
    }

    fn solve(&mut self) -> bool {
        if self.propagate().is_some() {
            return false;
        }
        loop {
            match self.propagate() {
                Some(confl) => {
                    if self.decision_level() == 0 {
                        return false;
                    }
                    let (learned, backjump) = self.analyze(confl);
                    self.backtrack(backjump);
                    let asserting = learned[0];
                    if learned.len() == 1 {
                        match self.enqueue(asserting, None) {
                            Enqueue::Ok => {}
                            Enqueue::Conflict => return false,
                        }
                    } else {
                        let ci = self.clauses.len();
                        self.watches[learned[0] as usize].push(ci);
                        self.watches[learned[1] as usize].push(ci);
                        self.clauses.push(learned);
                        match self.enqueue(asserting, Some(ci)) {
                            Enqueue::Ok => {}
                            Enqueue::Conflict => unreachable!("asserting literal is unassigned"),
                        }
                    }
                }
                None => match self.assign.iter().position(|&a| a == UNASSIGNED) {
                    None => return true,
                    Some(v) => {
                        self.trail_lim.push(self.trail.len());
                        // Decide false first.
                        match self.enqueue(v as u32 * 2, None) {
                            Enqueue::Ok => {}
                            Enqueue::Conflict => unreachable!("decision variable is unassigned"),
                        }
                    }
                },
            }
        }
    }
}

pub(super) fn solve(formula: &CnfFormula, assumptions: &[Literal]) -> SatResult {
    let n = formula.universe_size() as usize;
    let mut solver = Solver::new(n);
    let mut consistent = true;
    for lit in assumptions {
        consistent &= solver.add_clause(vec![code(*lit)]);
    }
    for clause in formula.clauses() {
        if clause.is_tautological() {
            continue;
        }
        consistent &= solver.add_clause(clause.literals().iter().map(|&l| code(l)).collect());
    }
    if !consistent || !solver.solve() {
        return SatResult::unsat();
    }
    let true_vars = (0..n).filter(|&v| solver.assign[v] == 1).map(|v| v as u32 + 1);
    SatResult::sat(Assignment::new(formula.universe_size(), true_vars).expect("in range"))
}
