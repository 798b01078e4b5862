//! Unit propagation on Horn formulas: computes the unique subset-minimal
//! model, which is also the unique cardinality-minimal one.

use crate::error::{Error, Result};
use crate::logic::{Assignment, CnfFormula};

/// Returns the minimal model of a satisfiable Horn formula, or `None` when
/// propagation derives a contradiction.
pub fn horn_min_model(formula: &CnfFormula) -> Result<Option<Assignment>> {
    if !formula.is_horn() {
        return Err(Error::contract("horn_min_model requires a Horn formula"));
    }
    let n = formula.universe_size() as usize;
    let clauses = formula.clauses();
    let mut remaining: Vec<u32> = Vec::with_capacity(clauses.len());
    let mut head: Vec<Option<u32>> = Vec::with_capacity(clauses.len());
    // occurs[v] lists clauses where v appears negatively.
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (ci, clause) in clauses.iter().enumerate() {
        let mut negs = 0;
        let mut pos = None;
        for lit in clause.literals() {
            if lit.is_positive() {
                pos = Some(lit.var().id());
            } else {
                negs += 1;
                occurs[lit.var().id() as usize].push(ci);
            }
        }
        remaining.push(negs);
        head.push(pos);
    }

    let mut truth = vec![false; n + 1];
    let mut queue: Vec<u32> = Vec::new();
    for ci in 0..clauses.len() {
        if remaining[ci] == 0 {
            let p = head[ci].expect("clauses are non-empty");
            if !truth[p as usize] {
                truth[p as usize] = true;
                queue.push(p);
            }
        }
    }
    while let Some(v) = queue.pop() {
        for &ci in &occurs[v as usize] {
            remaining[ci] -= 1;
            if remaining[ci] == 0 {
                match head[ci] {
                    Some(p) => {
                        if !truth[p as usize] {
                            truth[p as usize] = true;
                            queue.push(p);
                        }
                    }
                    None => return Ok(None),
                }
            }
        }
    }
    let true_vars = (1..=n as u32).filter(|&v| truth[v as usize]);
    Ok(Some(Assignment::new(formula.universe_size(), true_vars)?))
}
