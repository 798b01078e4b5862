//! Linear-time Krom satisfiability via strongly connected components of
//! the implication graph.

use crate::error::{Error, Result};
use crate::logic::{Assignment, CnfFormula};

use super::SatResult;

/// Node codes: variable v maps to 2(v-1) for its negative literal and
/// 2(v-1)+1 for its positive one, so unconstrained variables come out
/// false and the empty formula yields the empty witness.
fn node(var: u32, positive: bool) -> u32 {
    (var - 1) * 2 + positive as u32
}

/// Decides a Krom formula; verdict identical to the complete solver, in
/// time linear in the formula.
pub fn solve_2sat(formula: &CnfFormula) -> Result<SatResult> {
    if !formula.is_krom() {
        return Err(Error::contract("solve_2sat requires a Krom formula"));
    }
    let n = formula.universe_size();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); (n * 2) as usize];
    for clause in formula.clauses() {
        let lits = clause.literals();
        let (a, b) = match lits.len() {
            1 => (lits[0], lits[0]),
            2 => (lits[0], lits[1]),
            _ => unreachable!("checked Krom"),
        };
        let na = node(a.var().id(), a.is_positive());
        let nb = node(b.var().id(), b.is_positive());
        adj[(na ^ 1) as usize].push(nb);
        adj[(nb ^ 1) as usize].push(na);
    }
    let comp = tarjan_scc(&adj);
    let mut true_vars = Vec::new();
    for v in 1..=n {
        let pos = comp[node(v, true) as usize];
        let neg = comp[node(v, false) as usize];
        if pos == neg {
            return Ok(SatResult::unsat());
        }
        // Components are numbered in reverse topological order; the
        // polarity closer to the sinks is the one to satisfy.
        if pos < neg {
            true_vars.push(v);
        }
    }
    Ok(SatResult::sat(
        Assignment::new(n, true_vars).expect("in range"),
    ))
}

/// Iterative Tarjan; returns the component index of every node, numbered
/// in reverse topological order of the condensation.
fn tarjan_scc(adj: &[Vec<u32>]) -> Vec<u32> {
    const UNSET: u32 = u32::MAX;
    let n = adj.len();
    let mut comp = vec![UNSET; n];
    let mut index = vec![UNSET; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut next_comp = 0u32;
    // Explicit DFS frames: (node, next child position).
    let mut frames: Vec<(u32, usize)> = Vec::new();

    for start in 0..n as u32 {
        if index[start as usize] != UNSET {
            continue;
        }
        frames.push((start, 0));
        while let Some(&mut (u, ref mut child)) = frames.last_mut() {
            let ui = u as usize;
            if *child == 0 {
                index[ui] = next_index;
                low[ui] = next_index;
                next_index += 1;
                stack.push(u);
                on_stack[ui] = true;
            }
            if let Some(&v) = adj[ui].get(*child) {
                *child += 1;
                let vi = v as usize;
                if index[vi] == UNSET {
                    frames.push((v, 0));
                } else if on_stack[vi] {
                    low[ui] = low[ui].min(index[vi]);
                }
            } else {
                frames.pop();
                if low[ui] == index[ui] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        comp[w as usize] = next_comp;
                        if w == u {
                            break;
                        }
                    }
                    next_comp += 1;
                }
                if let Some(&mut (p, _)) = frames.last_mut() {
                    let pi = p as usize;
                    low[pi] = low[pi].min(low[ui]);
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Clause, Literal};

    fn formula(n: u32, clauses: &[&[i64]]) -> CnfFormula {
        let cs = clauses
            .iter()
            .map(|c| {
                Clause::new(
                    c.iter()
                        .map(|&l| {
                            if l > 0 {
                                Literal::pos(l as u32)
                            } else {
                                Literal::neg((-l) as u32)
                            }
                        })
                        .collect(),
                )
                .unwrap()
            })
            .collect();
        CnfFormula::new(n, cs).unwrap()
    }

    #[test]
    fn simple_sat() {
        let f = formula(2, &[&[1, 2], &[-1, 2]]);
        let r = solve_2sat(&f).unwrap();
        assert!(r.is_sat());
        assert!(f.evaluate(r.witness().unwrap()).unwrap());
    }

    #[test]
    fn forced_chain_contradiction() {
        // x1 forces x2 forces not x1.
        let f = formula(2, &[&[1], &[-1, 2], &[-2, -1]]);
        assert!(!solve_2sat(&f).unwrap().is_sat());
    }

    #[test]
    fn empty_formula_gives_empty_witness() {
        let f = CnfFormula::empty(3);
        let r = solve_2sat(&f).unwrap();
        assert!(r.is_sat());
        assert_eq!(r.witness().unwrap().cardinality(), 0);
    }

    #[test]
    fn rejects_non_krom() {
        let f = formula(3, &[&[1, 2, 3]]);
        assert!(matches!(solve_2sat(&f), Err(Error::Contract(_))));
    }

    #[test]
    fn tautological_clauses_are_harmless() {
        let f = formula(2, &[&[1, -1], &[2]]);
        let r = solve_2sat(&f).unwrap();
        assert!(r.is_sat());
        assert!(f.evaluate(r.witness().unwrap()).unwrap());
    }
}
