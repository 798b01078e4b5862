//! Sequential-counter cardinality encoding: linear size, no polynomial
//! blowup, auxiliary variables allocated past the formula's universe.

use crate::logic::{Clause, Literal, Variable};

/// Appends clauses forcing at most `k` of `lits` true. Auxiliary variables
/// are taken from `next_aux` (incremented past the ones consumed).
pub(super) fn at_most(lits: &[Literal], k: u32, next_aux: &mut u32, out: &mut Vec<Clause>) {
    let n = lits.len() as u32;
    if k >= n {
        return;
    }
    if k == 0 {
        for &l in lits {
            out.push(Clause::unit(l.negated()));
        }
        return;
    }
    // Register s[i][j]: at least j+1 of the first i+1 inputs are true.
    let base = *next_aux;
    let reg = |i: u32, j: u32| Literal::new(Variable::new(base + i * k + j), true);
    *next_aux += (n - 1) * k;

    out.push(Clause::binary(lits[0].negated(), reg(0, 0)));
    for j in 1..k {
        out.push(Clause::unit(reg(0, j).negated()));
    }
    for i in 1..n - 1 {
        let x = lits[i as usize];
        out.push(Clause::binary(x.negated(), reg(i, 0)));
        out.push(Clause::binary(reg(i - 1, 0).negated(), reg(i, 0)));
        for j in 1..k {
            out.push(
                Clause::new(vec![x.negated(), reg(i - 1, j - 1).negated(), reg(i, j)]).unwrap(),
            );
            out.push(Clause::binary(reg(i - 1, j).negated(), reg(i, j)));
        }
        out.push(Clause::binary(x.negated(), reg(i - 1, k - 1).negated()));
    }
    out.push(Clause::binary(
        lits[(n - 1) as usize].negated(),
        reg(n - 2, k - 1).negated(),
    ));
}

/// At least `k` of `lits` true: at most `n - k` of their negations.
pub(super) fn at_least(lits: &[Literal], k: u32, next_aux: &mut u32, out: &mut Vec<Clause>) {
    let n = lits.len() as u32;
    if k == 0 {
        return;
    }
    if k > n {
        // Permitted but unsatisfiable; a fresh contradictory pair says so
        // without an empty clause.
        let aux = Literal::new(Variable::new(*next_aux), true);
        *next_aux += 1;
        out.push(Clause::unit(aux));
        out.push(Clause::unit(aux.negated()));
        return;
    }
    let negated: Vec<Literal> = lits.iter().map(|l| l.negated()).collect();
    at_most(&negated, n - k, next_aux, out);
}
