//! Reductions from cardinality-minimal satisfiability into belief
//! revision and abduction, plus the 3-CNF reduction into Satoh model
//! checking. The revision outputs are simultaneously Horn and Krom.

use std::collections::BTreeMap;

use crate::abduction::Pap;
use crate::error::{Error, Result};
use crate::logic::{Assignment, Clause, CnfFormula, Literal, Variable};
use crate::optsat::OptQuery;

use super::ReductionOutput;

/// A Dalal model-checking instance produced by the reduction: psi, mu, and
/// mu's exactly two models. The query atom is true in a cardinality-minimal
/// model of the source exactly when `m1` is selected by revision, which in
/// turn holds exactly when revision does not imply the flag variable.
#[derive(Clone, Debug)]
pub struct DalalMcInstance {
    pub psi: CnfFormula,
    pub mu: CnfFormula,
    pub m1: Assignment,
    pub m2: Assignment,
    /// The flag variable y coupling the query atom to mu's models.
    pub flag: Variable,
}

fn check_positive_krom(formula: &CnfFormula) -> Result<()> {
    if !formula.is_krom() || !formula.is_positive() {
        return Err(Error::contract("reduction requires a positive Krom formula"));
    }
    Ok(())
}

/// Builds the revision instance: psi negates every source clause and
/// asserts the flag; mu fixes every non-query atom and couples the query
/// atom to the flag, leaving exactly the two models m1 and m2 = m1 plus
/// the query atom and flag.
pub fn reduce_cardmin_to_dalal(q: &OptQuery) -> Result<ReductionOutput<DalalMcInstance>> {
    let formula = q.formula();
    check_positive_krom(formula)?;
    let n = formula.universe_size();
    let q0 = q.query_var();
    let y = Variable::new(n + 1);

    let mut psi = Vec::new();
    for clause in formula.clauses() {
        psi.push(
            Clause::new(clause.literals().iter().map(|l| l.negated()).collect())
                .expect("non-empty"),
        );
    }
    psi.push(Clause::unit(Literal::new(y, true)));
    let psi = CnfFormula::new(n + 1, psi)?;

    let mut mu = Vec::new();
    for v in 1..=n {
        if v != q0.id() {
            mu.push(Clause::unit(Literal::pos(v)));
        }
    }
    mu.push(Clause::binary(Literal::new(q0, true), Literal::new(y, false)));
    mu.push(Clause::binary(Literal::new(q0, false), Literal::new(y, true)));
    let mu = CnfFormula::new(n + 1, mu)?;

    let m1 = Assignment::new(n + 1, (1..=n).filter(|&v| v != q0.id()))?;
    let m2 = Assignment::full(n + 1);
    let var_map: BTreeMap<u32, u32> = (1..=n).map(|v| (v, v)).collect();
    Ok(ReductionOutput::new(
        DalalMcInstance {
            psi,
            mu,
            m1,
            m2,
            flag: y,
        },
        var_map,
        "anti-model distance gadget for revision",
    ))
}

/// A Satoh model-checking instance: the source 3-CNF is satisfiable
/// exactly when `m` is selected by Satoh revision of psi by mu, which in
/// turn holds exactly when the revision does not imply `d`.
#[derive(Clone, Debug)]
pub struct SatohMcInstance {
    pub psi: CnfFormula,
    pub mu: CnfFormula,
    pub m: Assignment,
    /// The escape variable d: the only mu-model avoiding it is `m`.
    pub d: Variable,
}

/// Fresh blocks: complement indicators y_i for each source variable,
/// clause guards a_j mirrored by b_j, and the escape variable d.
pub fn reduce_3sat_to_satoh_mc(formula: &CnfFormula) -> Result<ReductionOutput<SatohMcInstance>> {
    if formula.universe_size() == 0 {
        return Err(Error::contract("reduction requires at least one variable"));
    }
    let clauses = formula
        .clauses()
        .iter()
        .map(|c| {
            if c.len() > 3 {
                return Err(Error::contract(
                    "reduction requires clauses of at most three literals",
                ));
            }
            let lits = c.literals();
            let last = *lits.last().expect("non-empty");
            Ok([
                lits[0],
                *lits.get(1).unwrap_or(&last),
                *lits.get(2).unwrap_or(&last),
            ])
        })
        .collect::<Result<Vec<[Literal; 3]>>>()?;
    let n = formula.universe_size();
    let m_count = clauses.len() as u32;
    let y = |i: u32| Variable::new(n + i);
    let a = |j: u32| Variable::new(2 * n + j);
    let b = |j: u32| Variable::new(2 * n + m_count + j);
    let d = Variable::new(2 * n + 2 * m_count + 1);
    let universe = 2 * n + 2 * m_count + 1;
    // The literal translation: a positive occurrence keeps its variable, a
    // negative occurrence uses the complement indicator.
    let star = |l: Literal| -> Literal {
        if l.is_positive() {
            Literal::new(l.var(), true)
        } else {
            Literal::new(y(l.var().id()), true)
        }
    };

    let mut psi = Vec::new();
    for i in 1..=n {
        psi.push(Clause::binary(Literal::neg(i), Literal::new(y(i), false)));
    }
    for (j, clause) in clauses.iter().enumerate() {
        let j = j as u32 + 1;
        for &lit in clause {
            psi.push(Clause::binary(
                star(lit).negated(),
                Literal::new(a(j), false),
            ));
        }
    }
    for j in 1..=m_count {
        psi.push(Clause::binary(Literal::new(a(j), false), Literal::new(b(j), true)));
        psi.push(Clause::binary(Literal::new(a(j), true), Literal::new(b(j), false)));
    }
    let psi = CnfFormula::new(universe, psi)?;

    let mut mu = Vec::new();
    for i in 1..=n {
        mu.push(Clause::unit(Literal::pos(i)));
        mu.push(Clause::unit(Literal::new(y(i), true)));
    }
    for j in 1..=m_count {
        mu.push(Clause::unit(Literal::new(a(j), true)));
    }
    for j in 1..=m_count {
        mu.push(Clause::binary(Literal::new(b(j), false), Literal::new(d, true)));
    }
    let mu = CnfFormula::new(universe, mu)?;

    let m = Assignment::new(
        universe,
        (1..=n)
            .chain((1..=n).map(|i| y(i).id()))
            .chain((1..=m_count).map(|j| a(j).id())),
    )?;
    let var_map: BTreeMap<u32, u32> = (1..=n).map(|v| (v, v)).collect();
    Ok(ReductionOutput::new(
        SatohMcInstance { psi, mu, m, d },
        var_map,
        "guarded-complement gadget for inclusion-minimal revision",
    ))
}

/// The abduction instance of a positive Krom query: one fresh goal atom
/// per clause, implications from each clause literal to its goal, all
/// source atoms as hypotheses, all goals as manifestations. Solutions
/// coincide with the source models.
pub fn reduce_cardmin_to_abduction(
    q: &OptQuery,
) -> Result<ReductionOutput<(Pap, Variable)>> {
    let formula = q.formula();
    check_positive_krom(formula)?;
    let n = formula.universe_size();
    let m_count = formula.clauses().len() as u32;
    let goal = |j: u32| Variable::new(n + j);

    let mut theory = Vec::new();
    for (j, clause) in formula.clauses().iter().enumerate() {
        let j = j as u32 + 1;
        let lits = clause.literals();
        let p = lits[0];
        let qlit = *lits.get(1).unwrap_or(&p);
        theory.push(Clause::binary(p.negated(), Literal::new(goal(j), true)));
        theory.push(Clause::binary(qlit.negated(), Literal::new(goal(j), true)));
    }
    let theory = CnfFormula::new(n + m_count, theory)?;
    let pap = Pap::new(theory, 1..=n, (n + 1)..=(n + m_count))?;
    let var_map: BTreeMap<u32, u32> = (1..=n).map(|v| (v, v)).collect();
    Ok(ReductionOutput::new(
        (pap, q.query_var()),
        var_map,
        "clause-goal abduction gadget",
    ))
}
