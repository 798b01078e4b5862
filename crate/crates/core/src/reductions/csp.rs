//! Reductions between constraint languages: the pairing gadget expressing
//! binary disjunction through the R4p relation, and the two-branch witness
//! construction that embeds binary disjunction into any 1-valid dual-Horn
//! non-Horn relation with the constant-1 definition supplied by a 1-valid
//! non-0-valid companion.

use std::collections::BTreeMap;

use crate::clones::{closure_report, r4p};
use crate::error::{Error, Result};
use crate::logic::{BooleanRelation, ConstraintFormula, Variable};

use super::{CspQuery, ReductionOutput};

/// The application list of a pure OR2 formula, as variable pairs.
fn or2_pairs(cf: &ConstraintFormula) -> Result<Vec<(Variable, Variable)>> {
    let or2 = BooleanRelation::or2();
    let mut pairs = Vec::new();
    for (rel_idx, vars) in cf.applications() {
        if *cf.relation(*rel_idx) != or2 {
            return Err(Error::contract(format!(
                "application of {} is not a binary disjunction",
                cf.relation_name(*rel_idx)
            )));
        }
        pairs.push((vars[0], vars[1]));
    }
    Ok(pairs)
}

/// Every source disjunction (x_i | x_j) becomes the pair of applications
/// R4p(x_i, x_j, x'_i, x'_j) and R4p(x''_i, x''_j, x'_i, x'_j) over three
/// copies of the universe; in every model x = x'' and x != x', so a model
/// of weight k maps to one of weight n + k.
pub fn reduce_or2_to_r4p(q: &CspQuery) -> Result<ReductionOutput<CspQuery>> {
    let pairs = or2_pairs(&q.formula)?;
    let n = q.formula.universe_size();
    let mut target = ConstraintFormula::new(3 * n);
    let rel = target.add_relation("R4P", r4p())?;
    let prime = |v: Variable| Variable::new(n + v.id());
    let second = |v: Variable| Variable::new(2 * n + v.id());
    for &(a, b) in &pairs {
        target.add_application(rel, vec![a, b, prime(a), prime(b)])?;
        target.add_application(rel, vec![second(a), second(b), prime(a), prime(b)])?;
    }
    let var_map: BTreeMap<u32, u32> = (1..=n).map(|v| (v, v)).collect();
    Ok(ReductionOutput::new(
        CspQuery::new(target, q.query_var)?,
        var_map,
        "complement-pairing gadget",
    ))
}

/// Which of the two constructions applies, decided by whether the derived
/// constraint admits the tuple with only the first and last blocks true.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum S01Branch {
    /// One fresh slack variable per source constraint.
    Single,
    /// n+1 replicated slack variables per source constraint, so falsifying
    /// a disjunction costs more than any minimal model.
    Replicated,
}

/// The witness structure extracted from the relation pair: two tuples of R
/// whose meet escapes R, the coordinate partition they induce, and the
/// branch selector.
#[derive(Clone, Debug)]
pub struct S01Analysis {
    pub m1: Vec<bool>,
    pub m2: Vec<bool>,
    /// Coordinate classes by (m1 value, m2 value).
    pub v00: Vec<u32>,
    pub v01: Vec<u32>,
    pub v10: Vec<u32>,
    pub v11: Vec<u32>,
    pub branch: S01Branch,
}

/// Checks the closure preconditions and derives the witness partition.
/// The witness pair is the first, in lexicographic tuple order, whose
/// coordinate-wise conjunction falls outside R.
pub fn s01_analysis(s_rel: &BooleanRelation, r_rel: &BooleanRelation) -> Result<S01Analysis> {
    let s_report = closure_report(s_rel);
    if !s_report.one_valid {
        return Err(Error::contract("S must be 1-valid"));
    }
    if s_report.zero_valid {
        return Err(Error::contract("S must not be 0-valid"));
    }
    let r_report = closure_report(r_rel);
    if !r_report.one_valid {
        return Err(Error::contract("R must be 1-valid"));
    }
    if !r_report.dual_horn {
        return Err(Error::contract("R must be dual Horn"));
    }
    if r_report.horn {
        return Err(Error::contract("R must not be Horn"));
    }

    let tuples: Vec<&Vec<bool>> = r_rel.tuples().iter().collect();
    let k = r_rel.arity() as usize;
    let witness = tuples.iter().find_map(|&m1| {
        tuples.iter().find_map(|&m2| {
            let meet: Vec<bool> = (0..k).map(|c| m1[c] && m2[c]).collect();
            (!r_rel.contains(&meet)).then(|| (m1.clone(), m2.clone()))
        })
    });
    let (m1, m2) = witness.expect("a non-Horn relation has a meet-escaping pair");

    let mut v00 = Vec::new();
    let mut v01 = Vec::new();
    let mut v10 = Vec::new();
    let mut v11 = Vec::new();
    for c in 0..k as u32 {
        match (m1[c as usize], m2[c as usize]) {
            (false, false) => v00.push(c),
            (false, true) => v01.push(c),
            (true, false) => v10.push(c),
            (true, true) => v11.push(c),
        }
    }
    if v01.is_empty() || v10.is_empty() {
        return Err(Error::contract(
            "witness pair does not separate coordinates; meet could not escape R",
        ));
    }
    // Does the derived constraint contain the pattern with the v00 block
    // and the v11 block true, everything else false?
    let pattern: Vec<bool> = (0..k as u32)
        .map(|c| v00.contains(&c) || v11.contains(&c))
        .collect();
    let branch = if r_rel.contains(&pattern) {
        S01Branch::Replicated
    } else {
        S01Branch::Single
    };
    Ok(S01Analysis {
        m1,
        m2,
        v00,
        v01,
        v10,
        v11,
        branch,
    })
}

/// Rewrites a pure OR2 query over the language {S, R}: each disjunction
/// (x | y) becomes applications of R with its coordinates collapsed onto
/// slack, x, y, and a shared variable forced to one by S.
pub fn s01_witness_reduction(
    q: &CspQuery,
    s_rel: &BooleanRelation,
    r_rel: &BooleanRelation,
) -> Result<ReductionOutput<CspQuery>> {
    let pairs = or2_pairs(&q.formula)?;
    let analysis = s01_analysis(s_rel, r_rel)?;
    let n = q.formula.universe_size();
    let m = pairs.len() as u32;

    let slack_per_constraint = match analysis.branch {
        S01Branch::Single => 1,
        S01Branch::Replicated => n + 1,
    };
    let universe = n + m * slack_per_constraint + 1;
    let shared_t = Variable::new(universe);

    let mut target = ConstraintFormula::new(universe);
    let rel_r = target.add_relation("R", r_rel.clone())?;
    let rel_s = target.add_relation("S", s_rel.clone())?;

    let application_vars = |slack: Variable, x: Variable, y: Variable| -> Vec<Variable> {
        (0..r_rel.arity())
            .map(|c| {
                if analysis.v00.contains(&c) {
                    slack
                } else if analysis.v01.contains(&c) {
                    x
                } else if analysis.v10.contains(&c) {
                    y
                } else {
                    shared_t
                }
            })
            .collect()
    };

    for (i, &(x, y)) in pairs.iter().enumerate() {
        let i = i as u32;
        for j in 0..slack_per_constraint {
            let slack = Variable::new(n + i * slack_per_constraint + j + 1);
            target.add_application(rel_r, application_vars(slack, x, y))?;
        }
    }
    target.add_application(rel_s, vec![shared_t; s_rel.arity() as usize])?;

    let var_map: BTreeMap<u32, u32> = (1..=n).map(|v| (v, v)).collect();
    Ok(ReductionOutput::new(
        CspQuery::new(target, q.query_var)?,
        var_map,
        "meet-witness block substitution",
    ))
}
