//! Decision oracle: a complete SAT procedure plus polynomial fast paths
//! (2-SAT, Horn) and cardinality-bound encodings.
//!
//! The complete backend sits behind the [`Oracle`] trait so an external
//! DIMACS solver can be dropped in; every invocation owns its state and
//! instances are safe to share across threads between calls.

mod dpll;
mod encode;
mod external;
mod horn;
mod twosat;

pub use external::ExternalSolver;
pub use horn::horn_min_model;
pub use twosat::solve_2sat;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::{Assignment, CnfFormula, Literal};

/// Outcome of a satisfiability query; the witness is present exactly when
/// the query is satisfiable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    satisfiable: bool,
    witness: Option<Assignment>,
}

impl SatResult {
    pub fn sat(witness: Assignment) -> SatResult {
        SatResult {
            satisfiable: true,
            witness: Some(witness),
        }
    }

    pub fn unsat() -> SatResult {
        SatResult {
            satisfiable: false,
            witness: None,
        }
    }

    pub fn is_sat(&self) -> bool {
        self.satisfiable
    }

    pub fn witness(&self) -> Option<&Assignment> {
        self.witness.as_ref()
    }

    pub fn into_witness(self) -> Option<Assignment> {
        self.witness
    }
}

/// A complete satisfiability procedure.
pub trait Oracle: Send + Sync {
    /// Decides `formula` under the given assumption literals; on success
    /// the witness extends the assumptions.
    fn solve(&self, formula: &CnfFormula, assumptions: &[Literal]) -> Result<SatResult>;

    fn name(&self) -> &str {
        "oracle"
    }
}

/// The built-in conflict-driven DPLL backend.
#[derive(Debug, Default, Clone, Copy)]
pub struct Dpll;

impl Oracle for Dpll {
    fn solve(&self, formula: &CnfFormula, assumptions: &[Literal]) -> Result<SatResult> {
        for lit in assumptions {
            if lit.var().id() > formula.universe_size() {
                return Err(Error::VariableOutOfUniverse {
                    var: lit.var().id(),
                    universe: formula.universe_size(),
                });
            }
        }
        Ok(dpll::solve(formula, assumptions))
    }

    fn name(&self) -> &str {
        "builtin"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundDirection {
    AtMost,
    AtLeast,
}

/// A cardinality bound over a scope of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalityBound {
    direction: BoundDirection,
    k: u32,
    scope: BTreeSet<u32>,
}

impl CardinalityBound {
    pub fn new<I: IntoIterator<Item = u32>>(
        direction: BoundDirection,
        k: u32,
        scope: I,
    ) -> Result<CardinalityBound> {
        let scope: BTreeSet<u32> = scope.into_iter().collect();
        if scope.contains(&0) {
            return Err(Error::contract("variable ids are 1-based"));
        }
        // k = |scope|+1 is permitted: trivially true at-most, trivially
        // unsatisfiable at-least.
        if k > scope.len() as u32 + 1 {
            return Err(Error::contract(format!(
                "bound {} exceeds scope size {} + 1",
                k,
                scope.len()
            )));
        }
        Ok(CardinalityBound {
            direction,
            k,
            scope,
        })
    }

    pub fn at_most<I: IntoIterator<Item = u32>>(k: u32, scope: I) -> Result<CardinalityBound> {
        CardinalityBound::new(BoundDirection::AtMost, k, scope)
    }

    pub fn at_least<I: IntoIterator<Item = u32>>(k: u32, scope: I) -> Result<CardinalityBound> {
        CardinalityBound::new(BoundDirection::AtLeast, k, scope)
    }

    pub fn direction(&self) -> BoundDirection {
        self.direction
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn scope(&self) -> &BTreeSet<u32> {
        &self.scope
    }
}

/// Decides whether a model exists whose true set, intersected with the
/// bound's scope, respects the bound. Auxiliary variables introduced by
/// the encoding are stripped from the witness.
pub fn sat_with_bound(
    oracle: &dyn Oracle,
    formula: &CnfFormula,
    bound: &CardinalityBound,
) -> Result<SatResult> {
    sat_with_bound_assuming(oracle, formula, bound, &[])
}

/// [`sat_with_bound`] under extra assumption literals.
pub fn sat_with_bound_assuming(
    oracle: &dyn Oracle,
    formula: &CnfFormula,
    bound: &CardinalityBound,
    assumptions: &[Literal],
) -> Result<SatResult> {
    if let Some(&max) = bound.scope().iter().next_back() {
        if max > formula.universe_size() {
            return Err(Error::VariableOutOfUniverse {
                var: max,
                universe: formula.universe_size(),
            });
        }
    }
    let universe = formula.universe_size();
    let lits: Vec<Literal> = bound.scope().iter().map(|&v| Literal::pos(v)).collect();
    let mut clauses = formula.clauses().to_vec();
    let mut next_aux = universe + 1;
    match bound.direction() {
        BoundDirection::AtMost => {
            encode::at_most(&lits, bound.k(), &mut next_aux, &mut clauses);
        }
        BoundDirection::AtLeast => {
            encode::at_least(&lits, bound.k(), &mut next_aux, &mut clauses);
        }
    }
    let extended = CnfFormula::new(next_aux - 1, clauses)?;
    let result = oracle.solve(&extended, assumptions)?;
    Ok(match result.into_witness() {
        Some(w) => SatResult::sat(w.restrict_universe(universe)),
        None => SatResult::unsat(),
    })
}
