//! Boolean relations and conjunctions of constraint applications.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::{Assignment, Clause, CnfFormula, Literal, Variable};

/// A logical relation of arity k: an explicit set of k-bit tuples.
///
/// Emptiness is permitted (the relation of an unsatisfiable formula) but
/// most consumers flag it.
#[derive(Clone, PartialEq, Eq)]
pub struct BooleanRelation {
    arity: u32,
    tuples: BTreeSet<Vec<bool>>,
}

impl BooleanRelation {
    pub fn new<I: IntoIterator<Item = Vec<bool>>>(arity: u32, tuples: I) -> Result<BooleanRelation> {
        if arity == 0 {
            return Err(Error::contract("relation arity must be at least 1"));
        }
        let tuples: BTreeSet<Vec<bool>> = tuples.into_iter().collect();
        for t in &tuples {
            if t.len() as u32 != arity {
                return Err(Error::contract(format!(
                    "tuple of length {} in relation of arity {}",
                    t.len(),
                    arity
                )));
            }
        }
        Ok(BooleanRelation { arity, tuples })
    }

    /// Builds a relation from tuple bit strings such as "01", "10".
    pub fn from_bits(arity: u32, tuples: &[&str]) -> Result<BooleanRelation> {
        let parsed = tuples
            .iter()
            .map(|s| s.chars().map(|c| c == '1').collect())
            .collect::<Vec<Vec<bool>>>();
        BooleanRelation::new(arity, parsed)
    }

    /// The unary relation fixing its argument to `bit`.
    pub fn constant(bit: bool) -> BooleanRelation {
        BooleanRelation::new(1, [vec![bit]]).unwrap()
    }

    /// Binary equality {(0,0),(1,1)}.
    pub fn equality() -> BooleanRelation {
        BooleanRelation::from_bits(2, &["00", "11"]).unwrap()
    }

    /// Binary disequality {(0,1),(1,0)}.
    pub fn disequality() -> BooleanRelation {
        BooleanRelation::from_bits(2, &["01", "10"]).unwrap()
    }

    /// Binary disjunction {(0,1),(1,0),(1,1)}.
    pub fn or2() -> BooleanRelation {
        BooleanRelation::from_bits(2, &["01", "10", "11"]).unwrap()
    }

    /// Binary implication {(0,0),(0,1),(1,1)}.
    pub fn implication() -> BooleanRelation {
        BooleanRelation::from_bits(2, &["00", "01", "11"]).unwrap()
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<bool>> {
        &self.tuples
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn contains(&self, tuple: &[bool]) -> bool {
        self.tuples.contains(tuple)
    }

    /// Canonical CNF over positions 1..arity: for every non-tuple, the
    /// forbidding clause, greedily shortened to a prime implicate (never
    /// below one literal), duplicates removed.
    pub fn prime_clauses(&self) -> Vec<Vec<(u32, bool)>> {
        let k = self.arity as usize;
        let mut out: Vec<Vec<(u32, bool)>> = Vec::new();
        let mut seen: BTreeSet<Vec<(u32, bool)>> = BTreeSet::new();
        for idx in 0u64..(1u64 << k) {
            let pattern: Vec<bool> = (0..k).map(|i| idx & (1 << (k - 1 - i)) != 0).collect();
            if self.tuples.contains(&pattern) {
                continue;
            }
            let mut kept: Vec<usize> = (0..k).collect();
            for drop in 0..k {
                if kept.len() == 1 {
                    break;
                }
                let shorter: Vec<usize> = kept.iter().copied().filter(|&i| i != drop).collect();
                if shorter.len() < kept.len() && self.is_implicate(&pattern, &shorter) {
                    kept = shorter;
                }
            }
            // Literal at position i is falsified exactly when the variable
            // takes value pattern[i], so its polarity is the complement.
            let clause: Vec<(u32, bool)> =
                kept.iter().map(|&i| (i as u32, !pattern[i])).collect();
            if seen.insert(clause.clone()) {
                out.push(clause);
            }
        }
        out
    }

    /// True iff no tuple of the relation agrees with `pattern` on every
    /// position in `positions` (the shortened forbidding clause still only
    /// excludes non-tuples).
    fn is_implicate(&self, pattern: &[bool], positions: &[usize]) -> bool {
        !self
            .tuples
            .iter()
            .any(|t| positions.iter().all(|&i| t[i] == pattern[i]))
    }
}

impl fmt::Debug for BooleanRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rel/{}{{", self.arity)?;
        for (i, t) in self.tuples.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            for &b in t {
                write!(f, "{}", if b { '1' } else { '0' })?;
            }
        }
        write!(f, "}}")
    }
}

/// A conjunction of constraint applications over a named relation table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintFormula {
    universe_size: u32,
    relations: Vec<(String, BooleanRelation)>,
    applications: Vec<(usize, Vec<Variable>)>,
}

impl ConstraintFormula {
    pub fn new(universe_size: u32) -> ConstraintFormula {
        ConstraintFormula {
            universe_size,
            relations: Vec::new(),
            applications: Vec::new(),
        }
    }

    pub fn universe_size(&self) -> u32 {
        self.universe_size
    }

    pub fn add_relation(&mut self, name: &str, rel: BooleanRelation) -> Result<usize> {
        if self.relations.iter().any(|(n, _)| n == name) {
            return Err(Error::contract(format!("duplicate relation name {name}")));
        }
        self.relations.push((name.to_string(), rel));
        Ok(self.relations.len() - 1)
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|(n, _)| n == name)
    }

    pub fn add_application(&mut self, rel: usize, vars: Vec<Variable>) -> Result<()> {
        let (name, relation) = self
            .relations
            .get(rel)
            .ok_or_else(|| Error::contract(format!("unknown relation index {rel}")))?;
        if vars.len() as u32 != relation.arity() {
            return Err(Error::ArityMismatch {
                relation: name.clone(),
                expected: relation.arity(),
                actual: vars.len() as u32,
            });
        }
        for v in &vars {
            if v.id() > self.universe_size {
                return Err(Error::VariableOutOfUniverse {
                    var: v.id(),
                    universe: self.universe_size,
                });
            }
        }
        self.applications.push((rel, vars));
        Ok(())
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &BooleanRelation)> {
        self.relations.iter().map(|(n, r)| (n.as_str(), r))
    }

    pub fn relation(&self, idx: usize) -> &BooleanRelation {
        &self.relations[idx].1
    }

    pub fn relation_name(&self, idx: usize) -> &str {
        &self.relations[idx].0
    }

    pub fn applications(&self) -> &[(usize, Vec<Variable>)] {
        &self.applications
    }

    /// True iff the projected bit vector of every application is a tuple of
    /// its relation.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool> {
        if a.universe_size() != self.universe_size {
            return Err(Error::UniverseMismatch {
                left: self.universe_size,
                right: a.universe_size(),
            });
        }
        for (rel, vars) in &self.applications {
            let tuple: Vec<bool> = vars.iter().map(|&v| a.contains(v)).collect();
            if !self.relations[*rel].1.contains(&tuple) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// An equivalent CNF over the same universe, without auxiliary
    /// variables: each application expands into the prime-implicate clauses
    /// of its relation, substituted; tautological clauses vanish.
    pub fn to_cnf(&self) -> CnfFormula {
        let prime: Vec<Vec<Vec<(u32, bool)>>> = self
            .relations
            .iter()
            .map(|(_, r)| r.prime_clauses())
            .collect();
        let mut clauses = Vec::new();
        for (rel, vars) in &self.applications {
            'clause: for template in &prime[*rel] {
                let mut lits: Vec<Literal> = Vec::with_capacity(template.len());
                for &(pos, polarity) in template {
                    let lit = Literal::new(vars[pos as usize], polarity);
                    if lits.contains(&lit.negated()) {
                        continue 'clause; // substitution made it tautological
                    }
                    if !lits.contains(&lit) {
                        lits.push(lit);
                    }
                }
                clauses.push(Clause::new(lits).expect("templates are non-empty"));
            }
        }
        CnfFormula::new(self.universe_size, clauses).expect("variables validated on insertion")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn eval_constraint_examples() {
        let mut cf = ConstraintFormula::new(1);
        let or2 = cf.add_relation("OR2", BooleanRelation::or2()).unwrap();
        cf.add_application(or2, vec![Variable::new(1), Variable::new(1)])
            .unwrap();
        assert!(cf.evaluate(&Assignment::new(1, [1]).unwrap()).unwrap());
        assert!(!cf.evaluate(&Assignment::empty(1)).unwrap());

        let empty = ConstraintFormula::new(3);
        assert!(empty.evaluate(&Assignment::empty(3)).unwrap());
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let mut cf = ConstraintFormula::new(2);
        let or2 = cf.add_relation("OR2", BooleanRelation::or2()).unwrap();
        assert!(matches!(
            cf.add_application(or2, vec![Variable::new(1)]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn to_cnf_or2_forbids_only_00() {
        let mut cf = ConstraintFormula::new(2);
        let or2 = cf.add_relation("OR2", BooleanRelation::or2()).unwrap();
        cf.add_application(or2, vec![Variable::new(1), Variable::new(2)])
            .unwrap();
        let f = cf.to_cnf();
        assert_eq!(f.clauses().len(), 1);
        assert_eq!(
            f.clauses()[0].literals(),
            &[Literal::pos(1), Literal::pos(2)]
        );
    }

    #[test]
    fn to_cnf_equality_gives_both_implications() {
        let mut cf = ConstraintFormula::new(2);
        let eq = cf.add_relation("EQ", BooleanRelation::equality()).unwrap();
        cf.add_application(eq, vec![Variable::new(1), Variable::new(2)])
            .unwrap();
        let f = cf.to_cnf();
        let got: BTreeSet<Vec<Literal>> = f
            .clauses()
            .iter()
            .map(|c| c.literals().to_vec())
            .collect();
        let want: BTreeSet<Vec<Literal>> = [
            vec![Literal::pos(1), Literal::neg(2)],
            vec![Literal::neg(1), Literal::pos(2)],
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn to_cnf_empty_relation_is_unsatisfiable() {
        let mut cf = ConstraintFormula::new(1);
        let empty = cf
            .add_relation("EMPTY", BooleanRelation::new(1, Vec::<Vec<bool>>::new()).unwrap())
            .unwrap();
        cf.add_application(empty, vec![Variable::new(1)]).unwrap();
        let f = cf.to_cnf();
        assert!(f.all_models().unwrap().is_empty());
    }

    #[test]
    fn to_cnf_repeated_variables_drop_tautologies() {
        // EQ(x,x) holds always; NEQ(x,x) never.
        let mut always = ConstraintFormula::new(1);
        let eq = always
            .add_relation("EQ", BooleanRelation::equality())
            .unwrap();
        always
            .add_application(eq, vec![Variable::new(1), Variable::new(1)])
            .unwrap();
        assert!(always.to_cnf().clauses().is_empty());

        let mut never = ConstraintFormula::new(1);
        let neq = never
            .add_relation("NEQ", BooleanRelation::disequality())
            .unwrap();
        never
            .add_application(neq, vec![Variable::new(1), Variable::new(1)])
            .unwrap();
        assert!(never.to_cnf().all_models().unwrap().is_empty());
    }

    #[test]
    fn to_cnf_model_set_matches_constraints_exhaustively() {
        // A mixed formula over 4 variables, checked against direct
        // constraint evaluation on all 16 assignments.
        let mut cf = ConstraintFormula::new(4);
        let or2 = cf.add_relation("OR2", BooleanRelation::or2()).unwrap();
        let neq = cf.add_relation("NEQ", BooleanRelation::disequality()).unwrap();
        cf.add_application(or2, vec![Variable::new(1), Variable::new(2)])
            .unwrap();
        cf.add_application(neq, vec![Variable::new(2), Variable::new(3)])
            .unwrap();
        cf.add_application(or2, vec![Variable::new(4), Variable::new(4)])
            .unwrap();
        let f = cf.to_cnf();
        for mask in 0u64..16 {
            let a = Assignment::from_mask(4, mask);
            assert_eq!(cf.evaluate(&a).unwrap(), f.evaluate(&a).unwrap());
        }
    }

    #[test]
    fn prime_clauses_of_horn_relation_are_horn() {
        // Closed under coordinate-wise AND, but its naive forbidding
        // clauses are not all Horn; shortening must fix that.
        let rel = BooleanRelation::from_bits(3, &["110", "101", "100", "000"]).unwrap();
        let mut cf = ConstraintFormula::new(3);
        let idx = cf.add_relation("R", rel).unwrap();
        cf.add_application(
            idx,
            vec![Variable::new(1), Variable::new(2), Variable::new(3)],
        )
        .unwrap();
        let f = cf.to_cnf();
        assert!(f.is_horn());
        for mask in 0u64..8 {
            let a = Assignment::from_mask(3, mask);
            assert_eq!(cf.evaluate(&a).unwrap(), f.evaluate(&a).unwrap());
        }
    }
}
