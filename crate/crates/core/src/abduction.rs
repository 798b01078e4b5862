//! Propositional abduction: solution checking, solvability, and relevance
//! of a hypothesis under the cardinality preorder, with set-inclusion and
//! any-solution variants exposed as cheap byproducts.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::{Clause, CnfFormula, Literal, Variable};
use crate::sat::{sat_with_bound_assuming, solve_2sat, CardinalityBound, Dpll, Oracle};

/// Hypothesis-set enumeration refuses beyond this many hypotheses.
pub const HYPOTHESIS_ENUMERATION_CAP: u32 = 20;

/// A propositional abduction problem: variables, hypotheses, observed
/// manifestations, and a consistent theory.
#[derive(Clone, Debug)]
pub struct Pap {
    theory: CnfFormula,
    hypotheses: BTreeSet<u32>,
    manifestations: BTreeSet<u32>,
}

impl Pap {
    /// Builds a problem, checking the theory for consistency. Hypotheses
    /// and manifestations may overlap; nothing forbids it.
    pub fn new<H, M>(theory: CnfFormula, hypotheses: H, manifestations: M) -> Result<Pap>
    where
        H: IntoIterator<Item = u32>,
        M: IntoIterator<Item = u32>,
    {
        let universe = theory.universe_size();
        let hypotheses: BTreeSet<u32> = hypotheses.into_iter().collect();
        let manifestations: BTreeSet<u32> = manifestations.into_iter().collect();
        for &v in hypotheses.iter().chain(manifestations.iter()) {
            if v == 0 || v > universe {
                return Err(Error::VariableOutOfUniverse { var: v, universe });
            }
        }
        let consistent = if theory.is_krom() {
            solve_2sat(&theory)?.is_sat()
        } else {
            Dpll.solve(&theory, &[])?.is_sat()
        };
        if !consistent {
            return Err(Error::contract("abduction requires a consistent theory"));
        }
        Ok(Pap {
            theory,
            hypotheses,
            manifestations,
        })
    }

    pub fn theory(&self) -> &CnfFormula {
        &self.theory
    }

    pub fn universe_size(&self) -> u32 {
        self.theory.universe_size()
    }

    pub fn hypotheses(&self) -> &BTreeSet<u32> {
        &self.hypotheses
    }

    pub fn manifestations(&self) -> &BTreeSet<u32> {
        &self.manifestations
    }

    fn check_subset(&self, s: &BTreeSet<u32>) -> Result<()> {
        if !s.is_subset(&self.hypotheses) {
            return Err(Error::contract(
                "candidate solution must be a subset of the hypotheses",
            ));
        }
        Ok(())
    }

    /// Satisfiability of the theory plus unit literals, via the Krom fast
    /// path when available (units keep a Krom theory Krom).
    fn theory_sat_with_units(&self, units: &[Literal]) -> Result<bool> {
        if self.theory.is_krom() {
            let mut clauses = self.theory.clauses().to_vec();
            clauses.extend(units.iter().map(|&l| Clause::unit(l)));
            let extended = CnfFormula::new(self.universe_size(), clauses)?;
            Ok(solve_2sat(&extended)?.is_sat())
        } else {
            Ok(Dpll.solve(&self.theory, units)?.is_sat())
        }
    }
}

/// Is `s` a solution: the theory plus `s` is consistent and entails every
/// manifestation?
pub fn is_solution(p: &Pap, s: &BTreeSet<u32>) -> Result<bool> {
    p.check_subset(s)?;
    let units: Vec<Literal> = s.iter().map(|&v| Literal::pos(v)).collect();
    if !p.theory_sat_with_units(&units)? {
        return Ok(false);
    }
    for &m in p.manifestations() {
        let mut refute = units.clone();
        refute.push(Literal::neg(m));
        if p.theory_sat_with_units(&refute)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relevance answer; the witness is a minimum-cardinality solution
/// containing the queried hypothesis and is present exactly when relevant.
/// `min_size` is the minimum solution cardinality, absent when the problem
/// has no solution at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbductionAnswer {
    pub relevant: bool,
    pub min_size: Option<u32>,
    pub witness_solution: Option<BTreeSet<u32>>,
}

/// Full subset enumeration by increasing size.
pub fn brute_force_relevance(p: &Pap, h: Variable) -> Result<AbductionAnswer> {
    if !p.hypotheses().contains(&h.id()) {
        return Err(Error::contract("queried hypothesis must be in H"));
    }
    let hyps: Vec<u32> = p.hypotheses().iter().copied().collect();
    if hyps.len() as u32 > HYPOTHESIS_ENUMERATION_CAP {
        return Err(Error::Budget {
            what: format!("enumeration over {} hypotheses", hyps.len()),
            cap: HYPOTHESIS_ENUMERATION_CAP as u64,
        });
    }
    for size in 0..=hyps.len() as u32 {
        let mut found_any = false;
        let mut witness: Option<BTreeSet<u32>> = None;
        for mask in 0u32..(1 << hyps.len()) {
            if mask.count_ones() != size {
                continue;
            }
            let s: BTreeSet<u32> = hyps
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            if is_solution(p, &s)? {
                found_any = true;
                if witness.is_none() && s.contains(&h.id()) {
                    witness = Some(s);
                }
            }
        }
        if found_any {
            return Ok(AbductionAnswer {
                relevant: witness.is_some(),
                min_size: Some(size),
                witness_solution: witness,
            });
        }
    }
    Ok(AbductionAnswer {
        relevant: false,
        min_size: None,
        witness_solution: None,
    })
}

/// Oracle-guided relevance: hypothesis-selector variables are added to the
/// theory, the minimum solution size is found by binary search over
/// cardinality-bounded queries, and each candidate selector pattern is
/// verified by per-manifestation entailment checks (polynomial when the
/// theory is Krom). Failed candidates are blocked and the search resumes.
pub fn leq_relevance(oracle: &dyn Oracle, p: &Pap, h: Variable) -> Result<AbductionAnswer> {
    if !p.hypotheses().contains(&h.id()) {
        return Err(Error::contract("queried hypothesis must be in H"));
    }
    let n = p.universe_size();
    let hyps: Vec<u32> = p.hypotheses().iter().copied().collect();
    let selector_of = |v: u32| {
        let idx = hyps.binary_search(&v).expect("hypothesis");
        Variable::new(n + 1 + idx as u32)
    };
    let mut clauses = p.theory().clauses().to_vec();
    for &v in &hyps {
        clauses.push(Clause::binary(
            Literal::new(selector_of(v), false),
            Literal::pos(v),
        ));
    }
    let base = CnfFormula::new(n + hyps.len() as u32, clauses)?;
    let scope: Vec<u32> = (n + 1..=n + hyps.len() as u32).collect();

    // Blocking clauses for selector patterns that failed verification;
    // they stay valid for every later bound.
    let mut blocked: Vec<Clause> = Vec::new();

    let try_bound = |k: u32,
                         force: Option<Variable>,
                         blocked: &mut Vec<Clause>|
     -> Result<Option<BTreeSet<u32>>> {
        let assumptions: Vec<Literal> = force
            .into_iter()
            .map(|v| Literal::new(selector_of(v.id()), true))
            .collect();
        loop {
            let mut clauses = base.clauses().to_vec();
            clauses.extend(blocked.iter().cloned());
            let formula = CnfFormula::new(base.universe_size(), clauses)?;
            let bound = CardinalityBound::at_most(k, scope.iter().copied())?;
            let result = sat_with_bound_assuming(oracle, &formula, &bound, &assumptions)?;
            let witness = match result.into_witness() {
                Some(w) => w,
                None => return Ok(None),
            };
            let s: BTreeSet<u32> = hyps
                .iter()
                .filter(|&&v| witness.contains(selector_of(v)))
                .copied()
                .collect();
            if is_solution(p, &s)? {
                return Ok(Some(s));
            }
            // Block exactly this selector pattern.
            blocked.push(
                Clause::new(
                    hyps.iter()
                        .map(|&v| Literal::new(selector_of(v), !s.contains(&v)))
                        .collect(),
                )
                .expect("at least one hypothesis"),
            );
        }
    };

    let mut hi = match try_bound(hyps.len() as u32, None, &mut blocked)? {
        None => {
            return Ok(AbductionAnswer {
                relevant: false,
                min_size: None,
                witness_solution: None,
            })
        }
        Some(s) => s.len() as u32,
    };

    let mut lo = 0u32;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match try_bound(mid, None, &mut blocked)? {
            Some(s) => hi = s.len() as u32,
            None => lo = mid + 1,
        }
    }
    let min_size = lo;

    let witness = try_bound(min_size, Some(h), &mut blocked)?;
    Ok(AbductionAnswer {
        relevant: witness.is_some(),
        min_size: Some(min_size),
        witness_solution: witness,
    })
}

/// Does some solution contain the hypothesis? Brute force.
pub fn any_relevance(p: &Pap, h: Variable) -> Result<bool> {
    enumerate_solutions(p, |s| s.contains(&h.id()))
}

/// Does some subset-minimal solution contain the hypothesis? Brute force.
pub fn subset_relevance(p: &Pap, h: Variable) -> Result<bool> {
    if !p.hypotheses().contains(&h.id()) {
        return Err(Error::contract("queried hypothesis must be in H"));
    }
    let mut solutions: Vec<BTreeSet<u32>> = Vec::new();
    enumerate_solutions(p, |s| {
        solutions.push(s.clone());
        false
    })?;
    Ok(solutions
        .iter()
        .filter(|s| !solutions.iter().any(|t| t.len() < s.len() && t.is_subset(s)))
        .any(|s| s.contains(&h.id())))
}

/// Feeds every solution to the visitor; stops early when it returns true.
fn enumerate_solutions<F: FnMut(&BTreeSet<u32>) -> bool>(p: &Pap, mut visit: F) -> Result<bool> {
    let hyps: Vec<u32> = p.hypotheses().iter().copied().collect();
    if hyps.len() as u32 > HYPOTHESIS_ENUMERATION_CAP {
        return Err(Error::Budget {
            what: format!("enumeration over {} hypotheses", hyps.len()),
            cap: HYPOTHESIS_ENUMERATION_CAP as u64,
        });
    }
    for mask in 0u32..(1u32 << hyps.len()) {
        let s: BTreeSet<u32> = hyps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect();
        if is_solution(p, &s)? && visit(&s) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use rand::Rng;

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

    fn set(vars: &[u32]) -> BTreeSet<u32> {
        vars.iter().copied().collect()
    }

    /// The instance derived from (x1 | x2): variables x1=1 x2=2 g1=3,
    /// theory x1 -> g1, x2 -> g1, hypotheses {x1,x2}, manifestation {g1}.
    fn or_instance() -> Pap {
        let t = formula(3, &[&[-1, 3], &[-2, 3]]);
        Pap::new(t, [1, 2], [3]).unwrap()
    }

    #[test]
    fn is_solution_examples() {
        let p = or_instance();
        assert!(is_solution(&p, &set(&[1])).unwrap());
        assert!(!is_solution(&p, &set(&[])).unwrap());
        assert!(is_solution(&p, &set(&[1, 2])).unwrap());
        assert!(is_solution(&p, &set(&[3])).is_err());
    }

    #[test]
    fn inconsistent_theories_are_rejected() {
        let t = formula(1, &[&[1], &[-1]]);
        assert!(Pap::new(t, [1], []).is_err());
    }

    #[test]
    fn relevance_examples() {
        let p = or_instance();
        let a = brute_force_relevance(&p, Variable::new(1)).unwrap();
        assert!(a.relevant);
        assert_eq!(a.min_size, Some(1));
        assert_eq!(a.witness_solution.unwrap().len(), 1);

        // (x1) & (x1 | x2) as positive Krom with a degenerate unit clause:
        // theory x1 -> g1 (twice), x1 -> g2, x2 -> g2.
        let t = formula(4, &[&[-1, 3], &[-1, 3], &[-1, 4], &[-2, 4]]);
        let p = Pap::new(t, [1, 2], [3, 4]).unwrap();
        let a = brute_force_relevance(&p, Variable::new(2)).unwrap();
        assert!(!a.relevant);
        assert_eq!(a.min_size, Some(1));

        // No hypotheses, unentailed manifestation: no solutions at all,
        // and relevance can only be asked of actual hypotheses.
        let t = formula(1, &[]);
        let p = Pap::new(t, [], [1]).unwrap();
        assert!(!is_solution(&p, &set(&[])).unwrap());
        assert!(brute_force_relevance(&p, Variable::new(1)).is_err());
        assert!(leq_relevance(&Dpll, &p, Variable::new(1)).is_err());
    }

    #[test]
    fn unsolvable_instance_has_no_min_size() {
        // The manifestation is independent of the only hypothesis.
        let t = formula(2, &[]);
        let p = Pap::new(t, [1], [2]).unwrap();
        for answer in [
            brute_force_relevance(&p, Variable::new(1)).unwrap(),
            leq_relevance(&Dpll, &p, Variable::new(1)).unwrap(),
        ] {
            assert!(!answer.relevant);
            assert_eq!(answer.min_size, None);
            assert!(answer.witness_solution.is_none());
        }
    }

    #[test]
    fn oracle_relevance_matches_brute_force() {
        let mut rng = gen::rng(0xABDC);
        let mut tested = 0;
        for round in 0..400u32 {
            let n = 2 + round % 6;
            let theory = gen::random_krom(n, round % 6, &mut rng);
            let hyp_count = 1 + (rng.gen::<u32>() % n);
            let hyps: Vec<u32> = (1..=n).filter(|_| rng.gen_bool(0.6)).take(hyp_count as usize).collect();
            let mans: Vec<u32> = (1..=n).filter(|_| rng.gen_bool(0.3)).collect();
            let p = match Pap::new(theory, hyps.clone(), mans) {
                Ok(p) => p,
                Err(_) => continue, // inconsistent theory
            };
            if p.hypotheses().is_empty() {
                continue;
            }
            tested += 1;
            for &h in p.hypotheses().clone().iter() {
                let brute = brute_force_relevance(&p, Variable::new(h)).unwrap();
                let fast = leq_relevance(&Dpll, &p, Variable::new(h)).unwrap();
                assert_eq!(
                    (fast.relevant, fast.min_size),
                    (brute.relevant, brute.min_size),
                    "pap {p:?} h {h}"
                );
                if let Some(w) = &fast.witness_solution {
                    assert!(is_solution(&p, w).unwrap());
                    assert!(w.contains(&h));
                    assert_eq!(w.len() as u32, fast.min_size.unwrap());
                }
            }
        }
        assert!(tested > 100, "corpus too thin: {tested}");
    }

    #[test]
    fn consistent_supersets_of_solutions_are_solutions() {
        let mut rng = gen::rng(0x5077);
        for round in 0..150u32 {
            let n = 2 + round % 5;
            let theory = gen::random_krom(n, round % 5, &mut rng);
            let p = match Pap::new(theory, 1..=n, (1..=n).filter(|_| rng.gen_bool(0.3))) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let hyps: Vec<u32> = p.hypotheses().iter().copied().collect();
            for mask in 0u32..(1 << hyps.len()) {
                let s: BTreeSet<u32> = hyps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                if !is_solution(&p, &s).unwrap() {
                    continue;
                }
                for &extra in &hyps {
                    let mut bigger = s.clone();
                    bigger.insert(extra);
                    let units: Vec<Literal> =
                        bigger.iter().map(|&v| Literal::pos(v)).collect();
                    if p.theory_sat_with_units(&units).unwrap() {
                        assert!(is_solution(&p, &bigger).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn subset_and_any_relevance() {
        let p = or_instance();
        assert!(subset_relevance(&p, Variable::new(1)).unwrap());
        assert!(any_relevance(&p, Variable::new(1)).unwrap());
        // Hypothesis overlapping a manifestation is allowed.
        let t = formula(2, &[&[-1, 2]]);
        let p = Pap::new(t, [1, 2], [2]).unwrap();
        assert!(any_relevance(&p, Variable::new(2)).unwrap());
    }
}
