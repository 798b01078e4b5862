//! Dalal and Satoh belief revision: restrict the models of the new belief
//! to those with minimal change from the models of the old one, measured
//! by symmetric-difference cardinality (Dalal) or set inclusion (Satoh).
//!
//! Exact brute-force semantics at enumeration scale; Dalal additionally
//! has an oracle mode that lifts the cap by encoding difference indicator
//! variables and reusing the cardinality-bounded search. Satoh beyond
//! brute force is limited to the polynomial minimality check for inputs
//! that are both Krom or both Horn.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::{
    Assignment, Clause, CnfFormula, Literal, Variable, DEFAULT_ENUMERATION_CAP,
};
use crate::sat::{
    horn_min_model, sat_with_bound_assuming, solve_2sat, CardinalityBound, Oracle,
};

/// A belief set and a new belief over a shared universe. The belief set
/// need not be satisfiable; revision by or of a contradiction selects
/// nothing.
#[derive(Clone, Debug)]
pub struct RevisionInstance {
    psi: CnfFormula,
    mu: CnfFormula,
}

impl RevisionInstance {
    pub fn new(psi: CnfFormula, mu: CnfFormula) -> Result<RevisionInstance> {
        if psi.universe_size() != mu.universe_size() {
            return Err(Error::UniverseMismatch {
                left: psi.universe_size(),
                right: mu.universe_size(),
            });
        }
        Ok(RevisionInstance { psi, mu })
    }

    pub fn psi(&self) -> &CnfFormula {
        &self.psi
    }

    pub fn mu(&self) -> &CnfFormula {
        &self.mu
    }

    pub fn universe_size(&self) -> u32 {
        self.mu.universe_size()
    }
}

/// Dalal revision outcome: the minimal change cardinality and the models
/// of mu attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DalalResult {
    pub delta_min: Option<u32>,
    pub selected_models: BTreeSet<Assignment>,
}

/// Satoh revision outcome: the inclusion-minimal difference sets and the
/// models of mu witnessing one of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatohResult {
    pub minimal_diffs: BTreeSet<BTreeSet<u32>>,
    pub selected_models: BTreeSet<Assignment>,
}

fn model_masks(f: &CnfFormula, cap: u32) -> Result<Vec<u64>> {
    let mut masks = Vec::new();
    f.for_each_model_mask(cap, |m| masks.push(m))?;
    Ok(masks)
}

/// Exact Dalal revision by enumeration.
pub fn dalal_revise(inst: &RevisionInstance) -> Result<DalalResult> {
    dalal_revise_capped(inst, DEFAULT_ENUMERATION_CAP)
}

pub fn dalal_revise_capped(inst: &RevisionInstance, cap: u32) -> Result<DalalResult> {
    let n = inst.universe_size();
    let psi = model_masks(&inst.psi, cap)?;
    let mu = model_masks(&inst.mu, cap)?;
    if psi.is_empty() || mu.is_empty() {
        return Ok(DalalResult {
            delta_min: None,
            selected_models: BTreeSet::new(),
        });
    }
    let delta_min = mu
        .iter()
        .flat_map(|&m| psi.iter().map(move |&p| (m ^ p).count_ones()))
        .min()
        .expect("both non-empty");
    let selected_models = mu
        .iter()
        .filter(|&&m| psi.iter().any(|&p| (m ^ p).count_ones() == delta_min))
        .map(|&m| Assignment::from_mask(n, m))
        .collect();
    Ok(DalalResult {
        delta_min: Some(delta_min),
        selected_models,
    })
}

/// Exact Satoh revision by enumeration.
pub fn satoh_revise(inst: &RevisionInstance) -> Result<SatohResult> {
    satoh_revise_capped(inst, DEFAULT_ENUMERATION_CAP)
}

pub fn satoh_revise_capped(inst: &RevisionInstance, cap: u32) -> Result<SatohResult> {
    let n = inst.universe_size();
    let psi = model_masks(&inst.psi, cap)?;
    let mu = model_masks(&inst.mu, cap)?;
    if psi.is_empty() || mu.is_empty() {
        return Ok(SatohResult {
            minimal_diffs: BTreeSet::new(),
            selected_models: BTreeSet::new(),
        });
    }
    let mut diffs: BTreeSet<u64> = BTreeSet::new();
    for &m in &mu {
        for &p in &psi {
            diffs.insert(m ^ p);
        }
    }
    let minimal: BTreeSet<u64> = diffs
        .iter()
        .copied()
        .filter(|&d| !diffs.iter().any(|&e| e != d && e & d == e))
        .collect();
    let selected_models = mu
        .iter()
        .filter(|&&m| psi.iter().any(|&p| minimal.contains(&(m ^ p))))
        .map(|&m| Assignment::from_mask(n, m))
        .collect();
    let minimal_diffs = minimal
        .into_iter()
        .map(|d| {
            (1..=n)
                .filter(|&v| d & (1u64 << (v - 1)) != 0)
                .collect::<BTreeSet<u32>>()
        })
        .collect();
    Ok(SatohResult {
        minimal_diffs,
        selected_models,
    })
}

fn check_models_mu(inst: &RevisionInstance, m: &Assignment) -> Result<()> {
    if !inst.mu.evaluate(m)? {
        return Err(Error::contract(
            "model checking requires an assignment satisfying mu",
        ));
    }
    Ok(())
}

/// Does `m` belong to the Dalal-revised model set? Brute-force mode.
pub fn dalal_model_check(inst: &RevisionInstance, m: &Assignment) -> Result<bool> {
    check_models_mu(inst, m)?;
    let result = dalal_revise(inst)?;
    Ok(result.selected_models.contains(m))
}

/// Is the atom true in every Dalal-selected model? Vacuously true when
/// nothing is selected. Brute-force mode.
pub fn dalal_implication(inst: &RevisionInstance, x: Variable) -> Result<bool> {
    let result = dalal_revise(inst)?;
    Ok(result.selected_models.iter().all(|m| m.contains(x)))
}

/// Satoh counterparts, brute-force mode.
pub fn satoh_model_check(inst: &RevisionInstance, m: &Assignment) -> Result<bool> {
    check_models_mu(inst, m)?;
    let result = satoh_revise(inst)?;
    Ok(result.selected_models.contains(m))
}

pub fn satoh_implication(inst: &RevisionInstance, x: Variable) -> Result<bool> {
    let result = satoh_revise(inst)?;
    Ok(result.selected_models.iter().all(|m| m.contains(x)))
}

/// The combined formula for oracle-mode Dalal: mu over x_1..x_n, psi over
/// copies x_{n+i}, and difference indicators d_i = x_{2n+i} with
/// d_i <-> (x_i xor x_{n+i}).
fn dalal_encoding(inst: &RevisionInstance) -> CnfFormula {
    let n = inst.universe_size();
    let mut clauses: Vec<Clause> = inst.mu.clauses().to_vec();
    for clause in inst.psi.clauses() {
        clauses.push(
            Clause::new(
                clause
                    .literals()
                    .iter()
                    .map(|l| Literal::new(Variable::new(l.var().id() + n), l.is_positive()))
                    .collect(),
            )
            .expect("non-empty"),
        );
    }
    for i in 1..=n {
        let x = Literal::pos(i);
        let y = Literal::pos(i + n);
        let d = Literal::pos(i + 2 * n);
        clauses.push(Clause::new(vec![x.negated(), y, d]).unwrap());
        clauses.push(Clause::new(vec![x, y.negated(), d]).unwrap());
        clauses.push(Clause::new(vec![x.negated(), y.negated(), d.negated()]).unwrap());
        clauses.push(Clause::new(vec![x, y, d.negated()]).unwrap());
    }
    CnfFormula::new(3 * n, clauses).expect("variables in range")
}

/// Minimal symmetric-difference cardinality between models of psi and mu,
/// found by binary search over cardinality-bounded oracle calls on the
/// difference indicators. `None` when either formula is unsatisfiable.
pub fn dalal_delta_min_oracle(oracle: &dyn Oracle, inst: &RevisionInstance) -> Result<Option<u32>> {
    if !oracle.solve(&inst.mu, &[])?.is_sat() || !oracle.solve(&inst.psi, &[])?.is_sat() {
        return Ok(None);
    }
    let n = inst.universe_size();
    let combined = dalal_encoding(inst);
    let scope: Vec<u32> = (2 * n + 1..=3 * n).collect();
    let mut lo = 0u32;
    let mut hi = n;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let bound = CardinalityBound::at_most(mid, scope.iter().copied())?;
        if sat_with_bound_assuming(oracle, &combined, &bound, &[])?.is_sat() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Oracle-mode Dalal model checking: fixes the mu-side copy to `m` and
/// asks for a psi-model within the global minimal distance.
pub fn dalal_model_check_oracle(
    oracle: &dyn Oracle,
    inst: &RevisionInstance,
    m: &Assignment,
) -> Result<bool> {
    check_models_mu(inst, m)?;
    let delta_min = match dalal_delta_min_oracle(oracle, inst)? {
        Some(d) => d,
        None => return Ok(false),
    };
    let n = inst.universe_size();
    let combined = dalal_encoding(inst);
    let scope: Vec<u32> = (2 * n + 1..=3 * n).collect();
    let assumptions: Vec<Literal> = (1..=n)
        .map(|v| Literal::new(Variable::new(v), m.contains(Variable::new(v))))
        .collect();
    let bound = CardinalityBound::at_most(delta_min, scope)?;
    Ok(sat_with_bound_assuming(oracle, &combined, &bound, &assumptions)?.is_sat())
}

/// Oracle-mode Dalal implication of a single atom.
pub fn dalal_implication_oracle(
    oracle: &dyn Oracle,
    inst: &RevisionInstance,
    x: Variable,
) -> Result<bool> {
    let delta_min = match dalal_delta_min_oracle(oracle, inst)? {
        Some(d) => d,
        None => return Ok(true),
    };
    let n = inst.universe_size();
    let combined = dalal_encoding(inst);
    let scope: Vec<u32> = (2 * n + 1..=3 * n).collect();
    let bound = CardinalityBound::at_most(delta_min, scope)?;
    // A selected model with x false refutes the implication.
    let counterexample =
        sat_with_bound_assuming(oracle, &combined, &bound, &[Literal::new(x, false)])?;
    Ok(!counterexample.is_sat())
}

/// Polynomial test that the difference `I delta M` is inclusion-minimal,
/// for psi and mu both Krom or both Horn.
///
/// For each atom in the difference, a renamed-copy formula asks whether
/// models J of psi and N of mu exist that agree outside the difference and
/// on that atom; satisfiability of any such formula exhibits a strictly
/// smaller difference.
pub fn satoh_minimality_check_poly(
    inst: &RevisionInstance,
    i: &Assignment,
    m: &Assignment,
) -> Result<bool> {
    let krom = inst.psi.is_krom() && inst.mu.is_krom();
    let horn = inst.psi.is_horn() && inst.mu.is_horn();
    if !krom && !horn {
        return Err(Error::contract(
            "polynomial minimality check requires both formulas Krom or both Horn",
        ));
    }
    if !inst.psi.evaluate(i)? {
        return Err(Error::contract("I must satisfy psi"));
    }
    check_models_mu(inst, m)?;

    let n = inst.universe_size();
    let delta = i.delta(m)?;
    // mu stays on x_1..x_n, psi is renamed to y_i = x_{n+i}.
    let mut base: Vec<Clause> = inst.mu.clauses().to_vec();
    for clause in inst.psi.clauses() {
        base.push(
            Clause::new(
                clause
                    .literals()
                    .iter()
                    .map(|l| Literal::new(Variable::new(l.var().id() + n), l.is_positive()))
                    .collect(),
            )
            .expect("non-empty"),
        );
    }
    let biconditional = |clauses: &mut Vec<Clause>, v: u32| {
        let x = Literal::pos(v);
        let y = Literal::pos(v + n);
        clauses.push(Clause::binary(y.negated(), x));
        clauses.push(Clause::binary(y, x.negated()));
    };
    for v in 1..=n {
        if !delta.contains(&v) {
            biconditional(&mut base, v);
        }
    }

    for &j in &delta {
        let mut clauses = base.clone();
        biconditional(&mut clauses, j);
        let formula = CnfFormula::new(2 * n, clauses)?;
        let satisfiable = if krom {
            solve_2sat(&formula)?.is_sat()
        } else {
            horn_min_model(&formula)?.is_some()
        };
        if satisfiable {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::sat::Dpll;

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

    fn assignment(n: u32, vars: &[u32]) -> Assignment {
        Assignment::new(n, vars.iter().copied()).unwrap()
    }

    #[test]
    fn dalal_revise_examples() {
        // psi = x1 & x2, mu = !x1: the mu-model {x2} is at distance 1.
        let inst =
            RevisionInstance::new(formula(2, &[&[1], &[2]]), formula(2, &[&[-1]])).unwrap();
        let r = dalal_revise(&inst).unwrap();
        assert_eq!(r.delta_min, Some(1));
        assert_eq!(
            r.selected_models,
            [assignment(2, &[2])].into_iter().collect()
        );

        // psi = mu: distance zero, everything selected.
        let f = formula(2, &[&[1, 2]]);
        let inst = RevisionInstance::new(f.clone(), f.clone()).unwrap();
        let r = dalal_revise(&inst).unwrap();
        assert_eq!(r.delta_min, Some(0));
        assert_eq!(
            r.selected_models,
            f.all_models().unwrap().into_iter().collect()
        );
    }

    #[test]
    fn dalal_mc_and_implication_examples() {
        let inst =
            RevisionInstance::new(formula(2, &[&[1], &[2]]), formula(2, &[&[-1]])).unwrap();
        assert!(dalal_model_check(&inst, &assignment(2, &[2])).unwrap());
        assert!(dalal_implication(&inst, Variable::new(2)).unwrap());
        assert!(!dalal_implication(&inst, Variable::new(1)).unwrap());
        // Model checking demands a model of mu.
        assert!(dalal_model_check(&inst, &assignment(2, &[1])).is_err());

        // Unsatisfiable mu: implication holds vacuously.
        let inst =
            RevisionInstance::new(formula(1, &[&[1]]), formula(1, &[&[1], &[-1]])).unwrap();
        assert!(dalal_implication(&inst, Variable::new(1)).unwrap());
    }

    #[test]
    fn satoh_revise_examples() {
        // psi = x1 & x2, mu = (!x1 | !x2).
        let inst = RevisionInstance::new(formula(2, &[&[1], &[2]]), formula(2, &[&[-1, -2]]))
            .unwrap();
        let r = satoh_revise(&inst).unwrap();
        let want_diffs: BTreeSet<BTreeSet<u32>> = [
            [1u32].into_iter().collect(),
            [2u32].into_iter().collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(r.minimal_diffs, want_diffs);
        assert_eq!(
            r.selected_models,
            [assignment(2, &[1]), assignment(2, &[2])]
                .into_iter()
                .collect()
        );

        let f = formula(2, &[&[1, 2]]);
        let inst = RevisionInstance::new(f.clone(), f.clone()).unwrap();
        let r = satoh_revise(&inst).unwrap();
        assert_eq!(r.minimal_diffs, [BTreeSet::new()].into_iter().collect());
        assert_eq!(
            r.selected_models,
            f.all_models().unwrap().into_iter().collect()
        );
    }

    #[test]
    fn satoh_minimality_examples() {
        let inst = RevisionInstance::new(formula(2, &[&[1], &[2]]), formula(2, &[&[-1, -2]]))
            .unwrap();
        let i = assignment(2, &[1, 2]);
        assert!(satoh_minimality_check_poly(&inst, &i, &assignment(2, &[2])).unwrap());
        assert!(!satoh_minimality_check_poly(&inst, &i, &assignment(2, &[])).unwrap());

        // Identical formulas admit the empty difference, vacuously minimal.
        let f = formula(2, &[&[1, 2]]);
        let inst = RevisionInstance::new(f.clone(), f).unwrap();
        let m = assignment(2, &[1]);
        assert!(satoh_minimality_check_poly(&inst, &m, &m).unwrap());
    }

    #[test]
    fn satoh_minimality_rejects_mixed_classes() {
        // psi is neither Krom-with-mu nor Horn-with-mu.
        let psi = formula(3, &[&[1, 2, 3]]);
        let mu = formula(3, &[&[1, 2]]);
        let inst = RevisionInstance::new(psi, mu).unwrap();
        let i = assignment(3, &[1, 2, 3]);
        let m = assignment(3, &[1]);
        assert!(satoh_minimality_check_poly(&inst, &i, &m).is_err());
    }

    #[test]
    fn mu_entails_psi_gives_zero_delta() {
        let mut rng = gen::rng(0xE117);
        let mut seen = 0;
        for round in 0..300u32 {
            let n = 2 + round % 5;
            let psi = gen::random_cnf(n, round % 4, 3, &mut rng);
            let mu = gen::random_cnf(n, 2 + round % 5, 3, &mut rng);
            let mu_models = mu.all_models().unwrap();
            let entails = !mu_models.is_empty()
                && mu_models.iter().all(|m| psi.evaluate(m).unwrap());
            if !entails {
                continue;
            }
            seen += 1;
            let inst = RevisionInstance::new(psi, mu).unwrap();
            let r = dalal_revise(&inst).unwrap();
            assert_eq!(r.delta_min, Some(0));
            assert_eq!(r.selected_models, mu_models.into_iter().collect());
        }
        assert!(seen > 10, "corpus too thin: {seen}");
    }

    #[test]
    fn dalal_selected_diffs_contain_a_satoh_minimal_diff() {
        let mut rng = gen::rng(0x5A70);
        for round in 0..150u32 {
            let n = 2 + round % 7;
            let psi = gen::random_cnf(n, round % 6, 3, &mut rng);
            let mu = gen::random_cnf(n, round % 7, 3, &mut rng);
            let inst = RevisionInstance::new(psi.clone(), mu).unwrap();
            let dalal = dalal_revise(&inst).unwrap();
            let satoh = satoh_revise(&inst).unwrap();
            let psi_models = psi.all_models().unwrap();
            for m in &dalal.selected_models {
                let attaining = psi_models
                    .iter()
                    .map(|p| m.delta(p).unwrap())
                    .min_by_key(|d| d.len())
                    .expect("psi satisfiable when something is selected");
                assert!(
                    satoh
                        .minimal_diffs
                        .iter()
                        .any(|d| d.is_subset(&attaining)),
                    "dalal-selected diff has no satoh-minimal subset"
                );
            }
        }
    }

    #[test]
    fn oracle_mode_matches_brute_force() {
        let mut rng = gen::rng(0x0D31);
        for round in 0..120u32 {
            let n = 1 + round % 6;
            let psi = gen::random_cnf(n, round % 5, 3, &mut rng);
            let mu = gen::random_cnf(n, round % 6, 3, &mut rng);
            let inst = RevisionInstance::new(psi, mu.clone()).unwrap();
            let brute = dalal_revise(&inst).unwrap();
            assert_eq!(
                dalal_delta_min_oracle(&Dpll, &inst).unwrap(),
                brute.delta_min
            );
            for m in mu.all_models().unwrap() {
                assert_eq!(
                    dalal_model_check_oracle(&Dpll, &inst, &m).unwrap(),
                    brute.selected_models.contains(&m)
                );
            }
            for v in 1..=n {
                assert_eq!(
                    dalal_implication_oracle(&Dpll, &inst, Variable::new(v)).unwrap(),
                    brute.selected_models.iter().all(|m| m.contains(Variable::new(v)))
                );
            }
        }
    }

    #[test]
    fn satoh_poly_check_matches_brute_force_minimality() {
        let mut rng = gen::rng(0x5A70_0110);
        let mut tested = 0;
        'outer: for round in 0..400u32 {
            let n = 2 + round % 6;
            let (psi, mu) = if round % 2 == 0 {
                (
                    gen::random_krom(n, 2 + round % 4, &mut rng),
                    gen::random_krom(n, 2 + round % 5, &mut rng),
                )
            } else {
                (
                    gen::random_horn(n, 2 + round % 4, 3, &mut rng),
                    gen::random_horn(n, 2 + round % 5, 3, &mut rng),
                )
            };
            let inst = RevisionInstance::new(psi.clone(), mu.clone()).unwrap();
            let psi_models = psi.all_models().unwrap();
            let mu_models = mu.all_models().unwrap();
            if psi_models.is_empty() || mu_models.is_empty() {
                continue 'outer;
            }
            let satoh = satoh_revise(&inst).unwrap();
            for i in psi_models.iter().take(4) {
                for m in mu_models.iter().take(4) {
                    let delta: BTreeSet<u32> = i.delta(m).unwrap();
                    let brute_minimal = satoh.minimal_diffs.contains(&delta);
                    let poly = satoh_minimality_check_poly(&inst, i, m).unwrap();
                    assert_eq!(poly, brute_minimal, "psi {psi:?} mu {mu:?} I {i:?} M {m:?}");
                    tested += 1;
                }
            }
        }
        assert!(tested > 200, "corpus too thin: {tested}");
    }
}
