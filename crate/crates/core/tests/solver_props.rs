//! Cross-validation of the decision procedures against exhaustive model
//! enumeration on seeded corpora.

use cardsat::gen;
use cardsat::logic::{Assignment, CnfFormula, DEFAULT_ENUMERATION_CAP};
use cardsat::sat::{horn_min_model, sat_with_bound, solve_2sat, CardinalityBound, Dpll, Oracle};

use proptest::prelude::*;

fn models(f: &CnfFormula) -> Vec<Assignment> {
    f.all_models().unwrap()
}

#[test]
fn dpll_agrees_with_enumeration_on_random_cnf() {
    let mut rng = gen::rng(0xD911);
    for round in 0..1500 {
        let n = 1 + round % 9;
        let m = (round % 14) as u32;
        let f = gen::random_cnf(n as u32, m, 4, &mut rng);
        let expected_sat = !models(&f).is_empty();
        let got = Dpll.solve(&f, &[]).unwrap();
        assert_eq!(got.is_sat(), expected_sat, "formula {f:?}");
        if let Some(w) = got.witness() {
            assert!(f.evaluate(w).unwrap(), "bogus witness for {f:?}");
        }
    }
}

#[test]
fn twosat_agrees_with_dpll_on_random_krom() {
    let mut rng = gen::rng(0x25A7);
    for round in 0..1500 {
        let n = 1 + round % 10;
        let m = (round % 16) as u32;
        let f = gen::random_krom(n as u32, m, &mut rng);
        let fast = solve_2sat(&f).unwrap();
        let slow = Dpll.solve(&f, &[]).unwrap();
        assert_eq!(fast.is_sat(), slow.is_sat(), "formula {f:?}");
        if let Some(w) = fast.witness() {
            assert!(f.evaluate(w).unwrap());
        }
    }
}

#[test]
fn horn_min_model_is_a_model_and_subset_of_all_models() {
    let mut rng = gen::rng(0x0812);
    for round in 0..800 {
        let n = 1 + round % 8;
        let m = (round % 12) as u32;
        let f = gen::random_horn(n as u32, m, 3, &mut rng);
        let all = models(&f);
        match horn_min_model(&f).unwrap() {
            None => assert!(all.is_empty(), "formula {f:?}"),
            Some(min) => {
                assert!(f.evaluate(&min).unwrap(), "formula {f:?}");
                for m in &all {
                    assert!(min.is_subset_of(m), "formula {f:?} model {m:?}");
                }
            }
        }
    }
}

#[test]
fn bounded_sat_agrees_with_enumeration_on_random_cnf() {
    let mut rng = gen::rng(0xB0B);
    for round in 0..400 {
        let n = 1 + (round % 7) as u32;
        let m = (round % 10) as u32;
        let f = gen::random_cnf(n, m, 3, &mut rng);
        let all = models(&f);
        for k in 0..=n {
            let min_ok = all.iter().any(|a| a.cardinality() <= k);
            let max_ok = all.iter().any(|a| a.cardinality() >= k);
            let bound = CardinalityBound::at_most(k, 1..=n).unwrap();
            assert_eq!(
                sat_with_bound(&Dpll, &f, &bound).unwrap().is_sat(),
                min_ok,
                "at-most {k} on {f:?}"
            );
            let bound = CardinalityBound::at_least(k, 1..=n).unwrap();
            assert_eq!(
                sat_with_bound(&Dpll, &f, &bound).unwrap().is_sat(),
                max_ok,
                "at-least {k} on {f:?}"
            );
        }
    }
}

#[test]
fn to_cnf_preserves_model_sets_of_random_constraint_formulas() {
    use cardsat::logic::{ConstraintFormula, Variable};
    use rand::Rng;
    let mut rng = gen::rng(0x70C0);
    for round in 0..300u32 {
        let n = 1 + round % 10;
        let mut cf = ConstraintFormula::new(n);
        let rel_count = 1 + rng.gen_range(0..3);
        for r in 0..rel_count {
            let arity = rng.gen_range(1..=3u32);
            cf.add_relation(&format!("R{r}"), gen::random_relation(arity, &mut rng))
                .unwrap();
        }
        for _ in 0..rng.gen_range(0..=6) {
            let rel = rng.gen_range(0..rel_count);
            let arity = cf.relation(rel).arity();
            let vars = (0..arity)
                .map(|_| Variable::new(rng.gen_range(1..=n)))
                .collect();
            cf.add_application(rel, vars).unwrap();
        }
        let cnf = cf.to_cnf();
        for mask in 0u64..(1 << n) {
            let a = Assignment::from_mask(n, mask);
            assert_eq!(
                cf.evaluate(&a).unwrap(),
                cnf.evaluate(&a).unwrap(),
                "constraint formula {cf:?}"
            );
        }
    }
}

proptest! {
    /// Membership in the all_models output coincides with evaluate, for
    /// every assignment, on arbitrary small formulas.
    #[test]
    fn all_models_matches_evaluate(seed in any::<u64>(), n in 1u32..7, m in 0u32..10) {
        let mut rng = gen::rng(seed);
        let f = gen::random_cnf(n, m, 3, &mut rng);
        let set: std::collections::BTreeSet<Assignment> = models(&f).into_iter().collect();
        for mask in 0u64..(1 << n) {
            let a = Assignment::from_mask(n, mask);
            prop_assert_eq!(f.evaluate(&a).unwrap(), set.contains(&a));
        }
        prop_assert!(n <= DEFAULT_ENUMERATION_CAP);
    }

    /// Delta laws on random assignment pairs.
    #[test]
    fn delta_laws(n in 1u32..12, xs in prop::collection::btree_set(1u32..12, 0..8), ys in prop::collection::btree_set(1u32..12, 0..8)) {
        let xs: std::collections::BTreeSet<u32> = xs.into_iter().filter(|&v| v <= n).collect();
        let ys: std::collections::BTreeSet<u32> = ys.into_iter().filter(|&v| v <= n).collect();
        let a = Assignment::new(n, xs.iter().copied()).unwrap();
        let b = Assignment::new(n, ys.iter().copied()).unwrap();
        prop_assert_eq!(a.delta(&b).unwrap(), b.delta(&a).unwrap());
        prop_assert_eq!(a.delta_size(&a).unwrap(), 0);
        let inter = xs.intersection(&ys).count() as u32;
        prop_assert_eq!(
            a.delta_size(&b).unwrap(),
            a.cardinality() + b.cardinality() - 2 * inter
        );
    }
}
