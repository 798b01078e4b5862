//! Seeded random instance generation for the cross-validation suites.
//!
//! Positive-Krom formulas are sampled as random graphs G(n, p) mapped to
//! clauses; 3-CNF at fixed clause/variable ratios; everything is driven by
//! an explicit ChaCha stream so corpora regenerate byte-identically from a
//! recorded seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::logic::{
    BooleanRelation, Clause, CnfFormula, ConstraintFormula, Graph, Literal, Variable,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn literal(var: u32, positive: bool) -> Literal {
    Literal::new(Variable::new(var), positive)
}

/// A clause over `width` distinct variables with random polarities.
pub fn random_clause<R: Rng>(n: u32, width: u32, rng: &mut R) -> Clause {
    let width = width.min(n).max(1);
    let mut vars: Vec<u32> = (1..=n).collect();
    vars.shuffle(rng);
    Clause::new(
        vars[..width as usize]
            .iter()
            .map(|&v| literal(v, rng.gen_bool(0.5)))
            .collect(),
    )
    .expect("non-empty")
}

/// CNF with m clauses, widths drawn from 1..=max_width.
pub fn random_cnf<R: Rng>(n: u32, m: u32, max_width: u32, rng: &mut R) -> CnfFormula {
    let clauses = (0..m)
        .map(|_| {
            let w = rng.gen_range(1..=max_width.max(1));
            random_clause(n, w, rng)
        })
        .collect();
    CnfFormula::new(n, clauses).expect("vars in range")
}

/// Krom formula: mostly binary clauses, occasionally units.
pub fn random_krom<R: Rng>(n: u32, m: u32, rng: &mut R) -> CnfFormula {
    let clauses = (0..m)
        .map(|_| {
            let w = if n >= 2 && rng.gen_bool(0.85) { 2 } else { 1 };
            random_clause(n, w, rng)
        })
        .collect();
    CnfFormula::new(n, clauses).expect("vars in range")
}

/// Horn formula: clauses of the given maximum width with at most one
/// positive literal each.
pub fn random_horn<R: Rng>(n: u32, m: u32, max_width: u32, rng: &mut R) -> CnfFormula {
    let clauses = (0..m)
        .map(|_| {
            let w = rng.gen_range(1..=max_width.max(1)).min(n).max(1);
            let mut vars: Vec<u32> = (1..=n).collect();
            vars.shuffle(rng);
            let positive_slot = if rng.gen_bool(0.6) {
                Some(rng.gen_range(0..w))
            } else {
                None
            };
            Clause::new(
                vars[..w as usize]
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| literal(v, positive_slot == Some(i as u32)))
                    .collect(),
            )
            .expect("non-empty")
        })
        .collect();
    CnfFormula::new(n, clauses).expect("vars in range")
}

/// 3-CNF with m = round(ratio * n) clauses over distinct variables.
pub fn random_3cnf<R: Rng>(n: u32, ratio: f64, rng: &mut R) -> CnfFormula {
    let m = (ratio * n as f64).round() as u32;
    let clauses = (0..m.max(1))
        .map(|_| random_clause(n, 3, rng))
        .collect();
    CnfFormula::new(n, clauses).expect("vars in range")
}

/// G(n, p) random graph.
pub fn random_graph<R: Rng>(n: u32, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for u in 1..=n {
        for v in (u + 1)..=n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("valid edge");
            }
        }
    }
    g
}

/// Positive Krom formula from a G(n, p) edge set: one clause (x_u | x_v)
/// per edge.
pub fn random_positive_krom<R: Rng>(n: u32, p: f64, rng: &mut R) -> CnfFormula {
    let g = random_graph(n, p, rng);
    let clauses = g
        .edges()
        .iter()
        .map(|&(u, v)| Clause::binary(literal(u, true), literal(v, true)))
        .collect();
    CnfFormula::new(n, clauses).expect("vars in range")
}

/// Negative Krom formula from a G(n, p) edge set.
pub fn random_negative_krom<R: Rng>(n: u32, p: f64, rng: &mut R) -> CnfFormula {
    let g = random_graph(n, p, rng);
    let clauses = g
        .edges()
        .iter()
        .map(|&(u, v)| Clause::binary(literal(u, false), literal(v, false)))
        .collect();
    CnfFormula::new(n, clauses).expect("vars in range")
}

/// Width-2 affine constraint formula: random unary, equality, and
/// disequality applications.
pub fn random_width2affine<R: Rng>(n: u32, m: u32, rng: &mut R) -> ConstraintFormula {
    let mut cf = ConstraintFormula::new(n);
    let t = cf.add_relation("T", BooleanRelation::constant(true)).unwrap();
    let f = cf.add_relation("F", BooleanRelation::constant(false)).unwrap();
    let eq = cf.add_relation("EQ", BooleanRelation::equality()).unwrap();
    let neq = cf
        .add_relation("NEQ", BooleanRelation::disequality())
        .unwrap();
    for _ in 0..m {
        let a = Variable::new(rng.gen_range(1..=n));
        let b = Variable::new(rng.gen_range(1..=n));
        match rng.gen_range(0..10) {
            0 => cf.add_application(t, vec![a]).unwrap(),
            1 => cf.add_application(f, vec![a]).unwrap(),
            2..=5 => cf.add_application(eq, vec![a, b]).unwrap(),
            _ => cf.add_application(neq, vec![a, b]).unwrap(),
        }
    }
    cf
}

/// Pure OR2 constraint formula over a G(n, p) edge set.
pub fn random_or2_formula<R: Rng>(n: u32, p: f64, rng: &mut R) -> ConstraintFormula {
    let g = random_graph(n, p, rng);
    let mut cf = ConstraintFormula::new(n);
    let or2 = cf.add_relation("OR2", BooleanRelation::or2()).unwrap();
    for &(u, v) in g.edges() {
        cf.add_application(or2, vec![Variable::new(u), Variable::new(v)])
            .unwrap();
    }
    cf
}

/// A non-empty random relation of the given arity.
pub fn random_relation<R: Rng>(arity: u32, rng: &mut R) -> BooleanRelation {
    loop {
        let tuples: Vec<Vec<bool>> = (0u64..(1 << arity))
            .filter(|_| rng.gen_bool(0.5))
            .map(|idx| (0..arity).map(|i| idx & (1 << i) != 0).collect())
            .collect();
        if !tuples.is_empty() {
            return BooleanRelation::new(arity, tuples).expect("valid arity");
        }
    }
}
