//! The cross-validation harness: oracle-equivalence and
//! reduction-preservation suites over seeded corpora, runnable from tests
//! and from the command line. Suites fan independent instances across
//! worker threads and join deterministically.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::abduction::{brute_force_relevance, leq_relevance};
use crate::clones::{
    self, brute_force_cardmin_constraints, classify_language, closure_report, is_polymorphism,
    BoolFun, VerdictClass,
};
use crate::error::Result;
use crate::gen;
use crate::logic::{
    Assignment, BooleanRelation, Clause, CnfFormula, Literal, Variable, VariableOrder,
};
use crate::optsat::{
    brute_force_card_max_capped, brute_force_card_min_capped, brute_force_log_lex, card_max_sat,
    card_min_sat, width2affine_card_min_sat, LogLexAnswer, OptQuery, OracleUsage,
};
use crate::reductions::{
    drop_bound, find_maximum_is, graph_to_negative_krom, in_some_maximum_is,
    max_independent_set_size, negkrom_cardmax_to_poskrom_cardmin, reduce_cardmax3cnf_to_maxindset,
    reduce_cardmin_to_abduction, reduce_cardmin_to_dalal, reduce_loglex_to_cardmax,
    reduce_or2_to_r4p, reduce_3sat_to_satoh_mc, s01_witness_reduction, CspQuery, IndSetInstance,
    TriangleLayout,
};
use crate::revision::{
    dalal_implication, dalal_implication_oracle, dalal_model_check, dalal_model_check_oracle,
    satoh_implication, satoh_model_check, satoh_minimality_check_poly, satoh_revise,
    RevisionInstance,
};
use crate::sat::{horn_min_model, Dpll};

/// Corpus sizes and the master seed. Defaults match the acceptance scale.
#[derive(Clone, Debug)]
pub struct XcheckConfig {
    pub seed: u64,
    pub exhaustive_max_vars: u32,
    pub exhaustive_max_clauses: u32,
    pub random_krom_instances: u32,
    pub random_krom_max_vars: u32,
    pub horn_instances: u32,
    pub horn_max_vars: u32,
    pub w2a_instances: u32,
    pub w2a_max_vars: u32,
    pub reduction_instances: u32,
    pub satoh_check_instances: u32,
    pub satoh_check_max_vars: u32,
    pub walk_instances: u32,
    pub walk_max_vars: u32,
}

impl Default for XcheckConfig {
    fn default() -> Self {
        XcheckConfig {
            seed: 20240 + 1,
            exhaustive_max_vars: 5,
            exhaustive_max_clauses: 6,
            random_krom_instances: 500,
            random_krom_max_vars: 16,
            horn_instances: 500,
            horn_max_vars: 12,
            w2a_instances: 500,
            w2a_max_vars: 12,
            reduction_instances: 200,
            satoh_check_instances: 500,
            satoh_check_max_vars: 10,
            walk_instances: 100,
            walk_max_vars: 6,
        }
    }
}

impl XcheckConfig {
    /// A scaled-down configuration for quick runs.
    pub fn quick(seed: u64) -> XcheckConfig {
        XcheckConfig {
            seed,
            exhaustive_max_vars: 3,
            exhaustive_max_clauses: 4,
            random_krom_instances: 60,
            random_krom_max_vars: 10,
            horn_instances: 60,
            horn_max_vars: 8,
            w2a_instances: 60,
            w2a_max_vars: 8,
            reduction_instances: 40,
            satoh_check_instances: 60,
            satoh_check_max_vars: 7,
            walk_instances: 20,
            walk_max_vars: 5,
        }
    }
}

/// Deliberate defects for validating that the harness catches them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    None,
    /// Flip the polarity of the first literal of the first clause of the
    /// revision gadget's psi output.
    FlipDalalGadgetClause,
}

/// Outcome of one suite: instances checked and mismatches found.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: u64,
    pub mismatches: u64,
    pub wall: Duration,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

struct Tally {
    checked: u64,
    mismatches: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            checked: 0,
            mismatches: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.mismatches += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.mismatches += other.mismatches;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        self
    }

    fn finish(self, name: &'static str, started: Instant) -> SuiteReport {
        SuiteReport {
            name,
            checked: self.checked,
            mismatches: self.mismatches,
            wall: started.elapsed(),
            first_failure: self.first_failure,
        }
    }
}

/// Runs every suite and returns their reports in a fixed order.
pub fn run_all(config: &XcheckConfig, fault: Fault) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        suite_cardopt_exhaustive(config)?,
        suite_cardopt_random(config)?,
        suite_horn_minimal_model(config)?,
        suite_width2affine(config)?,
        suite_reduction_loglex(config)?,
        suite_reduction_triangle(config)?,
        suite_reduction_drop_bound(config)?,
        suite_reduction_graph_to_krom(config)?,
        suite_reduction_duplication(config)?,
        suite_reduction_dalal(config, fault)?,
        suite_reduction_satoh(config)?,
        suite_reduction_abduction(config)?,
        suite_reduction_r4p(config)?,
        suite_reduction_s01(config)?,
        suite_revision_gadget_classes(config, fault)?,
        suite_satoh_poly_check(config)?,
        suite_classifier(config)?,
        suite_theorem_walk(config)?,
    ])
}

// ---------------------------------------------------------------------
// Suite 1: oracle-guided optimization vs brute force.

/// All normalized Krom clauses over n variables: units first, then the
/// binary clauses over distinct variable pairs, in a fixed order.
fn krom_clause_pool(n: u32) -> Vec<Vec<Literal>> {
    let mut pool = Vec::new();
    for v in 1..=n {
        pool.push(vec![Literal::pos(v)]);
        pool.push(vec![Literal::neg(v)]);
    }
    for u in 1..=n {
        for v in (u + 1)..=n {
            for polarity in 0..4u32 {
                pool.push(vec![
                    Literal::new(Variable::new(u), polarity & 1 == 0),
                    Literal::new(Variable::new(v), polarity & 2 == 0),
                ]);
            }
        }
    }
    pool
}

/// Per-permutation clause-id relabeling tables for the pool.
fn pool_permutation_tables(n: u32, pool: &[Vec<Literal>]) -> Vec<Vec<u16>> {
    let index: std::collections::HashMap<Vec<(u32, bool)>, u16> = pool
        .iter()
        .enumerate()
        .map(|(i, c)| (clause_key(c), i as u16))
        .collect();
    let mut perms: Vec<Vec<u32>> = Vec::new();
    let mut current: Vec<u32> = (1..=n).collect();
    permutations(&mut current, 0, &mut perms);
    perms
        .into_iter()
        .map(|perm| {
            pool.iter()
                .map(|clause| {
                    let mapped: Vec<Literal> = clause
                        .iter()
                        .map(|l| {
                            Literal::new(
                                Variable::new(perm[(l.var().id() - 1) as usize]),
                                l.is_positive(),
                            )
                        })
                        .collect();
                    index[&clause_key(&mapped)]
                })
                .collect()
        })
        .collect()
}

fn clause_key(lits: &[Literal]) -> Vec<(u32, bool)> {
    let mut key: Vec<(u32, bool)> = lits.iter().map(|l| (l.var().id(), l.is_positive())).collect();
    key.sort_unstable();
    key
}

fn permutations(current: &mut Vec<u32>, at: usize, out: &mut Vec<Vec<u32>>) {
    if at == current.len() {
        out.push(current.clone());
        return;
    }
    for i in at..current.len() {
        current.swap(at, i);
        permutations(current, at + 1, out);
        current.swap(at, i);
    }
}

/// True iff the sorted clause-id subset is the lexicographically smallest
/// member of its orbit under variable renaming.
fn is_canonical(subset: &[u16], tables: &[Vec<u16>]) -> bool {
    let mut image = [0u16; 16];
    let k = subset.len();
    debug_assert!(k <= image.len());
    for table in &tables[1..] {
        for (i, &c) in subset.iter().enumerate() {
            image[i] = table[c as usize];
        }
        image[..k].sort_unstable();
        if &image[..k] < subset {
            return false;
        }
    }
    true
}

/// Brute-force scan producing, in one pass, the optimum cardinalities and
/// the union of optimal models for both directions.
struct OptScan {
    min: Option<(u32, u64)>,
    max: Option<(u32, u64)>,
}

fn opt_scan(masks: &[(u64, u64)], n: u32) -> OptScan {
    let mut min: Option<(u32, u64)> = None;
    let mut max: Option<(u32, u64)> = None;
    for mask in 0u64..(1u64 << n) {
        let ok = masks
            .iter()
            .all(|&(pos, neg)| (mask & pos) != 0 || (!mask & neg) != 0);
        if !ok {
            continue;
        }
        let card = mask.count_ones();
        match &mut min {
            Some((best, union)) => {
                if card < *best {
                    *best = card;
                    *union = mask;
                } else if card == *best {
                    *union |= mask;
                }
            }
            None => min = Some((card, mask)),
        }
        match &mut max {
            Some((best, union)) => {
                if card > *best {
                    *best = card;
                    *union = mask;
                } else if card == *best {
                    *union |= mask;
                }
            }
            None => max = Some((card, mask)),
        }
    }
    OptScan { min, max }
}

/// Exhaustive corpus: every Krom clause-set formula over up to
/// `exhaustive_max_vars` variables with up to `exhaustive_max_clauses`
/// clauses, deduplicated up to variable renaming, with every atom queried
/// in both directions. The oracle-call budget is asserted throughout.
pub fn suite_cardopt_exhaustive(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut tally = Tally::new();
    for n in 1..=config.exhaustive_max_vars {
        let pool = krom_clause_pool(n);
        let tables = pool_permutation_tables(n, &pool);
        let max_k = config.exhaustive_max_clauses.min(pool.len() as u32);
        let budget = OracleUsage::bounded_call_budget(n);

        let per_first: Vec<Tally> = (0..=pool.len())
            .into_par_iter()
            .map(|first| {
                let mut local = Tally::new();
                // first == pool.len() stands for the empty formula.
                if first == pool.len() {
                    check_formula_against_scan(n, &pool, &[], budget, &mut local);
                    return local;
                }
                let mut subset: Vec<u16> = vec![first as u16];
                enumerate_extensions(
                    &pool,
                    &tables,
                    &mut subset,
                    max_k as usize,
                    n,
                    budget,
                    &mut local,
                );
                local
            })
            .collect();
        tally = per_first.into_iter().fold(tally, Tally::merge);
    }
    Ok(tally.finish("cardopt-exhaustive-krom", started))
}

fn enumerate_extensions(
    pool: &[Vec<Literal>],
    tables: &[Vec<u16>],
    subset: &mut Vec<u16>,
    max_k: usize,
    n: u32,
    budget: u32,
    tally: &mut Tally,
) {
    if is_canonical(subset, tables) {
        check_formula_against_scan(n, pool, subset, budget, tally);
    }
    if subset.len() == max_k {
        return;
    }
    let last = *subset.last().expect("non-empty") as usize;
    for next in (last + 1)..pool.len() {
        subset.push(next as u16);
        enumerate_extensions(pool, tables, subset, max_k, n, budget, tally);
        subset.pop();
    }
}

fn check_formula_against_scan(
    n: u32,
    pool: &[Vec<Literal>],
    subset: &[u16],
    budget: u32,
    tally: &mut Tally,
) {
    let clauses: Vec<Clause> = subset
        .iter()
        .map(|&c| Clause::new(pool[c as usize].clone()).expect("non-empty"))
        .collect();
    let formula = CnfFormula::new(n, clauses).expect("in range");
    let scan = opt_scan(&formula.clause_masks(), n);
    for v in 1..=n {
        let q = OptQuery::new(formula.clone(), Variable::new(v)).expect("in range");
        let bit = 1u64 << (v - 1);

        let (got, usage) = card_min_sat(&Dpll, &q).expect("solver");
        let want_answer = scan.min.is_some_and(|(_, union)| union & bit != 0);
        let want_optimum = scan.min.map(|(c, _)| c);
        let ok = got.answer == want_answer
            && got.optimum == want_optimum
            && usage.bounded_calls <= budget;
        tally.record(ok, || {
            format!("cardmin mismatch on {formula:?} query x{v}: got {got:?}")
        });

        let (got, usage) = card_max_sat(&Dpll, &q).expect("solver");
        let want_answer = scan.max.is_some_and(|(_, union)| union & bit != 0);
        let want_optimum = scan.max.map(|(c, _)| c);
        let ok = got.answer == want_answer
            && got.optimum == want_optimum
            && usage.bounded_calls <= budget;
        tally.record(ok, || {
            format!("cardmax mismatch on {formula:?} query x{v}: got {got:?}")
        });
    }
}

/// 500 random Krom instances at up to 16 variables, one queried atom each.
pub fn suite_cardopt_random(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x0161);
    let instances: Vec<(CnfFormula, u32)> = (0..config.random_krom_instances)
        .map(|_| {
            let n = rng.gen_range(1..=config.random_krom_max_vars);
            let m = rng.gen_range(0..=2 * n);
            let f = gen::random_krom(n, m, &mut rng);
            let q = rng.gen_range(1..=n);
            (f, q)
        })
        .collect();
    let tally = instances
        .par_iter()
        .map(|(f, v)| {
            let mut local = Tally::new();
            let q = OptQuery::new(f.clone(), Variable::new(*v)).expect("in range");
            let budget = OracleUsage::bounded_call_budget(f.universe_size());

            let brute = brute_force_card_min_capped(&q, 16).expect("cap");
            let (got, usage) = card_min_sat(&Dpll, &q).expect("solver");
            local.record(
                got.answer == brute.answer
                    && got.optimum == brute.optimum
                    && usage.bounded_calls <= budget,
                || format!("cardmin mismatch on {f:?} query x{v}"),
            );

            let brute = brute_force_card_max_capped(&q, 16).expect("cap");
            let (got, usage) = card_max_sat(&Dpll, &q).expect("solver");
            local.record(
                got.answer == brute.answer
                    && got.optimum == brute.optimum
                    && usage.bounded_calls <= budget,
                || format!("cardmax mismatch on {f:?} query x{v}"),
            );
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("cardopt-random-krom", started))
}

// ---------------------------------------------------------------------
// Suite 2: polynomial special cases.

pub fn suite_horn_minimal_model(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x4042);
    let instances: Vec<CnfFormula> = (0..config.horn_instances)
        .map(|_| {
            let n = rng.gen_range(1..=config.horn_max_vars);
            let m = rng.gen_range(0..=2 * n);
            gen::random_horn(n, m, 3, &mut rng)
        })
        .collect();
    let tally = instances
        .par_iter()
        .map(|f| {
            let mut local = Tally::new();
            let models = f.all_models().expect("within cap");
            let got = horn_min_model(f).expect("horn");
            let ok = match got {
                None => models.is_empty(),
                Some(min) => {
                    !models.is_empty()
                        && models.contains(&min)
                        && models.iter().all(|m| min.is_subset_of(m))
                }
            };
            local.record(ok, || format!("horn minimal model mismatch on {f:?}"));
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("horn-minimal-model", started))
}

pub fn suite_width2affine(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x2AFF);
    let instances: Vec<(crate::logic::ConstraintFormula, u32)> = (0..config.w2a_instances)
        .map(|_| {
            let n = rng.gen_range(1..=config.w2a_max_vars);
            let m = rng.gen_range(0..=2 * n);
            let cf = gen::random_width2affine(n, m, &mut rng);
            let q = rng.gen_range(1..=n);
            (cf, q)
        })
        .collect();
    let tally = instances
        .par_iter()
        .map(|(cf, v)| {
            let mut local = Tally::new();
            let fast = width2affine_card_min_sat(cf, Variable::new(*v)).expect("w2a");
            let brute = brute_force_cardmin_constraints(cf, Variable::new(*v)).expect("cap");
            local.record(
                fast.answer == brute.answer && fast.optimum == brute.optimum,
                || format!("width-2 affine mismatch on {cf:?} query x{v}"),
            );
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("width2affine-cluster", started))
}

// ---------------------------------------------------------------------
// Suite 3: the nine reductions.

pub fn suite_reduction_loglex(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x0071);
    let mut tally = Tally::new();
    for _ in 0..config.reduction_instances {
        let n = rng.gen_range(1..=5u32);
        let m = rng.gen_range(0..=8u32);
        let f = gen::random_cnf(n, m, 3, &mut rng);
        let len = rng.gen_range(1..=n.min(4));
        let mut ids: Vec<u32> = (1..=n).collect();
        ids.shuffle(&mut rng);
        ids.truncate(len as usize);
        let prefix = VariableOrder::from_ids(&ids).expect("distinct");

        let source = brute_force_log_lex(&f, &prefix, 25).expect("cap");
        let out = reduce_loglex_to_cardmax(&f, &prefix).expect("guarded");
        let target = brute_force_card_max_capped(&out.target, 25).expect("cap");
        let source_answer = match source {
            LogLexAnswer::Unsat => false,
            LogLexAnswer::Prefix { answer, .. } => answer,
        };
        tally.record(source_answer == target.answer, || {
            format!("loglex gadget mismatch on {f:?} prefix {ids:?}")
        });
    }
    Ok(tally.finish("reduction-loglex-to-cardmax", started))
}

pub fn suite_reduction_triangle(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x7219);
    let mut instances = Vec::new();
    while instances.len() < config.reduction_instances as usize {
        let n = rng.gen_range(1..=4u32);
        let m = rng.gen_range(1..=3u32);
        let f = gen::random_cnf(n, m, 3, &mut rng);
        let v = rng.gen_range(1..=n);
        let q = match OptQuery::new(f, Variable::new(v)) {
            Ok(q) => q,
            Err(_) => continue,
        };
        if reduce_cardmax3cnf_to_maxindset(&q).is_ok() {
            instances.push(q);
        }
    }
    let tally = instances
        .par_iter()
        .map(|q| {
            let mut local = Tally::new();
            let out = reduce_cardmax3cnf_to_maxindset(q).expect("prechecked");
            let inst = &out.target;
            let source = brute_force_card_max_capped(q, 25).expect("cap");
            let alpha = max_independent_set_size(inst.graph());
            let k = inst.bound().expect("bounded");
            let target_answer =
                alpha >= k && in_some_maximum_is(inst.graph(), inst.query_vertex());
            local.record(source.answer == target_answer, || {
                format!("triangle gadget mismatch on {:?}", q.formula())
            });
            // A satisfiable source forces independence number at least K.
            if source.optimum.is_some() {
                local.record(alpha >= k, || {
                    format!("satisfiable source but small independent set on {:?}", q.formula())
                });
            }
            // Normalization: some equal-size maximum independent set picks
            // the same slot across all copies of each clause.
            if alpha >= k {
                local.record(normalized_copy_check(q, inst), || {
                    format!("copy normalization failed on {:?}", q.formula())
                });
            }
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("reduction-cardmax3cnf-to-indset", started))
}

/// Rebuilds a maximum independent set that chooses consistent copies and
/// checks it is independent and no smaller.
fn normalized_copy_check(q: &OptQuery, inst: &IndSetInstance) -> bool {
    let formula = q.formula();
    let n = formula.universe_size();
    let m = formula.clauses().len() as u32;
    let layout = TriangleLayout { n, m, l: n + 1 };
    let best = find_maximum_is(inst.graph());

    // Truth assignment read off the chosen literal copies: false only
    // where a negative occurrence was selected.
    let mut value = vec![true; n as usize + 1];
    for &vertex in &best {
        if let Some((i, _, s)) = layout.decode_literal_vertex(vertex) {
            let clause = &formula.clauses()[(i - 1) as usize];
            let lits = clause.literals();
            let lit = if (s as usize) <= lits.len() {
                lits[(s - 1) as usize]
            } else {
                *lits.last().expect("non-empty")
            };
            if !lit.is_positive() {
                value[lit.var().id() as usize] = false;
            }
        }
    }
    let assignment = Assignment::new(n, (1..=n).filter(|&v| value[v as usize])).expect("in range");
    if !formula.evaluate(&assignment).expect("universe") {
        return false;
    }

    // One satisfied slot per clause, all copies of it, plus the vertices
    // of the true variables.
    let mut normalized: BTreeSet<u32> = BTreeSet::new();
    for (idx, clause) in formula.clauses().iter().enumerate() {
        let i = idx as u32 + 1;
        let lits = clause.literals();
        let slot = (0..3u32)
            .find(|&s| {
                let lit = lits.get(s as usize).copied().unwrap_or(*lits.last().unwrap());
                lit.satisfied_by(&assignment)
            })
            .expect("assignment satisfies the clause");
        for j in 1..=layout.l {
            normalized.insert(layout.literal_vertex(i, j, slot + 1));
        }
    }
    for v in 1..=n {
        if value[v as usize] {
            normalized.insert(layout.var_vertex(v));
        }
    }
    if normalized.len() != best.len() {
        return false;
    }
    for &a in &normalized {
        for &b in &normalized {
            if a < b && inst.graph().has_edge(a, b) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive: every graph on up to 5 vertices, every query vertex, every
/// bound up to 4.
pub fn suite_reduction_drop_bound(_config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut tally = Tally::new();
    for n in 1..=5u32 {
        let pairs: Vec<(u32, u32)> = (1..=n)
            .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
            .collect();
        for edge_mask in 0u64..(1 << pairs.len()) {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| edge_mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            let g = crate::logic::Graph::with_edges(n, &edges).expect("valid");
            let alpha = max_independent_set_size(&g);
            for v in 1..=n {
                let source_in_max = in_some_maximum_is(&g, v);
                for k in 1..=4u32 {
                    let inst = IndSetInstance::new(g.clone(), v, Some(k)).expect("valid");
                    let out = drop_bound(&inst).expect("bounded");
                    let source = alpha >= k && source_in_max;
                    let target = in_some_maximum_is(out.target.graph(), v);
                    tally.record(source == target, || {
                        format!("drop_bound mismatch n={n} edges={edges:?} v={v} k={k}")
                    });
                }
            }
        }
    }
    Ok(tally.finish("reduction-drop-bound", started))
}

/// Exhaustive: every graph on up to 6 vertices, every query vertex.
pub fn suite_reduction_graph_to_krom(_config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut by_n = Vec::new();
    for n in 1..=6u32 {
        by_n.push(n);
    }
    let tally = by_n
        .par_iter()
        .map(|&n| {
            let mut local = Tally::new();
            let pairs: Vec<(u32, u32)> = (1..=n)
                .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
                .collect();
            for edge_mask in 0u64..(1 << pairs.len()) {
                let edges: Vec<(u32, u32)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| edge_mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = crate::logic::Graph::with_edges(n, &edges).expect("valid");
                for v in 1..=n {
                    let inst = IndSetInstance::new(g.clone(), v, None).expect("valid");
                    let out = graph_to_negative_krom(&inst).expect("unbounded");
                    let target = brute_force_card_max_capped(&out.target, 25).expect("cap");
                    local.record(target.answer == in_some_maximum_is(&g, v), || {
                        format!("graph-to-krom mismatch n={n} edges={edges:?} v={v}")
                    });
                }
            }
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("reduction-graph-to-negative-krom", started))
}

/// 300 random negative Krom formulas at up to 8 variables, plus the three
/// structural observations about the gadget's minimal models.
pub fn suite_reduction_duplication(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let count = config.reduction_instances.max(300);
    let mut rng = gen::rng(config.seed ^ 0xD0B1);
    let instances: Vec<(CnfFormula, u32)> = (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=8u32);
            let f = gen::random_negative_krom(n, 0.5, &mut rng);
            let v = rng.gen_range(1..=n);
            (f, v)
        })
        .collect();
    let tally = instances
        .par_iter()
        .map(|(f, v)| {
            let mut local = Tally::new();
            let n = f.universe_size();
            let q = OptQuery::new(f.clone(), Variable::new(*v)).expect("in range");
            let source = brute_force_card_max_capped(&q, 25).expect("cap");
            let out = negkrom_cardmax_to_poskrom_cardmin(&q).expect("negative krom");
            let target = brute_force_card_min_capped(&out.target, 25).expect("cap");
            local.record(source.answer == target.answer, || {
                format!("duplication gadget mismatch on {f:?} query x{v}")
            });

            // Structural observations. Weights flip monotonically: a source
            // maximum of c becomes a target minimum of c + 2(n - c).
            let c = source.optimum.expect("negative formulas are satisfiable");
            local.record(target.optimum == Some(c + 2 * (n - c)), || {
                format!("duplication weight law failed on {f:?}")
            });
            // Every minimal model of the output picks, per variable, either
            // the variable itself or both of its primed stand-ins.
            let mut image_ok = true;
            out.target
                .formula()
                .for_each_model_mask(25, |mask| {
                    if mask.count_ones() != c + 2 * (n - c) {
                        return;
                    }
                    for v in 1..=n {
                        let x = mask & (1u64 << (v - 1)) != 0;
                        let p1 = mask & (1u64 << (n + v - 1)) != 0;
                        let p2 = mask & (1u64 << (2 * n + v - 1)) != 0;
                        if !(x ^ (p1 && p2)) || (x && (p1 || p2)) {
                            image_ok = false;
                        }
                    }
                })
                .expect("cap");
            local.record(image_ok, || {
                format!("duplication image shape failed on {f:?}")
            });
            // The duplicated image of a set models the output exactly when
            // the set models the source.
            let mut tau_ok = true;
            for source_mask in 0u64..(1u64 << n) {
                let i = Assignment::from_mask(n, source_mask);
                let mut image_mask = source_mask;
                for v in 1..=n {
                    if source_mask & (1u64 << (v - 1)) == 0 {
                        image_mask |= 1u64 << (n + v - 1);
                        image_mask |= 1u64 << (2 * n + v - 1);
                    }
                }
                let tau = Assignment::from_mask(3 * n, image_mask);
                let lhs = f.evaluate(&i).expect("universe");
                let rhs = out.target.formula().evaluate(&tau).expect("universe");
                if lhs != rhs {
                    tau_ok = false;
                }
            }
            local.record(tau_ok, || {
                format!("duplication image correspondence failed on {f:?}")
            });
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("reduction-duplication", started))
}

fn apply_dalal_fault(psi: &CnfFormula) -> CnfFormula {
    let mut clauses = psi.clauses().to_vec();
    if let Some(first) = clauses.first_mut() {
        let mut lits: Vec<Literal> = first.literals().to_vec();
        lits[0] = lits[0].negated();
        *first = Clause::new(lits).expect("non-empty");
    }
    CnfFormula::new(psi.universe_size(), clauses).expect("in range")
}

pub fn suite_reduction_dalal(config: &XcheckConfig, fault: Fault) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0xDA1A);
    let instances: Vec<(CnfFormula, u32)> = (0..config.reduction_instances)
        .map(|_| {
            let n = rng.gen_range(1..=6u32);
            let f = gen::random_positive_krom(n, 0.4, &mut rng);
            let v = rng.gen_range(1..=n);
            (f, v)
        })
        .collect();
    let tally = instances
        .par_iter()
        .map(|(f, v)| {
            let mut local = Tally::new();
            let q = OptQuery::new(f.clone(), Variable::new(*v)).expect("in range");
            let source = brute_force_card_min_capped(&q, 25).expect("cap");
            let out = reduce_cardmin_to_dalal(&q).expect("positive krom");
            let mut target = out.target;
            if fault == Fault::FlipDalalGadgetClause {
                target.psi = apply_dalal_fault(&target.psi);
            }
            let inst = RevisionInstance::new(target.psi.clone(), target.mu.clone())
                .expect("shared universe");
            let mc = dalal_model_check(&inst, &target.m1).expect("models mu");
            let imp = dalal_implication(&inst, target.flag).expect("in range");
            local.record(source.answer == mc && mc == !imp, || {
                format!("revision gadget mismatch on {f:?} query x{v}")
            });
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("reduction-cardmin-to-dalal", started))
}

pub fn suite_reduction_satoh(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x5A04);
    let instances: Vec<CnfFormula> = (0..config.reduction_instances)
        .map(|_| {
            let n = rng.gen_range(1..=3u32);
            let m = rng.gen_range(1..=3u32);
            gen::random_cnf(n, m, 3, &mut rng)
        })
        .collect();
    let tally = instances
        .par_iter()
        .map(|f| {
            let mut local = Tally::new();
            let source_sat = !f.all_models().expect("cap").is_empty();
            let out = reduce_3sat_to_satoh_mc(f).expect("3cnf");
            let t = &out.target;
            let inst =
                RevisionInstance::new(t.psi.clone(), t.mu.clone()).expect("shared universe");
            local.record(t.mu.evaluate(&t.m).expect("universe"), || {
                format!("satoh gadget anchor is not a model of mu on {f:?}")
            });
            let mc = satoh_model_check(&inst, &t.m).expect("models mu");
            let imp = satoh_implication(&inst, t.d).expect("in range");
            local.record(source_sat == mc && mc == !imp, || {
                format!("satoh gadget mismatch on {f:?}")
            });
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("reduction-3sat-to-satoh", started))
}

pub fn suite_reduction_abduction(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0xABD0);
    let instances: Vec<(CnfFormula, u32)> = (0..config.reduction_instances)
        .map(|_| {
            let n = rng.gen_range(1..=6u32);
            let f = gen::random_positive_krom(n, 0.4, &mut rng);
            let v = rng.gen_range(1..=n);
            (f, v)
        })
        .collect();
    let tally = instances
        .par_iter()
        .map(|(f, v)| {
            let mut local = Tally::new();
            let q = OptQuery::new(f.clone(), Variable::new(*v)).expect("in range");
            let source = brute_force_card_min_capped(&q, 25).expect("cap");
            let out = reduce_cardmin_to_abduction(&q).expect("positive krom");
            let (pap, h) = &out.target;
            let target = brute_force_relevance(pap, *h).expect("within cap");
            local.record(
                source.answer == target.relevant && source.optimum == target.min_size,
                || format!("abduction gadget mismatch on {f:?} query x{v}"),
            );
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("reduction-cardmin-to-abduction", started))
}

pub fn suite_reduction_r4p(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x24B0);
    let instances: Vec<(crate::logic::ConstraintFormula, u32)> = (0..config.reduction_instances)
        .map(|_| {
            let n = rng.gen_range(1..=5u32);
            let cf = gen::random_or2_formula(n, 0.5, &mut rng);
            let v = rng.gen_range(1..=n);
            (cf, v)
        })
        .collect();
    let tally = instances
        .par_iter()
        .map(|(cf, v)| {
            let mut local = Tally::new();
            let q = CspQuery::new(cf.clone(), Variable::new(*v)).expect("in range");
            let source = brute_force_cardmin_constraints(cf, Variable::new(*v)).expect("cap");
            let out = reduce_or2_to_r4p(&q).expect("pure or2");
            let target = brute_force_cardmin_constraints(&out.target.formula, Variable::new(*v))
                .expect("cap");
            local.record(source.answer == target.answer, || {
                format!("pairing gadget mismatch on {cf:?} query x{v}")
            });
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("reduction-or2-to-r4p", started))
}

/// Both branches of the witness construction; the replicated branch uses a
/// relation found by exhaustive search over small arities whose derived
/// constraint admits the escape pattern.
pub fn suite_reduction_s01(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let single_s = BooleanRelation::constant(true);
    let single_r = BooleanRelation::or2();
    let (replicated_s, replicated_r) =
        find_replicated_branch_pair().expect("search space contains a replicated-branch relation");

    let mut rng = gen::rng(config.seed ^ 0x5019);
    let mut instances = Vec::new();
    while instances.len() < config.reduction_instances as usize {
        let n = rng.gen_range(1..=4u32);
        let cf = gen::random_or2_formula(n, 0.4, &mut rng);
        if cf.applications().len() > 3 {
            continue;
        }
        let v = rng.gen_range(1..=n);
        instances.push((cf, v));
    }
    let tally = instances
        .par_iter()
        .map(|(cf, v)| {
            let mut local = Tally::new();
            let q = CspQuery::new(cf.clone(), Variable::new(*v)).expect("in range");
            let source = brute_force_cardmin_constraints(cf, Variable::new(*v)).expect("cap");
            for (s, r, label) in [
                (&single_s, &single_r, "single"),
                (&replicated_s, &replicated_r, "replicated"),
            ] {
                let out = s01_witness_reduction(&q, s, r).expect("preconditions");
                let target =
                    brute_force_cardmin_constraints(&out.target.formula, Variable::new(*v))
                        .expect("cap");
                local.record(source.answer == target.answer, || {
                    format!("{label} branch mismatch on {cf:?} query x{v}")
                });
            }
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("reduction-s01-both-branches", started))
}

/// Searches relations of arity up to 4 for one that passes the witness
/// preconditions and lands in the replicated branch.
fn find_replicated_branch_pair() -> Option<(BooleanRelation, BooleanRelation)> {
    for arity in 2..=4u32 {
        for tuple_mask in 0u32..(1 << (1 << arity)) {
            let tuples: Vec<Vec<bool>> = (0..(1u32 << arity))
                .filter(|i| tuple_mask & (1 << i) != 0)
                .map(|idx| (0..arity).map(|c| idx & (1 << c) != 0).collect())
                .collect();
            if tuples.is_empty() {
                continue;
            }
            let rel = BooleanRelation::new(arity, tuples).expect("arity ok");
            match crate::reductions::s01_analysis(&rel, &rel) {
                Ok(analysis) if analysis.branch == crate::reductions::S01Branch::Replicated => {
                    return Some((rel.clone(), rel));
                }
                _ => {}
            }
        }
    }
    None
}

// ---------------------------------------------------------------------
// Suite 4: the revision gadgets stay inside Horn-and-Krom.

pub fn suite_revision_gadget_classes(config: &XcheckConfig, fault: Fault) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x4243);
    let mut tally = Tally::new();
    for _ in 0..config.reduction_instances {
        let n = rng.gen_range(1..=6u32);
        let f = gen::random_positive_krom(n, 0.4, &mut rng);
        let q = OptQuery::new(f.clone(), Variable::new(1)).expect("in range");
        let out = reduce_cardmin_to_dalal(&q).expect("positive krom");
        let mut psi = out.target.psi;
        if fault == Fault::FlipDalalGadgetClause {
            psi = apply_dalal_fault(&psi);
        }
        tally.record(
            psi.is_horn() && psi.is_krom() && out.target.mu.is_horn() && out.target.mu.is_krom(),
            || format!("revision gadget left Horn-and-Krom on {f:?}"),
        );

        let g = gen::random_3cnf(rng.gen_range(1..=3u32), 1.5, &mut rng);
        let out = reduce_3sat_to_satoh_mc(&g).expect("3cnf");
        tally.record(
            out.target.psi.is_horn()
                && out.target.psi.is_krom()
                && out.target.mu.is_horn()
                && out.target.mu.is_krom(),
            || format!("satoh gadget left Horn-and-Krom on {g:?}"),
        );
    }
    Ok(tally.finish("revision-gadgets-horn-and-krom", started))
}

// ---------------------------------------------------------------------
// Suite 5: the polynomial Satoh minimality check.

pub fn suite_satoh_poly_check(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x5470);
    // Krom and Horn corpora of instance/model triples.
    let mut instances: Vec<(RevisionInstance, Assignment, Assignment)> = Vec::new();
    let mut krom_count = 0;
    let mut horn_count = 0;
    while krom_count < config.satoh_check_instances || horn_count < config.satoh_check_instances {
        let want_krom = krom_count < config.satoh_check_instances && (horn_count >= config.satoh_check_instances || rng.gen_bool(0.5));
        let n = rng.gen_range(2..=config.satoh_check_max_vars);
        let (psi, mu) = if want_krom {
            (
                gen::random_krom(n, rng.gen_range(0..=n), &mut rng),
                gen::random_krom(n, rng.gen_range(0..=n), &mut rng),
            )
        } else {
            (
                gen::random_horn(n, rng.gen_range(0..=n), 3, &mut rng),
                gen::random_horn(n, rng.gen_range(0..=n), 3, &mut rng),
            )
        };
        let psi_models = psi.all_models().expect("cap");
        let mu_models = mu.all_models().expect("cap");
        if psi_models.is_empty() || mu_models.is_empty() {
            continue;
        }
        let i = psi_models[rng.gen_range(0..psi_models.len())].clone();
        let m = mu_models[rng.gen_range(0..mu_models.len())].clone();
        instances.push((
            RevisionInstance::new(psi, mu).expect("shared universe"),
            i,
            m,
        ));
        if want_krom {
            krom_count += 1;
        } else {
            horn_count += 1;
        }
    }
    let tally = instances
        .par_iter()
        .map(|(inst, i, m)| {
            let mut local = Tally::new();
            let satoh = satoh_revise(inst).expect("cap");
            let delta: BTreeSet<u32> = i.delta(m).expect("universe");
            let brute = satoh.minimal_diffs.contains(&delta);
            let poly = satoh_minimality_check_poly(inst, i, m).expect("class");
            local.record(poly == brute, || {
                format!("satoh minimality mismatch I={i:?} M={m:?}")
            });
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("satoh-poly-minimality", started))
}

// ---------------------------------------------------------------------
// Suite 6: the classifier.

pub fn suite_classifier(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut tally = Tally::new();

    let or2 = BooleanRelation::or2();
    let eq = BooleanRelation::equality();
    let neq = BooleanRelation::disequality();
    let imp = BooleanRelation::implication();
    let or3 =
        BooleanRelation::from_bits(3, &["001", "010", "011", "100", "101", "110", "111"]).unwrap();

    let cases: Vec<(Vec<BooleanRelation>, VerdictClass)> = vec![
        (vec![or2.clone()], VerdictClass::Theta2Complete),
        (vec![eq.clone(), neq.clone()], VerdictClass::Polynomial),
        (vec![imp.clone()], VerdictClass::Polynomial),
        (vec![clones::r4p()], VerdictClass::Theta2Complete),
        (vec![or3], VerdictClass::OutsideScope),
    ];
    for (language, want) in &cases {
        let verdict = classify_language(language)?;
        tally.record(verdict.class == *want, || {
            format!("classifier verdict mismatch: got {:?}, want {want:?}", verdict.class)
        });
    }

    // Closure flags against the polymorphism path on a random corpus.
    let mut rng = gen::rng(config.seed ^ 0xC105);
    for _ in 0..400 {
        let arity = rng.gen_range(1..=4u32);
        let rel = gen::random_relation(arity, &mut rng);
        let rep = closure_report(&rel);
        let ok = rep.horn == is_polymorphism(&BoolFun::and2(), &rel)
            && rep.dual_horn == is_polymorphism(&BoolFun::or2(), &rel)
            && rep.affine == is_polymorphism(&BoolFun::xor3(), &rel)
            && rep.krom == is_polymorphism(&BoolFun::maj3(), &rel)
            && rep.width2affine == (rep.affine && rep.krom);
        tally.record(ok, || format!("closure cross-path mismatch on {rel:?}"));
    }

    // Polynomial verdicts route to the dedicated algorithms and agree with
    // brute force.
    for round in 0..120u32 {
        let n = 1 + round % 6;
        let cf = gen::random_width2affine(n, round % 8, &mut rng);
        let rels: Vec<&BooleanRelation> = cf.relations().map(|(_, r)| r).collect();
        let verdict = classify_language(&rels.iter().map(|r| (*r).clone()).collect::<Vec<_>>())?;
        tally.record(verdict.class == VerdictClass::Polynomial, || {
            "width-2 affine language not classified polynomial".to_string()
        });
        let v = Variable::new(1 + round % n);
        let fast = clones::cardmin_polynomial(&cf, v)?;
        let brute = brute_force_cardmin_constraints(&cf, v)?;
        tally.record(
            fast.answer == brute.answer && fast.optimum == brute.optimum,
            || format!("polynomial route mismatch on {cf:?}"),
        );
    }
    Ok(tally.finish("classifier", started))
}

// ---------------------------------------------------------------------
// Suite 7: end-to-end walk across the modules.

/// For random positive Krom queries, the chain of answers must agree:
/// oracle-guided cardinality minimization, Dalal model checking and
/// implication on the revision gadget, and relevance on the abduction
/// gadget.
pub fn suite_theorem_walk(config: &XcheckConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut rng = gen::rng(config.seed ^ 0x3A1F);
    let instances: Vec<(CnfFormula, u32)> = (0..config.walk_instances)
        .map(|_| {
            let n = rng.gen_range(1..=config.walk_max_vars);
            let f = gen::random_positive_krom(n, 0.4, &mut rng);
            let v = rng.gen_range(1..=n);
            (f, v)
        })
        .collect();
    let tally = instances
        .par_iter()
        .map(|(f, v)| {
            let mut local = Tally::new();
            let q = OptQuery::new(f.clone(), Variable::new(*v)).expect("in range");
            let (cardmin, _) = card_min_sat(&Dpll, &q).expect("solver");

            let dalal = reduce_cardmin_to_dalal(&q).expect("positive krom");
            let inst = RevisionInstance::new(dalal.target.psi.clone(), dalal.target.mu.clone())
                .expect("shared universe");
            let mc = dalal_model_check_oracle(&Dpll, &inst, &dalal.target.m1).expect("models mu");
            let imp = dalal_implication_oracle(&Dpll, &inst, dalal.target.flag).expect("in range");

            let abduction = reduce_cardmin_to_abduction(&q).expect("positive krom");
            let (pap, h) = &abduction.target;
            let relevance = leq_relevance(&Dpll, pap, *h).expect("in range");

            local.record(
                cardmin.answer == mc && mc == !imp && cardmin.answer == relevance.relevant,
                || format!("theorem walk broke on {f:?} query x{v}"),
            );
            local
        })
        .reduce(Tally::new, Tally::merge);
    Ok(tally.finish("theorem-walk", started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_config_all_suites_pass() {
        let reports = run_all(&XcheckConfig::quick(7), Fault::None).unwrap();
        for r in &reports {
            assert!(
                r.passed(),
                "suite {} failed: {:?} ({} of {})",
                r.name,
                r.first_failure,
                r.mismatches,
                r.checked
            );
            assert!(r.checked > 0, "suite {} checked nothing", r.name);
        }
        assert_eq!(reports.len(), 18);
    }

    #[test]
    fn injected_fault_is_caught() {
        let reports = run_all(&XcheckConfig::quick(7), Fault::FlipDalalGadgetClause).unwrap();
        let dalal = reports
            .iter()
            .find(|r| r.name == "reduction-cardmin-to-dalal")
            .unwrap();
        assert!(!dalal.passed(), "fault not caught by the preservation suite");
    }

    #[test]
    fn corpus_regeneration_is_deterministic() {
        let a = run_all(&XcheckConfig::quick(11), Fault::None).unwrap();
        let b = run_all(&XcheckConfig::quick(11), Fault::None).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.checked, y.checked);
            assert_eq!(x.mismatches, y.mismatches);
        }
    }
}
