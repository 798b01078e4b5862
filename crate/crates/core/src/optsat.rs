//! Optimization variants of SAT: is an atom true in a cardinality-minimal
//! (or -maximal) model, and lexicographic maximization over an ordered
//! variable prefix.
//!
//! Each oracle-guided algorithm has a brute-force twin used only for
//! cross-validation, and the width-2 affine special case is solved by the
//! cluster algorithm without any oracle at all.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::{
    Assignment, CnfFormula, ConstraintFormula, Literal, Variable, VariableOrder,
    DEFAULT_ENUMERATION_CAP,
};
use crate::sat::{sat_with_bound_assuming, CardinalityBound, Oracle};

/// A formula together with the queried atom.
#[derive(Clone, Debug)]
pub struct OptQuery {
    formula: CnfFormula,
    query_var: Variable,
}

impl OptQuery {
    pub fn new(formula: CnfFormula, query_var: Variable) -> Result<OptQuery> {
        if query_var.id() > formula.universe_size() {
            return Err(Error::VariableOutOfUniverse {
                var: query_var.id(),
                universe: formula.universe_size(),
            });
        }
        Ok(OptQuery { formula, query_var })
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn query_var(&self) -> Variable {
        self.query_var
    }
}

/// Answer to an optimization query. `optimum` is the minimal (or maximal)
/// model cardinality and is absent exactly when the formula is
/// unsatisfiable; the witness is present exactly when the answer is true,
/// has cardinality `optimum`, and sets the query variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptAnswer {
    pub answer: bool,
    pub optimum: Option<u32>,
    pub witness: Option<Assignment>,
}

impl OptAnswer {
    fn unsat() -> OptAnswer {
        OptAnswer {
            answer: false,
            optimum: None,
            witness: None,
        }
    }
}

/// Oracle traffic of one optimization run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleUsage {
    /// Number of cardinality-bounded oracle calls.
    pub bounded_calls: u32,
    /// Number of plain satisfiability calls.
    pub sat_calls: u32,
}

impl OracleUsage {
    /// The bound the binary search must respect: ceil(log2(n+1)) + 1.
    pub fn bounded_call_budget(universe_size: u32) -> u32 {
        let mut budget = 1; // the final query call
        let mut span = universe_size as u64 + 1; // candidate optima
        while span > 1 {
            span = span.div_ceil(2);
            budget += 1;
        }
        budget
    }
}

/// Is the query atom true in some cardinality-minimal model?
///
/// Binary search over `sat_with_bound` finds the minimal model cardinality
/// with logarithmically many oracle calls, then one final bounded call
/// checks for a model of exactly that size containing the atom.
pub fn card_min_sat(oracle: &dyn Oracle, q: &OptQuery) -> Result<(OptAnswer, OracleUsage)> {
    card_opt_sat(oracle, q, Direction::Min)
}

/// Dual of [`card_min_sat`]: cardinality-maximal models, searched upward.
pub fn card_max_sat(oracle: &dyn Oracle, q: &OptQuery) -> Result<(OptAnswer, OracleUsage)> {
    card_opt_sat(oracle, q, Direction::Max)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Min,
    Max,
}

fn card_opt_sat(
    oracle: &dyn Oracle,
    q: &OptQuery,
    direction: Direction,
) -> Result<(OptAnswer, OracleUsage)> {
    let f = &q.formula;
    let n = f.universe_size();
    let mut usage = OracleUsage::default();

    usage.sat_calls += 1;
    if !oracle.solve(f, &[])?.is_sat() {
        return Ok((OptAnswer::unsat(), usage));
    }

    let scope = || 1..=n;
    let mut lo = 0u32;
    let mut hi = n;
    while lo < hi {
        let (mid, bound) = match direction {
            Direction::Min => {
                let mid = lo + (hi - lo) / 2;
                (mid, CardinalityBound::at_most(mid, scope())?)
            }
            Direction::Max => {
                let mid = lo + (hi - lo).div_ceil(2);
                (mid, CardinalityBound::at_least(mid, scope())?)
            }
        };
        usage.bounded_calls += 1;
        let feasible = sat_with_bound_assuming(oracle, f, &bound, &[])?.is_sat();
        match (direction, feasible) {
            (Direction::Min, true) => hi = mid,
            (Direction::Min, false) => lo = mid + 1,
            (Direction::Max, true) => lo = mid,
            (Direction::Max, false) => hi = mid - 1,
        }
    }
    let optimum = lo;

    let bound = match direction {
        Direction::Min => CardinalityBound::at_most(optimum, scope())?,
        Direction::Max => CardinalityBound::at_least(optimum, scope())?,
    };
    usage.bounded_calls += 1;
    let fin = sat_with_bound_assuming(oracle, f, &bound, &[Literal::new(q.query_var, true)])?;
    let answer = fin.is_sat();
    Ok((
        OptAnswer {
            answer,
            optimum: Some(optimum),
            witness: fin.into_witness(),
        },
        usage,
    ))
}

/// Full-enumeration twin of [`card_min_sat`].
pub fn brute_force_card_min(q: &OptQuery) -> Result<OptAnswer> {
    brute_force_card_min_capped(q, DEFAULT_ENUMERATION_CAP)
}

/// Full-enumeration twin of [`card_max_sat`].
pub fn brute_force_card_max(q: &OptQuery) -> Result<OptAnswer> {
    brute_force_card_max_capped(q, DEFAULT_ENUMERATION_CAP)
}

pub fn brute_force_card_min_capped(q: &OptQuery, cap: u32) -> Result<OptAnswer> {
    brute_force(q, cap, Direction::Min)
}

pub fn brute_force_card_max_capped(q: &OptQuery, cap: u32) -> Result<OptAnswer> {
    brute_force(q, cap, Direction::Max)
}

fn brute_force(q: &OptQuery, cap: u32, direction: Direction) -> Result<OptAnswer> {
    let n = q.formula.universe_size();
    let query_bit = 1u64 << (q.query_var.id() - 1);
    let mut best: Option<u32> = None;
    let mut witness_mask: Option<u64> = None;
    q.formula.for_each_model_mask(cap, |mask| {
        let card = mask.count_ones();
        let better = match (best, direction) {
            (None, _) => true,
            (Some(b), Direction::Min) => card < b,
            (Some(b), Direction::Max) => card > b,
        };
        if better {
            best = Some(card);
            witness_mask = None;
        }
        if best == Some(card) && witness_mask.is_none() && mask & query_bit != 0 {
            witness_mask = Some(mask);
        }
    })?;
    Ok(OptAnswer {
        answer: witness_mask.is_some(),
        optimum: best,
        witness: witness_mask.map(|m| Assignment::from_mask(n, m)),
    })
}

/// The lexicographically maximal model under a complete variable order,
/// fixed most-significant-first with one oracle call per variable.
pub fn lex_max_model(
    oracle: &dyn Oracle,
    formula: &CnfFormula,
    order: &VariableOrder,
) -> Result<Option<Assignment>> {
    if !order.covers(formula.universe_size()) {
        return Err(Error::contract(
            "lex_max_model requires an order covering the whole universe",
        ));
    }
    match fix_prefix(oracle, formula, order)? {
        None => Ok(None),
        Some(assumptions) => {
            let true_vars = assumptions
                .iter()
                .filter(|l| l.is_positive())
                .map(|l| l.var().id());
            Ok(Some(Assignment::new(formula.universe_size(), true_vars)?))
        }
    }
}

/// Outcome of a lexicographic prefix maximization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogLexAnswer {
    /// The formula has no model at all.
    Unsat,
    /// The lexicographically maximal extendable prefix vector; `answer` is
    /// its last bit.
    Prefix { bits: Vec<bool>, answer: bool },
}

/// The lexicographically maximal bit vector over the ordered prefix that
/// extends to a model, and whether its last bit is one.
pub fn log_lex_max_sat(
    oracle: &dyn Oracle,
    formula: &CnfFormula,
    prefix: &VariableOrder,
) -> Result<LogLexAnswer> {
    if prefix.is_empty() {
        return Err(Error::contract("prefix must contain at least one variable"));
    }
    prefix.check_within(formula.universe_size())?;
    match fix_prefix(oracle, formula, prefix)? {
        None => Ok(LogLexAnswer::Unsat),
        Some(assumptions) => {
            let bits: Vec<bool> = assumptions.iter().map(|l| l.is_positive()).collect();
            let answer = *bits.last().expect("prefix is non-empty");
            Ok(LogLexAnswer::Prefix { bits, answer })
        }
    }
}

/// Greedily fixes the ordered variables to their lexicographically maximal
/// extendable values; `None` when the formula is unsatisfiable.
fn fix_prefix(
    oracle: &dyn Oracle,
    formula: &CnfFormula,
    order: &VariableOrder,
) -> Result<Option<Vec<Literal>>> {
    if !oracle.solve(formula, &[])?.is_sat() {
        return Ok(None);
    }
    let mut assumptions: Vec<Literal> = Vec::with_capacity(order.len());
    for &var in order.vars() {
        assumptions.push(Literal::new(var, true));
        if !oracle.solve(formula, &assumptions)?.is_sat() {
            let last = assumptions.last_mut().expect("just pushed");
            *last = last.negated();
        }
    }
    Ok(Some(assumptions))
}

/// Full-enumeration twin of [`lex_max_model`].
pub fn brute_force_lex_max_model(
    formula: &CnfFormula,
    order: &VariableOrder,
    cap: u32,
) -> Result<Option<Assignment>> {
    if !order.covers(formula.universe_size()) {
        return Err(Error::contract(
            "lex maximization requires an order covering the whole universe",
        ));
    }
    let n = formula.universe_size();
    let key = |mask: u64| -> u64 {
        let len = order.len();
        order
            .vars()
            .iter()
            .enumerate()
            .map(|(pos, v)| {
                let bit = (mask >> (v.id() - 1)) & 1;
                bit << (len - 1 - pos)
            })
            .sum()
    };
    let mut best: Option<(u64, u64)> = None;
    formula.for_each_model_mask(cap, |mask| {
        let k = key(mask);
        if best.is_none_or(|(bk, _)| k > bk) {
            best = Some((k, mask));
        }
    })?;
    Ok(best.map(|(_, m)| Assignment::from_mask(n, m)))
}

/// Full-enumeration twin of [`log_lex_max_sat`].
pub fn brute_force_log_lex(
    formula: &CnfFormula,
    prefix: &VariableOrder,
    cap: u32,
) -> Result<LogLexAnswer> {
    if prefix.is_empty() {
        return Err(Error::contract("prefix must contain at least one variable"));
    }
    prefix.check_within(formula.universe_size())?;
    let key = |mask: u64| -> u64 {
        let len = prefix.len();
        prefix
            .vars()
            .iter()
            .enumerate()
            .map(|(pos, v)| {
                let bit = (mask >> (v.id() - 1)) & 1;
                bit << (len - 1 - pos)
            })
            .sum()
    };
    let mut best: Option<(u64, u64)> = None;
    formula.for_each_model_mask(cap, |mask| {
        let k = key(mask);
        if best.is_none_or(|(bk, _)| k > bk) {
            best = Some((k, mask));
        }
    })?;
    Ok(match best {
        None => LogLexAnswer::Unsat,
        Some((_, mask)) => {
            let bits: Vec<bool> = prefix
                .vars()
                .iter()
                .map(|v| (mask >> (v.id() - 1)) & 1 == 1)
                .collect();
            let answer = *bits.last().expect("non-empty prefix");
            LogLexAnswer::Prefix { bits, answer }
        }
    })
}

/// A pair of variable classes forced to opposite truth values in every
/// model of a width-2 affine formula; `side_b` may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub side_a: BTreeSet<u32>,
    pub side_b: BTreeSet<u32>,
    /// Truth value of `side_a` forced by unary constraints, if any.
    pub forced_a: Option<bool>,
}

struct UnionFind {
    parent: Vec<u32>,
    parity: Vec<bool>, // value(node) = value(parent) XOR parity
    forced: Vec<Option<bool>>,
}

impl UnionFind {
    fn new(n: u32) -> UnionFind {
        UnionFind {
            parent: (0..=n).collect(),
            parity: vec![false; n as usize + 1],
            forced: vec![None; n as usize + 1],
        }
    }

    fn find(&mut self, v: u32) -> (u32, bool) {
        let mut root = v;
        let mut parity = false;
        while self.parent[root as usize] != root {
            parity ^= self.parity[root as usize];
            root = self.parent[root as usize];
        }
        // Path compression, re-deriving parities along the walk.
        let mut node = v;
        let mut p = parity;
        while self.parent[node as usize] != root && self.parent[node as usize] != node {
            let next = self.parent[node as usize];
            let next_p = p ^ self.parity[node as usize];
            self.parent[node as usize] = root;
            self.parity[node as usize] = p;
            node = next;
            p = next_p;
        }
        (root, parity)
    }

    /// Returns false on contradiction. `differ` records a disequality.
    fn union(&mut self, a: u32, b: u32, differ: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == differ;
        }
        let rel = pa ^ pb ^ differ; // value(ra) = value(rb) XOR rel
        self.parent[rb as usize] = ra;
        self.parity[rb as usize] = rel;
        match (self.forced[ra as usize], self.forced[rb as usize]) {
            (_, None) => true,
            (None, Some(fb)) => {
                self.forced[ra as usize] = Some(fb ^ rel);
                true
            }
            (Some(fa), Some(fb)) => fa == fb ^ rel,
        }
    }

    /// Returns false on contradiction.
    fn force(&mut self, v: u32, value: bool) -> bool {
        let (root, parity) = self.find(v);
        let root_value = value ^ parity;
        match self.forced[root as usize] {
            None => {
                self.forced[root as usize] = Some(root_value);
                true
            }
            Some(existing) => existing == root_value,
        }
    }
}

/// Decomposes a width-2 affine constraint formula into clusters, or `None`
/// when the constraints are contradictory.
///
/// Every application must be a unary constraint, an equality, or a
/// disequality over two variables.
pub fn width2affine_clusters(cf: &ConstraintFormula) -> Result<Option<Vec<Cluster>>> {
    let n = cf.universe_size();
    let mut uf = UnionFind::new(n);
    for (rel_idx, vars) in cf.applications() {
        let rel = cf.relation(*rel_idx);
        let ok = match rel.arity() {
            1 => {
                let v = vars[0].id();
                match rel.len() {
                    0 => false, // empty unary constraint: unsatisfiable
                    2 => true,  // full unary constraint: vacuous
                    _ => uf.force(v, rel.contains(&[true])),
                }
            }
            2 if *rel == crate::logic::BooleanRelation::equality() => {
                uf.union(vars[0].id(), vars[1].id(), false)
            }
            2 if *rel == crate::logic::BooleanRelation::disequality() => {
                uf.union(vars[0].id(), vars[1].id(), true)
            }
            _ => {
                return Err(Error::contract(format!(
                    "application of {} is not width-2 affine",
                    cf.relation_name(*rel_idx)
                )))
            }
        };
        if !ok {
            return Ok(None);
        }
    }

    let mut by_root: std::collections::BTreeMap<u32, Cluster> = Default::default();
    for v in 1..=n {
        let (root, parity) = uf.find(v);
        let forced = uf.forced[root as usize];
        let cluster = by_root.entry(root).or_insert_with(|| Cluster {
            side_a: BTreeSet::new(),
            side_b: BTreeSet::new(),
            forced_a: forced,
        });
        if parity {
            cluster.side_b.insert(v);
        } else {
            cluster.side_a.insert(v);
        }
    }
    Ok(Some(by_root.into_values().collect()))
}

/// Polynomial CardMinSat for width-2 affine constraint formulas via the
/// cluster decomposition: the query atom is true in a cardinality-minimal
/// model exactly when its side of its cluster is no larger than the
/// opposite side (or is forced true).
pub fn width2affine_card_min_sat(cf: &ConstraintFormula, query_var: Variable) -> Result<OptAnswer> {
    if query_var.id() > cf.universe_size() {
        return Err(Error::VariableOutOfUniverse {
            var: query_var.id(),
            universe: cf.universe_size(),
        });
    }
    let clusters = match width2affine_clusters(cf)? {
        Some(c) => c,
        None => return Ok(OptAnswer::unsat()),
    };

    let mut optimum = 0u32;
    let mut answer = false;
    let mut true_vars: BTreeSet<u32> = BTreeSet::new();
    for cluster in &clusters {
        let (a, b) = (cluster.side_a.len() as u32, cluster.side_b.len() as u32);
        let query_here = cluster.side_a.contains(&query_var.id())
            || cluster.side_b.contains(&query_var.id());
        let query_in_a = cluster.side_a.contains(&query_var.id());
        // Which side becomes true: forced wins, then the query's side if
        // it can be minimal, then the smaller side (ties keep side_a false).
        let a_true = match cluster.forced_a {
            Some(v) => v,
            None if query_here => {
                let (q_side, other) = if query_in_a { (a, b) } else { (b, a) };
                if q_side <= other {
                    query_in_a
                } else {
                    !query_in_a
                }
            }
            None => a < b,
        };
        optimum += match cluster.forced_a {
            Some(true) => a,
            Some(false) => b,
            None => a.min(b),
        };
        if query_here {
            answer = match cluster.forced_a {
                Some(v) => {
                    if query_in_a {
                        v
                    } else {
                        !v
                    }
                }
                None => {
                    let (q_side, other) = if query_in_a { (a, b) } else { (b, a) };
                    q_side <= other
                }
            };
        }
        if a_true {
            true_vars.extend(cluster.side_a.iter().copied());
        } else {
            true_vars.extend(cluster.side_b.iter().copied());
        }
    }

    let witness = if answer {
        Some(Assignment::new(cf.universe_size(), true_vars)?)
    } else {
        None
    };
    Ok(OptAnswer {
        answer,
        optimum: Some(optimum),
        witness,
    })
}
