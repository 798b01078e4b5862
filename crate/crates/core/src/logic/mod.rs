//! Propositional-logic data model shared by every solver and reduction:
//! variables, literals, clauses, CNF formulas, assignments-as-sets,
//! variable orders, graphs, and exhaustive model enumeration.
//!
//! Assignments are identified with the set of variables they make true,
//! so cardinality and symmetric difference are structural set operations.
//! All values are immutable after construction.

mod relation;

pub use relation::{BooleanRelation, ConstraintFormula};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Variables beyond this many are refused by exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u32 = 22;

/// A propositional variable, indexed 1-based into a universe.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(u32);

impl Variable {
    /// Panics if `id` is zero; variable ids are 1-based.
    pub fn new(id: u32) -> Variable {
        assert!(id >= 1, "variable ids are 1-based");
        Variable(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A variable together with a polarity.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: Variable,
    positive: bool,
}

impl Literal {
    pub fn new(var: Variable, positive: bool) -> Literal {
        Literal { var, positive }
    }

    pub fn pos(id: u32) -> Literal {
        Literal::new(Variable::new(id), true)
    }

    pub fn neg(id: u32) -> Literal {
        Literal::new(Variable::new(id), false)
    }

    pub fn var(self) -> Variable {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Literal {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// DIMACS convention: positive id for positive polarity, negative otherwise.
    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var.id() as i64
        } else {
            -(self.var.id() as i64)
        }
    }

    pub fn satisfied_by(self, a: &Assignment) -> bool {
        a.contains(self.var) == self.positive
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "-")?;
        }
        write!(f, "{:?}", self.var)
    }
}

/// A non-empty disjunction of literals.
///
/// Duplicate literals are removed on construction (first occurrence kept);
/// a clause containing a variable in both polarities is retained but
/// flagged tautological so gadget outputs stay byte-reproducible.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
    tautological: bool,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Clause> {
        if literals.is_empty() {
            return Err(Error::contract("clauses must be non-empty"));
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(literals.len());
        for lit in literals {
            if seen.insert(lit) {
                normalized.push(lit);
            }
        }
        let tautological = normalized
            .iter()
            .any(|l| normalized.contains(&l.negated()));
        Ok(Clause {
            literals: normalized,
            tautological,
        })
    }

    pub fn binary(a: Literal, b: Literal) -> Clause {
        Clause::new(vec![a, b]).expect("two literals are never empty")
    }

    pub fn unit(a: Literal) -> Clause {
        Clause::new(vec![a]).expect("one literal is never empty")
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_tautological(&self) -> bool {
        self.tautological
    }

    pub fn max_var(&self) -> u32 {
        self.literals.iter().map(|l| l.var().id()).max().unwrap_or(0)
    }

    fn positive_count(&self) -> usize {
        self.literals.iter().filter(|l| l.is_positive()).count()
    }

    fn negative_count(&self) -> usize {
        self.literals.len() - self.positive_count()
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{:?}", lit)?;
        }
        write!(f, ")")
    }
}

/// A CNF formula: clause list over a declared variable universe.
///
/// Syntactic-class predicates are pure functions of the clause list and
/// are recomputed on every call, never cached.
#[derive(Clone, PartialEq, Eq)]
pub struct CnfFormula {
    universe_size: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(universe_size: u32, clauses: Vec<Clause>) -> Result<CnfFormula> {
        for clause in &clauses {
            let max = clause.max_var();
            if max > universe_size {
                return Err(Error::VariableOutOfUniverse {
                    var: max,
                    universe: universe_size,
                });
            }
        }
        Ok(CnfFormula {
            universe_size,
            clauses,
        })
    }

    pub fn empty(universe_size: u32) -> CnfFormula {
        CnfFormula {
            universe_size,
            clauses: Vec::new(),
        }
    }

    pub fn universe_size(&self) -> u32 {
        self.universe_size
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Total literal occurrences plus the universe, a rough size measure.
    pub fn size(&self) -> usize {
        self.universe_size as usize + self.clauses.iter().map(|c| c.len()).sum::<usize>()
    }

    /// At most two literals per clause.
    pub fn is_krom(&self) -> bool {
        self.clauses.iter().all(|c| c.len() <= 2)
    }

    /// At most one positive literal per clause.
    pub fn is_horn(&self) -> bool {
        self.clauses.iter().all(|c| c.positive_count() <= 1)
    }

    /// At most one negative literal per clause.
    pub fn is_dual_horn(&self) -> bool {
        self.clauses.iter().all(|c| c.negative_count() <= 1)
    }

    /// Positive literals only.
    pub fn is_positive(&self) -> bool {
        self.clauses.iter().all(|c| c.negative_count() == 0)
    }

    /// Negative literals only.
    pub fn is_negative(&self) -> bool {
        self.clauses.iter().all(|c| c.positive_count() == 0)
    }

    /// True iff every clause contains a literal satisfied by `a`.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool> {
        if a.universe_size() != self.universe_size {
            return Err(Error::UniverseMismatch {
                left: self.universe_size,
                right: a.universe_size(),
            });
        }
        Ok(self
            .clauses
            .iter()
            .all(|c| c.literals.iter().any(|l| l.satisfied_by(a))))
    }

    /// Per-clause (positive-mask, negative-mask) pairs for mask evaluation.
    /// Only valid for universes of at most 63 variables.
    pub fn clause_masks(&self) -> Vec<(u64, u64)> {
        assert!(self.universe_size < 64);
        self.clauses
            .iter()
            .map(|c| {
                let mut pos = 0u64;
                let mut neg = 0u64;
                for lit in &c.literals {
                    let bit = 1u64 << (lit.var().id() - 1);
                    if lit.is_positive() {
                        pos |= bit;
                    } else {
                        neg |= bit;
                    }
                }
                (pos, neg)
            })
            .collect()
    }

    /// Exactly the satisfying assignments, in ascending lexicographic order
    /// of bit vectors with variable 1 as the most significant bit.
    pub fn all_models(&self) -> Result<Vec<Assignment>> {
        self.all_models_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn all_models_capped(&self, cap: u32) -> Result<Vec<Assignment>> {
        if self.universe_size > cap {
            return Err(Error::EnumerationCap {
                universe: self.universe_size,
                cap,
            });
        }
        let n = self.universe_size;
        let masks = self.clause_masks();
        let mut models = Vec::new();
        for lex in 0u64..(1u64 << n) {
            let mask = reverse_mask(lex, n);
            if mask_satisfies(mask, &masks) {
                models.push(Assignment::from_mask(n, mask));
            }
        }
        Ok(models)
    }

    /// Visits the bit mask of every model (variable i at bit i-1), in
    /// unspecified order. The workhorse behind the brute-force oracles.
    pub fn for_each_model_mask<F: FnMut(u64)>(&self, cap: u32, mut f: F) -> Result<()> {
        if self.universe_size > cap {
            return Err(Error::EnumerationCap {
                universe: self.universe_size,
                cap,
            });
        }
        let masks = self.clause_masks();
        for mask in 0u64..(1u64 << self.universe_size) {
            if mask_satisfies(mask, &masks) {
                f(mask);
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cnf[n={}] ", self.universe_size)?;
        f.debug_list().entries(self.clauses.iter()).finish()
    }
}

fn mask_satisfies(mask: u64, clause_masks: &[(u64, u64)]) -> bool {
    clause_masks
        .iter()
        .all(|&(pos, neg)| (mask & pos) != 0 || (!mask & neg) != 0)
}

/// Maps a lexicographic counter (variable 1 at the most significant of `n`
/// bits) to the internal mask convention (variable i at bit i-1).
fn reverse_mask(lex: u64, n: u32) -> u64 {
    if n == 0 {
        return 0;
    }
    lex.reverse_bits() >> (64 - n)
}

/// The set of variables assigned true within a fixed universe.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    universe_size: u32,
    true_set: BTreeSet<u32>,
}

impl Assignment {
    pub fn new<I: IntoIterator<Item = u32>>(universe_size: u32, true_vars: I) -> Result<Assignment> {
        let true_set: BTreeSet<u32> = true_vars.into_iter().collect();
        if let Some(&var) = true_set.iter().next_back() {
            if var > universe_size || true_set.contains(&0) {
                return Err(Error::VariableOutOfUniverse {
                    var,
                    universe: universe_size,
                });
            }
        }
        Ok(Assignment {
            universe_size,
            true_set,
        })
    }

    pub fn empty(universe_size: u32) -> Assignment {
        Assignment {
            universe_size,
            true_set: BTreeSet::new(),
        }
    }

    pub fn full(universe_size: u32) -> Assignment {
        Assignment {
            universe_size,
            true_set: (1..=universe_size).collect(),
        }
    }

    pub fn from_mask(universe_size: u32, mask: u64) -> Assignment {
        debug_assert!(universe_size < 64);
        let true_set = (1..=universe_size)
            .filter(|&v| mask & (1u64 << (v - 1)) != 0)
            .collect();
        Assignment {
            universe_size,
            true_set,
        }
    }

    pub fn mask(&self) -> u64 {
        assert!(self.universe_size < 64);
        self.true_set
            .iter()
            .fold(0u64, |m, &v| m | (1u64 << (v - 1)))
    }

    pub fn universe_size(&self) -> u32 {
        self.universe_size
    }

    pub fn true_set(&self) -> &BTreeSet<u32> {
        &self.true_set
    }

    pub fn contains(&self, var: Variable) -> bool {
        self.true_set.contains(&var.id())
    }

    pub fn cardinality(&self) -> u32 {
        self.true_set.len() as u32
    }

    /// Symmetric difference of the true sets; defined only on a shared universe.
    pub fn delta(&self, other: &Assignment) -> Result<BTreeSet<u32>> {
        if self.universe_size != other.universe_size {
            return Err(Error::UniverseMismatch {
                left: self.universe_size,
                right: other.universe_size,
            });
        }
        Ok(self
            .true_set
            .symmetric_difference(&other.true_set)
            .copied()
            .collect())
    }

    pub fn delta_size(&self, other: &Assignment) -> Result<u32> {
        Ok(self.delta(other)?.len() as u32)
    }

    pub fn is_subset_of(&self, other: &Assignment) -> bool {
        self.true_set.is_subset(&other.true_set)
    }

    /// The same true set embedded in a larger universe.
    pub fn extend_universe(&self, universe_size: u32) -> Assignment {
        assert!(universe_size >= self.universe_size);
        Assignment {
            universe_size,
            true_set: self.true_set.clone(),
        }
    }

    /// The true set restricted to variables up to `universe_size`.
    pub fn restrict_universe(&self, universe_size: u32) -> Assignment {
        Assignment {
            universe_size,
            true_set: self
                .true_set
                .iter()
                .copied()
                .filter(|&v| v <= universe_size)
                .collect(),
        }
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.true_set.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "x{}", v)?;
        }
        write!(f, "}}")
    }
}

/// An explicit order x_1 > x_2 > ... over distinct variables; may cover the
/// whole universe or only a prefix of interest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableOrder {
    vars: Vec<Variable>,
}

impl VariableOrder {
    pub fn new(vars: Vec<Variable>) -> Result<VariableOrder> {
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.id()) {
                return Err(Error::contract(format!(
                    "duplicate variable x{} in order",
                    v.id()
                )));
            }
        }
        Ok(VariableOrder { vars })
    }

    pub fn from_ids(ids: &[u32]) -> Result<VariableOrder> {
        VariableOrder::new(ids.iter().map(|&i| Variable::new(i)).collect())
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn check_within(&self, universe_size: u32) -> Result<()> {
        for v in &self.vars {
            if v.id() > universe_size {
                return Err(Error::VariableOutOfUniverse {
                    var: v.id(),
                    universe: universe_size,
                });
            }
        }
        Ok(())
    }

    /// True iff the order covers every variable of the universe.
    pub fn covers(&self, universe_size: u32) -> bool {
        self.vars.len() as u32 == universe_size && self.check_within(universe_size).is_ok()
    }
}

/// An undirected graph without self-loops, vertices numbered 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: u32,
    edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn new(vertex_count: u32) -> Graph {
        Graph {
            vertex_count,
            edges: BTreeSet::new(),
        }
    }

    pub fn with_edges(vertex_count: u32, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut g = Graph::new(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<()> {
        if u == v {
            return Err(Error::contract(format!("self-loop on vertex {}", u)));
        }
        if u == 0 || v == 0 || u > self.vertex_count || v > self.vertex_count {
            return Err(Error::VariableOutOfUniverse {
                var: u.max(v),
                universe: self.vertex_count,
            });
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<(u32, u32)> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}
