//! Algebraic toolkit for constraint languages: polymorphism checks,
//! closure-property reports, frozen and irredundant analysis, and the
//! complexity classification of Krom languages for cardinality-minimal
//! satisfiability.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::{BooleanRelation, ConstraintFormula, Variable};
use crate::optsat::{width2affine_card_min_sat, OptAnswer};
use crate::sat::horn_min_model;

/// A total Boolean function given by its truth table; argument i sits at
/// bit i-1 of the table index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolFun {
    arity: u32,
    table: Vec<bool>,
}

impl BoolFun {
    pub fn new(arity: u32, table: Vec<bool>) -> Result<BoolFun> {
        if table.len() != 1 << arity {
            return Err(Error::contract(format!(
                "truth table of arity {} needs {} entries, got {}",
                arity,
                1 << arity,
                table.len()
            )));
        }
        Ok(BoolFun { arity, table })
    }

    pub fn from_fn<F: Fn(&[bool]) -> bool>(arity: u32, f: F) -> BoolFun {
        let table = (0..1u32 << arity)
            .map(|idx| {
                let args: Vec<bool> = (0..arity).map(|i| idx & (1 << i) != 0).collect();
                f(&args)
            })
            .collect();
        BoolFun { arity, table }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn apply(&self, args: &[bool]) -> bool {
        debug_assert_eq!(args.len() as u32, self.arity);
        let idx = args
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | ((b as usize) << i));
        self.table[idx]
    }

    pub fn and2() -> BoolFun {
        BoolFun::from_fn(2, |a| a[0] && a[1])
    }

    pub fn or2() -> BoolFun {
        BoolFun::from_fn(2, |a| a[0] || a[1])
    }

    pub fn xor3() -> BoolFun {
        BoolFun::from_fn(3, |a| a[0] ^ a[1] ^ a[2])
    }

    pub fn maj3() -> BoolFun {
        BoolFun::from_fn(3, |a| (a[0] && a[1]) || (a[0] && a[2]) || (a[1] && a[2]))
    }

    pub fn projection(arity: u32, coord: u32) -> BoolFun {
        BoolFun::from_fn(arity, move |a| a[coord as usize])
    }
}

/// True iff applying `f` coordinate-wise to every m-tuple of tuples of `r`
/// lands back in `r`.
pub fn is_polymorphism(f: &BoolFun, r: &BooleanRelation) -> bool {
    let tuples: Vec<&Vec<bool>> = r.tuples().iter().collect();
    if tuples.is_empty() {
        return true;
    }
    let m = f.arity() as usize;
    let k = r.arity() as usize;
    let mut pick = vec![0usize; m];
    let mut args = vec![false; m];
    loop {
        let image: Vec<bool> = (0..k)
            .map(|c| {
                for j in 0..m {
                    args[j] = tuples[pick[j]][c];
                }
                f.apply(&args)
            })
            .collect();
        if !r.contains(&image) {
            return false;
        }
        // Odometer over the m chosen tuples.
        let mut j = 0;
        loop {
            if j == m {
                return true;
            }
            pick[j] += 1;
            if pick[j] < tuples.len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

/// Closure properties of a relation or language, each matching its
/// polymorphism characterization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub horn: bool,
    pub dual_horn: bool,
    pub affine: bool,
    pub krom: bool,
    pub width2affine: bool,
    pub zero_valid: bool,
    pub one_valid: bool,
}

/// Computes the closure flags by direct pair and triple iteration over the
/// tuples. Deliberately does not go through [`is_polymorphism`], so the two
/// code paths can cross-check each other.
pub fn closure_report(r: &BooleanRelation) -> ClosureReport {
    let tuples: Vec<&Vec<bool>> = r.tuples().iter().collect();
    let k = r.arity() as usize;
    let mut horn = true;
    let mut dual_horn = true;
    for a in &tuples {
        for b in &tuples {
            let and: Vec<bool> = (0..k).map(|c| a[c] && b[c]).collect();
            let or: Vec<bool> = (0..k).map(|c| a[c] || b[c]).collect();
            horn &= r.contains(&and);
            dual_horn &= r.contains(&or);
        }
    }
    let mut affine = true;
    let mut krom = true;
    for a in &tuples {
        for b in &tuples {
            for c3 in &tuples {
                let xor: Vec<bool> = (0..k).map(|c| a[c] ^ b[c] ^ c3[c]).collect();
                let maj: Vec<bool> = (0..k)
                    .map(|c| (a[c] && b[c]) || (a[c] && c3[c]) || (b[c] && c3[c]))
                    .collect();
                affine &= r.contains(&xor);
                krom &= r.contains(&maj);
            }
        }
    }
    ClosureReport {
        horn,
        dual_horn,
        affine,
        krom,
        width2affine: affine && krom,
        zero_valid: r.contains(&vec![false; k]),
        one_valid: r.contains(&vec![true; k]),
    }
}

/// A language's flag is the conjunction over its relations.
pub fn language_report<'a, I: IntoIterator<Item = &'a BooleanRelation>>(rels: I) -> ClosureReport {
    let mut acc = ClosureReport {
        horn: true,
        dual_horn: true,
        affine: true,
        krom: true,
        width2affine: true,
        zero_valid: true,
        one_valid: true,
    };
    for r in rels {
        let rep = closure_report(r);
        acc.horn &= rep.horn;
        acc.dual_horn &= rep.dual_horn;
        acc.affine &= rep.affine;
        acc.krom &= rep.krom;
        acc.width2affine &= rep.width2affine;
        acc.zero_valid &= rep.zero_valid;
        acc.one_valid &= rep.one_valid;
    }
    acc
}

/// The common bit at position `pos` (0-based) if all tuples agree there.
pub fn is_frozen(r: &BooleanRelation, pos: u32) -> Result<Option<bool>> {
    if r.is_empty() {
        return Err(Error::contract("frozen positions of an empty relation"));
    }
    if pos >= r.arity() {
        return Err(Error::contract(format!(
            "position {} out of range for arity {}",
            pos,
            r.arity()
        )));
    }
    let mut iter = r.tuples().iter();
    let first = iter.next().expect("non-empty")[pos as usize];
    for t in iter {
        if t[pos as usize] != first {
            return Ok(None);
        }
    }
    Ok(Some(first))
}

/// False iff some coordinate pair is equal across all tuples, or some
/// coordinate is unconstrained (flipping it maps the relation into itself).
pub fn is_irredundant(r: &BooleanRelation) -> bool {
    let k = r.arity() as usize;
    for i in 0..k {
        for j in (i + 1)..k {
            if r.tuples().iter().all(|t| t[i] == t[j]) {
                return false;
            }
        }
    }
    for i in 0..k {
        let unconstrained = r.tuples().iter().all(|t| {
            let mut flipped = t.clone();
            flipped[i] = !flipped[i];
            r.contains(&flipped)
        });
        if unconstrained {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictClass {
    Polynomial,
    Theta2Complete,
    OutsideScope,
}

/// Classification outcome for a constraint language, with the closure
/// facts that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub class: VerdictClass,
    pub report: ClosureReport,
    pub reason: String,
}

/// Classifies cardinality-minimal satisfiability over a Krom constraint
/// language: polynomial when the language is width-2 affine or Horn,
/// otherwise hard; non-Krom languages are out of the theorem's scope.
pub fn classify_language(language: &[BooleanRelation]) -> Result<Verdict> {
    for r in language {
        if r.is_empty() {
            return Err(Error::contract("classification requires non-empty relations"));
        }
    }
    let report = language_report(language.iter());
    let (class, reason) = if !report.krom {
        (
            VerdictClass::OutsideScope,
            "language is not Krom (not closed under majority)".to_string(),
        )
    } else if report.width2affine {
        (
            VerdictClass::Polynomial,
            "width-2 affine (closed under both ternary xor and majority)".to_string(),
        )
    } else if report.horn {
        (
            VerdictClass::Polynomial,
            "Horn (closed under conjunction)".to_string(),
        )
    } else {
        (
            VerdictClass::Theta2Complete,
            "Krom but neither width-2 affine nor Horn".to_string(),
        )
    };
    Ok(Verdict {
        class,
        report,
        reason,
    })
}

/// Best-effort name of the applicable hardness construction for a
/// Theta2-complete language; `None` when finer identification would need
/// clone-lattice data beyond the implemented closure tests.
pub fn hard_case_construction(language: &[BooleanRelation]) -> Option<String> {
    let report = language_report(language.iter());
    if language.iter().any(|r| *r == r4p()) {
        return Some("contains the literal R4p relation; the direct pairing gadget applies".into());
    }
    if report.dual_horn && report.one_valid {
        let has_s = language.iter().any(|r| !closure_report(r).zero_valid);
        let has_r = language.iter().any(|r| !closure_report(r).horn);
        if has_s && has_r {
            return Some(
                "1-valid dual-Horn language with a non-0-valid and a non-Horn member; \
                 the two-branch witness construction applies"
                    .into(),
            );
        }
    }
    None
}

/// The arity-4 relation defined by (x1 | x2) & (x1 != x3) & (x2 != x4),
/// computed by enumeration.
pub fn r4p() -> BooleanRelation {
    let tuples = (0u32..16).filter_map(|idx| {
        let bit = |i: u32| idx & (1 << i) != 0;
        let (x1, x2, x3, x4) = (bit(0), bit(1), bit(2), bit(3));
        ((x1 || x2) && (x1 != x3) && (x2 != x4)).then(|| vec![x1, x2, x3, x4])
    });
    BooleanRelation::new(4, tuples).expect("arity 4")
}

/// An atomic width-2 affine constraint over relation positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum W2aAtom {
    Unary { pos: u32, value: bool },
    Eq(u32, u32),
    Neq(u32, u32),
}

/// Maximum arity accepted by the definability search.
pub const W2A_SEARCH_ARITY_CAP: u32 = 6;

/// Expresses a width-2 affine relation as unary, equality, and disequality
/// atoms over its positions, by exhaustive definability search: every atom
/// valid on all tuples is collected, and the conjunction is checked to
/// define exactly the relation.
pub fn width2affine_atoms(r: &BooleanRelation) -> Result<Vec<W2aAtom>> {
    if r.arity() > W2A_SEARCH_ARITY_CAP {
        return Err(Error::Budget {
            what: format!("definability search over arity {}", r.arity()),
            cap: W2A_SEARCH_ARITY_CAP as u64,
        });
    }
    if r.is_empty() {
        return Err(Error::contract("definability search over an empty relation"));
    }
    let k = r.arity();
    let mut atoms = Vec::new();
    for i in 0..k {
        if let Some(v) = is_frozen(r, i)? {
            atoms.push(W2aAtom::Unary { pos: i, value: v });
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if r.tuples().iter().all(|t| t[i as usize] == t[j as usize]) {
                atoms.push(W2aAtom::Eq(i, j));
            }
            if r.tuples().iter().all(|t| t[i as usize] != t[j as usize]) {
                atoms.push(W2aAtom::Neq(i, j));
            }
        }
    }
    // The collected atoms hold on every tuple; the conjunction defines the
    // relation exactly iff nothing outside the relation satisfies them all.
    for idx in 0u64..(1 << k) {
        let tuple: Vec<bool> = (0..k).map(|i| idx & (1 << i) != 0).collect();
        let satisfies = atoms.iter().all(|atom| match *atom {
            W2aAtom::Unary { pos, value } => tuple[pos as usize] == value,
            W2aAtom::Eq(i, j) => tuple[i as usize] == tuple[j as usize],
            W2aAtom::Neq(i, j) => tuple[i as usize] != tuple[j as usize],
        });
        if satisfies != r.contains(&tuple) {
            return Err(Error::contract(
                "relation is not definable by unary, equality, and disequality constraints",
            ));
        }
    }
    Ok(atoms)
}

/// Polynomial-route CardMinSat for formulas over a polynomial-verdict
/// language: width-2 affine languages compile to the cluster algorithm,
/// Horn languages to unit propagation on the prime-implicate CNF.
pub fn cardmin_polynomial(cf: &ConstraintFormula, query_var: Variable) -> Result<OptAnswer> {
    let rels: Vec<&BooleanRelation> = cf.relations().map(|(_, r)| r).collect();
    let report = language_report(rels.iter().copied());
    if report.width2affine {
        let atoms: Vec<Vec<W2aAtom>> = rels
            .iter()
            .map(|r| width2affine_atoms(r))
            .collect::<Result<_>>()?;
        let mut compiled = ConstraintFormula::new(cf.universe_size());
        let t = compiled.add_relation("T", BooleanRelation::constant(true))?;
        let f = compiled.add_relation("F", BooleanRelation::constant(false))?;
        let eq = compiled.add_relation("EQ", BooleanRelation::equality())?;
        let neq = compiled.add_relation("NEQ", BooleanRelation::disequality())?;
        for (rel_idx, vars) in cf.applications() {
            for atom in &atoms[*rel_idx] {
                match *atom {
                    W2aAtom::Unary { pos, value } => {
                        let rel = if value { t } else { f };
                        compiled.add_application(rel, vec![vars[pos as usize]])?;
                    }
                    W2aAtom::Eq(i, j) => compiled
                        .add_application(eq, vec![vars[i as usize], vars[j as usize]])?,
                    W2aAtom::Neq(i, j) => compiled
                        .add_application(neq, vec![vars[i as usize], vars[j as usize]])?,
                }
            }
        }
        return width2affine_card_min_sat(&compiled, query_var);
    }
    if report.horn {
        let cnf = cf.to_cnf();
        debug_assert!(cnf.is_horn());
        return Ok(match horn_min_model(&cnf)? {
            None => OptAnswer {
                answer: false,
                optimum: None,
                witness: None,
            },
            Some(model) => {
                let answer = model.contains(query_var);
                OptAnswer {
                    answer,
                    optimum: Some(model.cardinality()),
                    witness: answer.then_some(model),
                }
            }
        });
    }
    Err(Error::contract(
        "language is neither width-2 affine nor Horn; no polynomial route",
    ))
}

/// Exhaustively checks that frozen positions are exactly the constant
/// projections; used as the independent cross-path in tests.
pub fn constant_projection(r: &BooleanRelation, pos: u32) -> Option<bool> {
    let values: BTreeSet<bool> = r.tuples().iter().map(|t| t[pos as usize]).collect();
    if values.len() == 1 {
        values.into_iter().next()
    } else {
        None
    }
}

/// Helper used by tests and the constraint-formula brute-force oracle:
/// minimal-cardinality query answered by scanning the model masks of the
/// compiled CNF.
pub fn brute_force_cardmin_constraints(
    cf: &ConstraintFormula,
    query_var: Variable,
) -> Result<OptAnswer> {
    let cnf = cf.to_cnf();
    let q = crate::optsat::OptQuery::new(cnf, query_var)?;
    crate::optsat::brute_force_card_min(&q)
}
