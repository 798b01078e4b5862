//! Solvers and reductions for cardinality-optimal satisfiability.
//!
//! The crate decides whether an atom is true in a cardinality-minimal
//! (or -maximal, or lexicographically maximal) model of a CNF formula,
//! exposes the polynomial special cases (Horn, 2-SAT, width-2 affine),
//! and builds the reasoning problems that reduce to and from these
//! questions: Dalal and Satoh belief revision, propositional abduction,
//! and the polymorphism-based classification of Krom constraint
//! languages. Every oracle-guided algorithm is paired with a brute-force
//! counterpart so the two can be cross-validated at desk scale.

pub mod abduction;
pub mod clones;
pub mod error;
pub mod gen;
pub mod harness;
pub mod io;
pub mod logic;
pub mod optsat;
pub mod reductions;
pub mod revision;
pub mod sat;

pub use error::{Error, Result};
