//! Relation calculus on finite algebras and the Shifting Lemma family.
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! * [`relation`]: finite binary relations with composition, opposite and
//!   the usual predicates, including difunctionality and positivity;
//! * [`algebra`]: finite algebras from operation tables, compatible
//!   relations and congruence lattices;
//! * [`constructions`]: the relations built to refute the Shifting Lemma
//!   from a non-symmetric reflexive relation, or from one with `EE° ≠ E°E`;
//! * [`checks`]: Shifting Lemma decision procedures, permutability and the
//!   relational characterizations of 2- and 3-permutability;
//! * [`enumerate`]: bounded exhaustive enumeration of relation classes;
//! * [`terms`]: ternary clone generation and term-condition searches.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod checks;
pub mod constructions;
pub mod corpus;
pub mod enumerate;
pub mod relation;
pub mod terms;

pub use algebra::{Algebra, AlgebraError, Operation, PairedObject, Signature};
pub use checks::{shifting_lemma, shifting_lemma_forall, CheckError, ForallOutcome, SlResult, Verdict};
pub use constructions::{ConstructionError, Quadruple, SlInstance};
pub use enumerate::{Budget, ClassKind, Inconclusive, RelationClass};
pub use relation::{compose, Carrier, Relation, RelationError};
pub use terms::{TermFunction, TermSearch, TernaryClone};
