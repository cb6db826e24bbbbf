//! Bounded exhaustive enumeration of class-constrained relations.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{compatible_close_between, extend_closed, Algebra, AlgebraError};
use crate::relation::{compose, Relation};

/// Limits for exhaustive searches. Exceeding any of them yields an explicit
/// inconclusive verdict, never a silent pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest carrier on which relations are enumerated.
    pub max_carrier: usize,
    /// Largest number of relations (or raw candidates) one enumeration may
    /// produce.
    pub max_relations: usize,
    /// Largest number of `(R, S, T)` triples a quantified check may scan.
    pub max_triples: u64,
    /// Largest ternary clone generated during term searches.
    pub clone_size: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_carrier: 4,
            max_relations: 1 << 16,
            max_triples: 20_000_000,
            clone_size: 5000,
        }
    }
}

/// Which budget ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inconclusive {
    CarrierTooLarge { size: usize, cap: usize },
    Relations { limit: usize },
    Triples { needed: u64, limit: u64 },
    Clone { limit: usize },
}

impl fmt::Display for Inconclusive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inconclusive::CarrierTooLarge { size, cap } => {
                write!(f, "carrier size {size} exceeds enumeration cap {cap}")
            }
            Inconclusive::Relations { limit } => write!(f, "more than {limit} relations"),
            Inconclusive::Triples { needed, limit } => {
                write!(f, "{needed} triples exceed the limit of {limit}")
            }
            Inconclusive::Clone { limit } => write!(f, "clone larger than {limit} functions"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnumError {
    Budget(Inconclusive),
    Algebra(AlgebraError),
}

impl fmt::Display for EnumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumError::Budget(b) => write!(f, "enumeration refused: {b}"),
            EnumError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for EnumError {}

impl From<AlgebraError> for EnumError {
    fn from(e: AlgebraError) -> Self {
        EnumError::Algebra(e)
    }
}

impl From<Inconclusive> for EnumError {
    fn from(e: Inconclusive) -> Self {
        EnumError::Budget(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKind {
    Arbitrary,
    Reflexive,
    ReflexivePositive,
    Equivalence,
}

/// The hypothesis placed on one of `R`, `S`, `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationClass {
    pub kind: ClassKind,
    /// Restrict to relations compatible with the algebra's operations.
    pub compatible: bool,
}

impl RelationClass {
    pub const fn compatible(kind: ClassKind) -> Self {
        RelationClass { kind, compatible: true }
    }

    pub const ARBITRARY: Self = Self::compatible(ClassKind::Arbitrary);
    pub const REFLEXIVE: Self = Self::compatible(ClassKind::Reflexive);
    pub const REFLEXIVE_POSITIVE: Self = Self::compatible(ClassKind::ReflexivePositive);
    pub const EQUIVALENCE: Self = Self::compatible(ClassKind::Equivalence);

    /// Membership test through the relation predicates.
    pub fn admits(&self, alg: &Algebra, rel: &Relation) -> Result<bool, AlgebraError> {
        if self.compatible && !alg.is_compatible(rel)? {
            return Ok(false);
        }
        Ok(match self.kind {
            ClassKind::Arbitrary => true,
            ClassKind::Reflexive => rel.is_reflexive()?,
            ClassKind::ReflexivePositive => rel.is_reflexive()? && rel.is_positive()?,
            ClassKind::Equivalence => rel.is_equivalence()?,
        })
    }
}

fn check_carrier(size: usize, budget: &Budget) -> Result<(), Inconclusive> {
    if size > budget.max_carrier {
        return Err(Inconclusive::CarrierTooLarge {
            size,
            cap: budget.max_carrier,
        });
    }
    Ok(())
}

/// All subalgebras of `A × B` containing `seed`, in lexicographic order.
///
/// Breadth-first over closures: every such subalgebra is reached by adding
/// its pairs one at a time to the closure of `seed`.
pub fn compatible_relations_above(
    a: &Algebra,
    b: &Algebra,
    seed: &Relation,
    budget: &Budget,
) -> Result<Vec<Relation>, EnumError> {
    check_carrier(a.size(), budget)?;
    check_carrier(b.size(), budget)?;
    let start = compatible_close_between(a, b, seed)?;
    let mut seen = BTreeSet::new();
    seen.insert(start.clone());
    let mut queue = alloc::vec![start];
    while let Some(rel) = queue.pop() {
        for x in a.carrier().elements() {
            for y in b.carrier().elements() {
                if rel.contains(x, y) {
                    continue;
                }
                let next = extend_closed(a, b, &rel, (x, y));
                if !seen.contains(&next) {
                    if seen.len() >= budget.max_relations {
                        return Err(Inconclusive::Relations {
                            limit: budget.max_relations,
                        }
                        .into());
                    }
                    seen.insert(next.clone());
                    queue.push(next);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All compatible relations from `A` to `B` (subalgebras of `A × B`).
pub fn compatible_relations_between(a: &Algebra, b: &Algebra, budget: &Budget) -> Result<Vec<Relation>, EnumError> {
    compatible_relations_above(a, b, &Relation::empty(a.carrier(), b.carrier()), budget)
}

/// All relations on `A`'s carrier, optionally compatible, of the given
/// class, in lexicographic order without duplicates.
pub fn enumerate_class(alg: &Algebra, class: RelationClass, budget: &Budget) -> Result<Vec<Relation>, EnumError> {
    check_carrier(alg.size(), budget)?;
    let c = alg.carrier();
    if !class.compatible {
        return enumerate_unconstrained(alg, class.kind, budget);
    }
    match class.kind {
        ClassKind::Arbitrary => compatible_relations_between(alg, alg, budget),
        ClassKind::Reflexive => compatible_relations_above(alg, alg, &Relation::diagonal(c), budget),
        ClassKind::Equivalence => Ok(alg.all_congruences()),
        ClassKind::ReflexivePositive => {
            let us = compatible_relations_between(alg, alg, budget)?;
            Ok(positive_reflexive_from(us.iter()))
        }
    }
}

/// Reflexive composites `U°U`, deduplicated and sorted.
fn positive_reflexive_from<'a>(us: impl Iterator<Item = &'a Relation>) -> Vec<Relation> {
    let mut out = BTreeSet::new();
    for u in us {
        let p = compose(&u.opposite(), u).expect("U°U is composable");
        if p.is_reflexive().expect("square") {
            out.insert(p);
        }
    }
    out.into_iter().collect()
}

fn enumerate_unconstrained(alg: &Algebra, kind: ClassKind, budget: &Budget) -> Result<Vec<Relation>, EnumError> {
    let c = alg.carrier();
    let cells = c.size() * c.size();
    let candidates = 1u64 << cells;
    if candidates > budget.max_relations as u64 {
        return Err(Inconclusive::Relations {
            limit: budget.max_relations,
        }
        .into());
    }
    let all = (0..candidates).map(|m| Relation::from_mask(c, c, m));
    let mut out: Vec<Relation> = match kind {
        ClassKind::Arbitrary => all.collect(),
        ClassKind::Reflexive => all.filter(|r| r.is_reflexive().expect("square")).collect(),
        ClassKind::Equivalence => all.filter(|r| r.is_equivalence().expect("square")).collect(),
        ClassKind::ReflexivePositive => {
            let us: Vec<Relation> = all.collect();
            positive_reflexive_from(us.iter())
        }
    };
    out.sort();
    Ok(out)
}
