//! The Shifting Lemma family and the relational characterizations of
//! 2- and 3-permutability, as decision procedures that return the least
//! counterexample on failure.

use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Algebra, AlgebraError};
use crate::constructions::Quadruple;
use crate::enumerate::{compatible_relations_between, enumerate_class, Budget, EnumError, Inconclusive, RelationClass};
use crate::relation::{compose, Relation, RelationError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckError {
    Relation(RelationError),
    Algebra(AlgebraError),
    /// The hypothesis `R ∧ S ≤ T` does not hold.
    MeetNotBelowT,
    NotEquivalence(&'static str),
    NotReflexive(&'static str),
    NotCompatible(&'static str),
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Relation(e) => write!(f, "{e}"),
            CheckError::Algebra(e) => write!(f, "{e}"),
            CheckError::MeetNotBelowT => write!(f, "precondition R ∧ S ≤ T fails"),
            CheckError::NotEquivalence(w) => write!(f, "{w} must be an equivalence relation"),
            CheckError::NotReflexive(w) => write!(f, "{w} must be reflexive"),
            CheckError::NotCompatible(w) => write!(f, "{w} must be compatible"),
        }
    }
}

impl core::error::Error for CheckError {}

impl From<RelationError> for CheckError {
    fn from(e: RelationError) -> Self {
        CheckError::Relation(e)
    }
}

impl From<AlgebraError> for CheckError {
    fn from(e: AlgebraError) -> Self {
        CheckError::Algebra(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlResult {
    Holds,
    /// The lexicographically least `(x, y, u, v)` meeting every premise
    /// with `(u, v) ∉ T`.
    Violated(Quadruple),
}

impl SlResult {
    pub fn holds(&self) -> bool {
        matches!(self, SlResult::Holds)
    }
}

fn common_carrier(r: &Relation, s: &Relation, t: &Relation) -> Result<(), RelationError> {
    for other in [s, t] {
        if other.shape() != r.shape() || !r.is_square() {
            return Err(RelationError::ShapeMismatch {
                op: "shifting_lemma",
                left: r.shape(),
                right: other.shape(),
            });
        }
    }
    Ok(())
}

/// Scans every `(x, y, u, v)` with `(x, y) ∈ R ∧ T`, `(x, u) ∈ S`,
/// `(y, v) ∈ S` and `(u, v) ∈ R` for one with `(u, v) ∉ T`.
pub fn shifting_lemma(r: &Relation, s: &Relation, t: &Relation) -> Result<SlResult, CheckError> {
    common_carrier(r, s, t)?;
    if !r.meet(s)?.leq(t)? {
        return Err(CheckError::MeetNotBelowT);
    }
    let rt = r.meet(t)?;
    for (x, y) in rt.pairs() {
        for u in s.image(x) {
            for v in s.image(y) {
                if r.contains(u, v) && !t.contains(u, v) {
                    return Ok(SlResult::Violated([x, y, u, v]));
                }
            }
        }
    }
    Ok(SlResult::Holds)
}

/// Whether `SL(R, S, R ∧ T)` implies `SL(R, S, T)` on this instance.
pub fn shifting_principle_reduction(r: &Relation, s: &Relation, t: &Relation) -> Result<bool, CheckError> {
    let narrowed = shifting_lemma(r, s, &r.meet(t)?)?;
    let original = shifting_lemma(r, s, t)?;
    Ok(!narrowed.holds() || original.holds())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForallOutcome {
    Holds {
        triples: u64,
    },
    Violated {
        r: Relation,
        s: Relation,
        t: Relation,
        quadruple: Quadruple,
    },
    Inconclusive(Inconclusive),
}

impl ForallOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, ForallOutcome::Holds { .. })
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, ForallOutcome::Violated { .. })
    }
}

fn enumerate_or_budget(
    alg: &Algebra,
    class: RelationClass,
    budget: &Budget,
) -> Result<Result<Vec<Relation>, Inconclusive>, CheckError> {
    match enumerate_class(alg, class, budget) {
        Ok(v) => Ok(Ok(v)),
        Err(EnumError::Budget(b)) => Ok(Err(b)),
        Err(EnumError::Algebra(e)) => Err(e.into()),
    }
}

/// Runs the Shifting Lemma over every triple of relations of the given
/// classes on `alg` with `R ∧ S ≤ T`. Triples are scanned in
/// lexicographic order and the first violation is returned.
pub fn shifting_lemma_forall(
    alg: &Algebra,
    class_r: RelationClass,
    class_s: RelationClass,
    class_t: RelationClass,
    budget: &Budget,
) -> Result<ForallOutcome, CheckError> {
    let mut lists = Vec::with_capacity(3);
    for class in [class_r, class_s, class_t] {
        match enumerate_or_budget(alg, class, budget)? {
            Ok(v) => lists.push(v),
            Err(b) => return Ok(ForallOutcome::Inconclusive(b)),
        }
    }
    let (rs, ss, ts) = (&lists[0], &lists[1], &lists[2]);
    let needed = rs.len() as u64 * ss.len() as u64 * ts.len() as u64;
    if needed > budget.max_triples {
        return Ok(ForallOutcome::Inconclusive(Inconclusive::Triples {
            needed,
            limit: budget.max_triples,
        }));
    }
    let mut scanned = 0u64;
    for r in rs {
        for s in ss {
            let m = r.meet(s)?;
            // Every square satisfying the premises that do not mention T.
            let mut squares: Vec<Quadruple> = Vec::new();
            for (x, y) in r.pairs() {
                for u in s.image(x) {
                    for v in s.image(y) {
                        if r.contains(u, v) {
                            squares.push([x, y, u, v]);
                        }
                    }
                }
            }
            for t in ts {
                if !m.leq(t)? {
                    continue;
                }
                scanned += 1;
                let bad = squares
                    .iter()
                    .find(|&&[x, y, u, v]| t.contains(x, y) && !t.contains(u, v));
                if let Some(&quadruple) = bad {
                    return Ok(ForallOutcome::Violated {
                        r: r.clone(),
                        s: s.clone(),
                        t: t.clone(),
                        quadruple,
                    });
                }
            }
        }
    }
    Ok(ForallOutcome::Holds { triples: scanned })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PermutabilityKind {
    /// `RS = SR`.
    TwoPermute,
    /// `RSR = SRS` but `RS ≠ SR`.
    ThreePermute,
    Neither,
}

impl fmt::Display for PermutabilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PermutabilityKind::TwoPermute => "2-permute",
            PermutabilityKind::ThreePermute => "3-permute",
            PermutabilityKind::Neither => "neither",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutability {
    pub kind: PermutabilityKind,
    pub rs: Relation,
    pub sr: Relation,
    pub rsr: Relation,
    pub srs: Relation,
}

pub fn permutability(r: &Relation, s: &Relation) -> Result<Permutability, CheckError> {
    if !r.is_equivalence()? {
        return Err(CheckError::NotEquivalence("R"));
    }
    if !s.is_equivalence()? {
        return Err(CheckError::NotEquivalence("S"));
    }
    let rs = compose(r, s)?;
    let sr = compose(s, r)?;
    let rsr = compose(r, &sr)?;
    let srs = compose(s, &rs)?;
    let kind = if rs == sr {
        PermutabilityKind::TwoPermute
    } else if rsr == srs {
        PermutabilityKind::ThreePermute
    } else {
        PermutabilityKind::Neither
    };
    Ok(Permutability { kind, rs, sr, rsr, srs })
}

/// Outcome of a property quantified over a finite family of relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds {
        checked: usize,
    },
    /// The least relation breaking the property.
    Fails(Relation),
    Inconclusive(Inconclusive),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }
}

fn sweep(
    family: Result<Vec<Relation>, EnumError>,
    mut property: impl FnMut(&Relation) -> Result<bool, CheckError>,
) -> Result<Verdict, CheckError> {
    let family = match family {
        Ok(v) => v,
        Err(EnumError::Budget(b)) => return Ok(Verdict::Inconclusive(b)),
        Err(EnumError::Algebra(e)) => return Err(e.into()),
    };
    for rel in &family {
        if !property(rel)? {
            return Ok(Verdict::Fails(rel.clone()));
        }
    }
    Ok(Verdict::Holds { checked: family.len() })
}

/// `DD°D = D` for every compatible `D ⊆ A × B`.
pub fn difunctional_all(a: &Algebra, b: &Algebra, budget: &Budget) -> Result<Verdict, CheckError> {
    sweep(compatible_relations_between(a, b, budget), |d| Ok(d.is_difunctional()))
}

/// `DD°DD° = DD°` for every compatible `D ⊆ A × B`.
pub fn goursat_identity_all(a: &Algebra, b: &Algebra, budget: &Budget) -> Result<Verdict, CheckError> {
    sweep(compatible_relations_between(a, b, budget), |d| {
        let ddo = compose(d, &d.opposite())?;
        Ok(compose(&ddo, &ddo)? == ddo)
    })
}

/// Every reflexive compatible relation is an equivalence.
pub fn reflexive_are_equivalences(alg: &Algebra, budget: &Budget) -> Result<Verdict, CheckError> {
    sweep(enumerate_class(alg, RelationClass::REFLEXIVE, budget), |e| {
        Ok(e.is_equivalence()?)
    })
}

/// Every reflexive compatible relation of the form `U°U` with `U`
/// compatible is an equivalence.
pub fn positive_are_equivalences(alg: &Algebra, budget: &Budget) -> Result<Verdict, CheckError> {
    sweep(enumerate_class(alg, RelationClass::REFLEXIVE_POSITIVE, budget), |p| {
        Ok(p.is_equivalence()?)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EeProperties {
    /// `EE°` is an equivalence relation.
    pub ee_op_is_equivalence: bool,
    /// `EE° = E°E`.
    pub ee_op_equals_op_e: bool,
    /// Reflexive positive compatible relations are equivalences.
    pub positive_are_equivalences: Verdict,
}

impl EeProperties {
    pub fn all_true(&self) -> bool {
        self.ee_op_is_equivalence && self.ee_op_equals_op_e && self.positive_are_equivalences.holds()
    }
}

pub fn ee_properties(alg: &Algebra, e: &Relation, budget: &Budget) -> Result<EeProperties, CheckError> {
    if !alg.is_compatible(e)? {
        return Err(CheckError::NotCompatible("E"));
    }
    if !e.is_reflexive()? {
        return Err(CheckError::NotReflexive("E"));
    }
    let op = e.opposite();
    let ee_op = compose(e, &op)?;
    let op_e = compose(&op, e)?;
    Ok(EeProperties {
        ee_op_is_equivalence: ee_op.is_equivalence()?,
        ee_op_equals_op_e: ee_op == op_e,
        positive_are_equivalences: positive_are_equivalences(alg, budget)?,
    })
}
