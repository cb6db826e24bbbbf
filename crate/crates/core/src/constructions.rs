//! Relations built in the proofs of the Mal'tsev and Goursat
//! characterizations, packaged so that each construction can be replayed
//! against [`shifting_lemma`](crate::checks::shifting_lemma).
//!
//! Relations "on E" live on the pair indices of a [`PairedObject`].

use core::fmt;

use crate::algebra::{Algebra, AlgebraError, PairedObject};
use crate::relation::{compose, Relation, RelationError};

/// A quadruple `(x, y, u, v)` laid out as
///
/// ```text
///  x --S-- u
///  |R,T    |R   (T?)
///  y --S-- v
/// ```
pub type Quadruple = [usize; 4];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionError {
    Relation(RelationError),
    Algebra(AlgebraError),
    NotEquivalence(&'static str),
    NotReflexive(&'static str),
    NotCompatible(&'static str),
    /// The relation has no asymmetric pair (Mal'tsev) or `EE° = E°E`
    /// (Goursat), so the construction has nothing to refute.
    NoWitness,
}

impl fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionError::Relation(e) => write!(f, "{e}"),
            ConstructionError::Algebra(e) => write!(f, "{e}"),
            ConstructionError::NotEquivalence(which) => write!(f, "{which} must be an equivalence relation"),
            ConstructionError::NotReflexive(which) => write!(f, "{which} must be reflexive"),
            ConstructionError::NotCompatible(which) => write!(f, "{which} must be compatible"),
            ConstructionError::NoWitness => write!(f, "no witness exists"),
        }
    }
}

impl core::error::Error for ConstructionError {}

impl From<RelationError> for ConstructionError {
    fn from(e: RelationError) -> Self {
        ConstructionError::Relation(e)
    }
}

impl From<AlgebraError> for ConstructionError {
    fn from(e: AlgebraError) -> Self {
        ConstructionError::Algebra(e)
    }
}

/// Which premise of the square a quadruple fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PremiseFailure {
    XyNotInR,
    XyNotInT,
    XuNotInS,
    YvNotInS,
    UvNotInR,
}

impl fmt::Display for PremiseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PremiseFailure::XyNotInR => "(x,y) not in R",
            PremiseFailure::XyNotInT => "(x,y) not in T",
            PremiseFailure::XuNotInS => "(x,u) not in S",
            PremiseFailure::YvNotInS => "(y,v) not in S",
            PremiseFailure::UvNotInR => "(u,v) not in R",
        };
        f.write_str(s)
    }
}

/// Checks the four premises of the square for `(x, y, u, v)`.
pub fn check_premises(r: &Relation, s: &Relation, t: &Relation, q: Quadruple) -> Result<(), PremiseFailure> {
    let [x, y, u, v] = q;
    if !r.contains(x, y) {
        return Err(PremiseFailure::XyNotInR);
    }
    if !t.contains(x, y) {
        return Err(PremiseFailure::XyNotInT);
    }
    if !s.contains(x, u) {
        return Err(PremiseFailure::XuNotInS);
    }
    if !s.contains(y, v) {
        return Err(PremiseFailure::YvNotInS);
    }
    if !r.contains(u, v) {
        return Err(PremiseFailure::UvNotInR);
    }
    Ok(())
}

/// Three relations on a common carrier with an optional quadruple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlInstance {
    pub r: Relation,
    pub s: Relation,
    pub t: Relation,
    pub quadruple: Option<Quadruple>,
}

impl SlInstance {
    pub fn check_premises(&self) -> Result<(), PremiseFailure> {
        match self.quadruple {
            Some(q) => check_premises(&self.r, &self.s, &self.t, q),
            None => Ok(()),
        }
    }

    /// Whether the quadruple, if any, fails the conclusion `(u, v) ∈ T`.
    pub fn conclusion_fails(&self) -> bool {
        self.quadruple.is_some_and(|[_, _, u, v]| !self.t.contains(u, v))
    }

    /// `R ∧ S ≤ T`.
    pub fn meet_below_t(&self) -> Result<bool, RelationError> {
        self.r.meet(&self.s)?.leq(&self.t)
    }
}

/// `((a,b),(c,d)) ∈ T` iff `(a, d) ∈ E`.
pub fn build_t(e: &PairedObject) -> Relation {
    let c = e.carrier();
    Relation::from_fn(c, c, |i, j| e.relation().contains(e.e1(i), e.e2(j)))
}

/// `((a,b),(c,d)) ∈ R` iff `(c, b) ∈ E`.
pub fn build_r(e: &PairedObject) -> Relation {
    let c = e.carrier();
    Relation::from_fn(c, c, |i, j| e.relation().contains(e.e1(j), e.e2(i)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    First,
    Second,
}

/// The kernel pair `Eq(e1)` or `Eq(e2)`: pairs with equal first (second)
/// coordinate.
pub fn kernel_pair(p: &PairedObject, leg: Leg) -> Relation {
    let c = p.carrier();
    Relation::from_fn(c, c, |i, j| match leg {
        Leg::First => p.e1(i) == p.e1(j),
        Leg::Second => p.e2(i) == p.e2(j),
    })
}

/// A Shifting Lemma violation built from a reflexive, non-symmetric `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaltsevWitness {
    pub object: PairedObject,
    /// `(x, y) ∈ E` with `(y, x) ∉ E`.
    pub asymmetric_pair: (usize, usize),
    pub instance: SlInstance,
}

/// For a reflexive compatible `E` that is not symmetric, builds `R`,
/// `S = Eq(e2)` and `T` on `E` and the quadruple
/// `(xEy, xEx, yEy, xEx)`, whose conclusion `(yEy, xEx) ∈ T` would force
/// `(y, x) ∈ E`.
pub fn maltsev_sl_witness(alg: &Algebra, e: &Relation) -> Result<MaltsevWitness, ConstructionError> {
    let object = alg.as_paired_object(e)?;
    let (x, y) = e
        .pairs()
        .find(|&(x, y)| !e.contains(y, x))
        .ok_or(ConstructionError::NoWitness)?;
    let idx = |a, b| object.index_of(a, b).expect("reflexive E contains the pair");
    let quadruple = [idx(x, y), idx(x, x), idx(y, y), idx(x, x)];
    let instance = SlInstance {
        r: build_r(&object),
        s: kernel_pair(&object, Leg::Second),
        t: build_t(&object),
        quadruple: Some(quadruple),
    };
    Ok(MaltsevWitness {
        object,
        asymmetric_pair: (x, y),
        instance,
    })
}

fn require_equivalence(r: &Relation, which: &'static str) -> Result<(), ConstructionError> {
    if !r.is_equivalence()? {
        return Err(ConstructionError::NotEquivalence(which));
    }
    Ok(())
}

fn require_base(r: &Relation, s: &PairedObject) -> Result<(), ConstructionError> {
    if r.dom() != s.base() || !r.is_square() {
        return Err(RelationError::ShapeMismatch {
            op: "construction",
            left: r.shape(),
            right: (s.base().size(), s.base().size()),
        }
        .into());
    }
    Ok(())
}

/// `R□S`: `((a,b),(c,d))` with `a R c` and `b R d`.
pub fn build_box(r: &Relation, s: &PairedObject) -> Result<Relation, ConstructionError> {
    build_w(r, r, s)
}

/// `W`: `((a,b),(c,d))` with `a T c` and `b R d`.
pub fn build_w(t: &Relation, r: &Relation, s: &PairedObject) -> Result<Relation, ConstructionError> {
    require_base(r, s)?;
    require_base(t, s)?;
    require_equivalence(r, "R")?;
    require_equivalence(t, "T")?;
    let c = s.carrier();
    Ok(Relation::from_fn(c, c, |i, j| {
        t.contains(s.e1(i), s.e1(j)) && r.contains(s.e2(i), s.e2(j))
    }))
}

/// `RSR`, which is the join `R ∨ S` only when `R` and `S` 3-permute.
pub fn join_via_rsr(r: &Relation, s: &Relation) -> Result<Relation, ConstructionError> {
    require_equivalence(r, "R")?;
    require_equivalence(s, "S")?;
    Ok(compose(r, &compose(s, r)?)?)
}

/// A Shifting Lemma violation with `R`, `T` reflexive and positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoursatWitness {
    /// The reflexive relation the square is built from: the input `E`, or
    /// `E°` when only `E°E ≰ EE°` fails.
    pub e: Relation,
    pub used_opposite: bool,
    /// `(z, x), (z, y) ∈ E` realising `(x, y) ∈ EE°` with `(x, y) ∉ E°E`.
    pub zxy: (usize, usize, usize),
    pub instance: SlInstance,
}

/// Builds `R = EE°`, `S = E`, `T = E°E` and the quadruple `(z, z, x, y)`.
pub fn goursat_sl_witness(alg: &Algebra, e: &Relation) -> Result<GoursatWitness, ConstructionError> {
    if !alg.is_compatible(e)? {
        return Err(ConstructionError::NotCompatible("E"));
    }
    if !e.is_reflexive()? {
        return Err(ConstructionError::NotReflexive("E"));
    }
    let op = e.opposite();
    match build_goursat(e)? {
        Some((zxy, instance)) => Ok(GoursatWitness {
            e: e.clone(),
            used_opposite: false,
            zxy,
            instance,
        }),
        None => match build_goursat(&op)? {
            Some((zxy, instance)) => Ok(GoursatWitness {
                e: op,
                used_opposite: true,
                zxy,
                instance,
            }),
            None => Err(ConstructionError::NoWitness),
        },
    }
}

type GoursatParts = ((usize, usize, usize), SlInstance);

fn build_goursat(e: &Relation) -> Result<Option<GoursatParts>, RelationError> {
    let op = e.opposite();
    let ee_op = compose(e, &op)?;
    let op_e = compose(&op, e)?;
    let Some((x, y)) = ee_op.pairs().find(|&(x, y)| !op_e.contains(x, y)) else {
        return Ok(None);
    };
    let z = e
        .dom()
        .elements()
        .find(|&z| e.contains(z, x) && e.contains(z, y))
        .expect("(x, y) ∈ EE° has a middle element");
    let instance = SlInstance {
        r: ee_op,
        s: e.clone(),
        t: op_e,
        quadruple: Some([z, z, x, y]),
    };
    Ok(Some(((z, x, y), instance)))
}

/// Both sides of the supremum identity on `S` for congruences `R`, `T` and
/// a reflexive compatible `S`:
/// `(R□S ∧ Eq(s2)) W (R□S ∧ Eq(s2))` and `W (R□S ∧ Eq(s2)) W`.
pub fn supremum_sides(r: &Relation, t: &Relation, s: &PairedObject) -> Result<(Relation, Relation), ConstructionError> {
    let boxed = build_box(r, s)?;
    let m = boxed.meet(&kernel_pair(s, Leg::Second))?;
    let w = build_w(t, r, s)?;
    let mwm = compose(&m, &compose(&w, &m)?)?;
    let wmw = compose(&w, &compose(&m, &w)?)?;
    Ok((mwm, wmw))
}
