//! Finite binary relations as dense boolean matrices.
//!
//! A [`Relation`] goes from a domain [`Carrier`] to a codomain [`Carrier`];
//! elements of a carrier of size `n` are `0..n`. Rows are stored as packed
//! bitsets so that composition is a boolean matrix product over words.
//!
//! Composition follows the right-to-left naming of relational calculus:
//! [`compose(s, r)`](compose) is `SR`, "first `R`, then `S`".

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

const WORD: usize = 64;

/// A finite carrier set `{0, .., size - 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Carrier(usize);

impl Carrier {
    pub fn new(size: usize) -> Result<Self, RelationError> {
        if size == 0 {
            return Err(RelationError::EmptyCarrier);
        }
        Ok(Carrier(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> core::ops::Range<usize> {
        0..self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationError {
    EmptyCarrier,
    /// Operands of a binary operation do not line up.
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// The operation needs a relation on a single carrier.
    NotSquare {
        dom: usize,
        cod: usize,
    },
    OutOfRange {
        pair: (usize, usize),
        dom: usize,
        cod: usize,
    },
}

impl fmt::Display for RelationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationError::EmptyCarrier => write!(f, "carrier size must be at least 1"),
            RelationError::ShapeMismatch { op, left, right } => write!(
                f,
                "{op}: shape mismatch between {}x{} and {}x{}",
                left.0, left.1, right.0, right.1
            ),
            RelationError::NotSquare { dom, cod } => {
                write!(f, "expected a relation on one carrier, got {dom}x{cod}")
            }
            RelationError::OutOfRange { pair, dom, cod } => write!(
                f,
                "pair ({}, {}) out of range for a {dom}x{cod} relation",
                pair.0, pair.1
            ),
        }
    }
}

impl core::error::Error for RelationError {}

/// A binary relation from `dom` to `cod`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    dom: Carrier,
    cod: Carrier,
    stride: usize,
    words: Vec<u64>,
}

impl Relation {
    pub fn empty(dom: Carrier, cod: Carrier) -> Self {
        let stride = cod.size().div_ceil(WORD);
        Relation {
            dom,
            cod,
            stride,
            words: vec![0; stride * dom.size()],
        }
    }

    /// The full relation `∇ = dom × cod`.
    pub fn full(dom: Carrier, cod: Carrier) -> Self {
        let mut rel = Self::empty(dom, cod);
        for x in dom.elements() {
            for y in cod.elements() {
                rel.set(x, y);
            }
        }
        rel
    }

    /// The identity relation `1_X`.
    pub fn diagonal(c: Carrier) -> Self {
        let mut rel = Self::empty(c, c);
        for x in c.elements() {
            rel.set(x, x);
        }
        rel
    }

    pub fn from_pairs<I>(dom: Carrier, cod: Carrier, pairs: I) -> Result<Self, RelationError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rel = Self::empty(dom, cod);
        for (x, y) in pairs {
            rel.insert(x, y)?;
        }
        Ok(rel)
    }

    /// Builds a relation from a predicate evaluated on every cell.
    pub fn from_fn(dom: Carrier, cod: Carrier, mut pred: impl FnMut(usize, usize) -> bool) -> Self {
        let mut rel = Self::empty(dom, cod);
        for x in dom.elements() {
            for y in cod.elements() {
                if pred(x, y) {
                    rel.set(x, y);
                }
            }
        }
        rel
    }

    /// Decodes a relation from the low `dom * cod` bits of `mask`, cell
    /// `(x, y)` at bit `x * cod + y`. Used by exhaustive enumerations.
    pub fn from_mask(dom: Carrier, cod: Carrier, mask: u64) -> Self {
        debug_assert!(dom.size() * cod.size() <= 64);
        Self::from_fn(dom, cod, |x, y| mask >> (x * cod.size() + y) & 1 == 1)
    }

    pub fn dom(&self) -> Carrier {
        self.dom
    }

    pub fn cod(&self) -> Carrier {
        self.cod
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.dom.size(), self.cod.size())
    }

    pub fn is_square(&self) -> bool {
        self.dom == self.cod
    }

    /// Membership query; `false` outside the matrix.
    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        if x >= self.dom.size() || y >= self.cod.size() {
            return false;
        }
        self.words[x * self.stride + y / WORD] >> (y % WORD) & 1 == 1
    }

    #[inline]
    fn set(&mut self, x: usize, y: usize) {
        self.words[x * self.stride + y / WORD] |= 1 << (y % WORD);
    }

    fn check_range(&self, x: usize, y: usize) -> Result<(), RelationError> {
        if x >= self.dom.size() || y >= self.cod.size() {
            return Err(RelationError::OutOfRange {
                pair: (x, y),
                dom: self.dom.size(),
                cod: self.cod.size(),
            });
        }
        Ok(())
    }

    /// Adds `(x, y)`; returns whether it was new.
    pub fn insert(&mut self, x: usize, y: usize) -> Result<bool, RelationError> {
        self.check_range(x, y)?;
        let fresh = !self.contains(x, y);
        self.set(x, y);
        Ok(fresh)
    }

    pub fn remove(&mut self, x: usize, y: usize) -> Result<bool, RelationError> {
        self.check_range(x, y)?;
        let present = self.contains(x, y);
        self.words[x * self.stride + y / WORD] &= !(1 << (y % WORD));
        Ok(present)
    }

    fn row(&self, x: usize) -> &[u64] {
        &self.words[x * self.stride..(x + 1) * self.stride]
    }

    /// Elements related to `x`, in increasing order.
    pub fn image(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(x);
        (0..self.cod.size()).filter(move |&y| row[y / WORD] >> (y % WORD) & 1 == 1)
    }

    /// All pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.dom
            .elements()
            .flat_map(move |x| self.image(x).map(move |y| (x, y)))
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `R°`: the same pairs read backwards.
    pub fn opposite(&self) -> Relation {
        let mut out = Relation::empty(self.cod, self.dom);
        for (x, y) in self.pairs() {
            out.set(y, x);
        }
        out
    }

    fn same_shape(&self, other: &Relation, op: &'static str) -> Result<(), RelationError> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(RelationError::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    fn require_square(&self) -> Result<(), RelationError> {
        if !self.is_square() {
            return Err(RelationError::NotSquare {
                dom: self.dom.size(),
                cod: self.cod.size(),
            });
        }
        Ok(())
    }

    pub fn meet(&self, other: &Relation) -> Result<Relation, RelationError> {
        self.same_shape(other, "meet")?;
        Ok(self.zip_words(other, |a, b| a & b))
    }

    pub fn union(&self, other: &Relation) -> Result<Relation, RelationError> {
        self.same_shape(other, "union")?;
        Ok(self.zip_words(other, |a, b| a | b))
    }

    /// Pointwise inclusion `self ≤ other`.
    pub fn leq(&self, other: &Relation) -> Result<bool, RelationError> {
        self.same_shape(other, "leq")?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0))
    }

    fn zip_words(&self, other: &Relation, f: impl Fn(u64, u64) -> u64) -> Relation {
        Relation {
            dom: self.dom,
            cod: self.cod,
            stride: self.stride,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn is_reflexive(&self) -> Result<bool, RelationError> {
        self.require_square()?;
        Ok(self.dom.elements().all(|x| self.contains(x, x)))
    }

    pub fn is_symmetric(&self) -> Result<bool, RelationError> {
        self.require_square()?;
        Ok(self.pairs().all(|(x, y)| self.contains(y, x)))
    }

    /// `RR ≤ R`.
    pub fn is_transitive(&self) -> Result<bool, RelationError> {
        self.require_square()?;
        compose(self, self)?.leq(self)
    }

    pub fn is_equivalence(&self) -> Result<bool, RelationError> {
        Ok(self.is_reflexive()? && self.is_symmetric()? && self.is_transitive()?)
    }

    /// `DD°D = D`.
    pub fn is_difunctional(&self) -> bool {
        let op = self.opposite();
        // Shapes always line up: D: X→Y, D°: Y→X.
        let dd = compose(&op, self).expect("D°D is composable");
        compose(self, &dd).expect("D(D°D) is composable") == *self
    }

    /// Whether `self = U°U` for some relation `U`.
    ///
    /// `U°U` is the union of the squares `K_y × K_y` with `K_y = U°(y)`, so a
    /// relation is positive exactly when it is symmetric and every pair
    /// `(x, x')` in it has `(x, x)` in it too.
    pub fn is_positive(&self) -> Result<bool, RelationError> {
        self.require_square()?;
        Ok(self.pairs().all(|(x, y)| self.contains(y, x) && self.contains(x, x)))
    }

    /// A relation `U` with `compose(opposite(U), U) == self`, if one exists.
    ///
    /// Transitive positive relations are their own witness. Otherwise `U`
    /// maps each element to the unordered pairs `{x, x'}` of `self` that
    /// contain it.
    pub fn positive_witness(&self) -> Result<Option<Relation>, RelationError> {
        if !self.is_positive()? {
            return Ok(None);
        }
        if self.is_transitive()? {
            return Ok(Some(self.clone()));
        }
        let edges: Vec<(usize, usize)> = self.pairs().filter(|&(x, y)| x <= y).collect();
        // Non-transitive implies non-empty.
        let cod = Carrier::new(edges.len()).expect("non-empty edge set");
        let mut u = Relation::empty(self.dom, cod);
        for (e, &(a, b)) in edges.iter().enumerate() {
            u.set(a, e);
            u.set(b, e);
        }
        Ok(Some(u))
    }

    /// Least transitive relation containing `self` (Warshall).
    pub fn transitive_closure(&self) -> Result<Relation, RelationError> {
        self.require_square()?;
        let mut out = self.clone();
        let n = self.dom.size();
        let stride = self.stride;
        for k in 0..n {
            let row_k: Vec<u64> = out.row(k).to_vec();
            for x in 0..n {
                if out.contains(x, k) {
                    for (w, rk) in out.words[x * stride..(x + 1) * stride].iter_mut().zip(&row_k) {
                        *w |= rk;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Relabels both sides of a relation on one carrier: `(x, y)` becomes
    /// `(perm[x], perm[y])`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Relation, RelationError> {
        self.require_square()?;
        let mut out = Relation::empty(self.dom, self.cod);
        for (x, y) in self.pairs() {
            out.insert(perm[x], perm[y])?;
        }
        Ok(out)
    }
}

/// The composite `SR`: `(x, z) ∈ SR` iff `x R y S z` for some `y`.
pub fn compose(s: &Relation, r: &Relation) -> Result<Relation, RelationError> {
    if r.cod != s.dom {
        return Err(RelationError::ShapeMismatch {
            op: "compose",
            left: s.shape(),
            right: r.shape(),
        });
    }
    let mut out = Relation::empty(r.dom, s.cod);
    let stride = out.stride;
    if stride == 1 && r.stride == 1 {
        for x in r.dom.elements() {
            let mut bits = r.words[x];
            let mut acc = 0u64;
            while bits != 0 {
                let y = bits.trailing_zeros() as usize;
                acc |= s.words[y];
                bits &= bits - 1;
            }
            out.words[x] = acc;
        }
        return Ok(out);
    }
    for x in r.dom.elements() {
        for y in r.image(x) {
            for (w, sy) in out.words[x * stride..(x + 1) * stride].iter_mut().zip(s.row(y)) {
                *w |= sy;
            }
        }
    }
    Ok(out)
}

/// Lexicographic order on the shape, then on the sorted pair lists.
impl Ord for Relation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shape()
            .cmp(&other.shape())
            .then_with(|| self.pairs().cmp(other.pairs()))
    }
}

impl PartialOrd for Relation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation[{}x{}]", self.dom.size(), self.cod.size())?;
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> Carrier {
        Carrier::new(n).unwrap()
    }

    fn rel(n: usize, m: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(c(n), c(m), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn zero_sized_carrier_is_rejected() {
        assert_eq!(Carrier::new(0), Err(RelationError::EmptyCarrier));
    }

    #[test]
    fn diagonal_members() {
        assert_eq!(Relation::diagonal(c(1)).pairs().collect::<Vec<_>>(), [(0, 0)]);
        assert_eq!(
            Relation::diagonal(c(3)).pairs().collect::<Vec<_>>(),
            [(0, 0), (1, 1), (2, 2)]
        );
        for n in 1..6 {
            let d = Relation::diagonal(c(n));
            assert!(d.is_reflexive().unwrap());
            assert!(d.is_symmetric().unwrap());
            assert!(d.is_transitive().unwrap());
        }
    }

    #[test]
    fn opposite_flips_pairs() {
        assert_eq!(rel(2, 2, &[(0, 1)]).opposite(), rel(2, 2, &[(1, 0)]));
        let r = rel(2, 3, &[(0, 2), (1, 0)]);
        assert_eq!(r.opposite().shape(), (3, 2));
        assert_eq!(r.opposite().opposite(), r);
    }

    #[test]
    fn compose_small() {
        let r = rel(2, 2, &[(0, 1)]);
        let s = rel(2, 2, &[(1, 0)]);
        assert_eq!(compose(&s, &r).unwrap(), rel(2, 2, &[(0, 0)]));
        let d = Relation::diagonal(c(2));
        assert_eq!(compose(&d, &r).unwrap(), r);
        assert_eq!(compose(&r, &d).unwrap(), r);
    }

    #[test]
    fn compose_rejects_mismatched_middle() {
        let r = rel(2, 3, &[]);
        let s = rel(2, 2, &[]);
        assert!(matches!(
            compose(&s, &r),
            Err(RelationError::ShapeMismatch { op: "compose", .. })
        ));
    }

    #[test]
    fn wide_relations_compose_across_words() {
        let n = 130;
        let mut r = Relation::empty(c(2), c(n));
        r.insert(0, 129).unwrap();
        r.insert(1, 64).unwrap();
        let mut s = Relation::empty(c(n), c(n));
        s.insert(129, 3).unwrap();
        s.insert(64, 127).unwrap();
        let sr = compose(&s, &r).unwrap();
        assert_eq!(sr.pairs().collect::<Vec<_>>(), [(0, 3), (1, 127)]);
    }

    #[test]
    fn lattice_ops() {
        let r = rel(2, 2, &[(0, 0), (0, 1)]);
        let s = rel(2, 2, &[(0, 1), (1, 1)]);
        let full = Relation::full(c(2), c(2));
        assert_eq!(r.meet(&full).unwrap(), r);
        assert_eq!(r.meet(&s).unwrap(), rel(2, 2, &[(0, 1)]));
        assert_eq!(r.union(&s).unwrap(), rel(2, 2, &[(0, 0), (0, 1), (1, 1)]));
        assert!(r.meet(&s).unwrap().leq(&r).unwrap());
        assert!(!r.leq(&s).unwrap());
        assert!(r.meet(&rel(2, 3, &[])).is_err());
    }

    #[test]
    fn predicates_on_single_arrow() {
        let r = rel(2, 2, &[(0, 1)]);
        assert!(!r.is_reflexive().unwrap());
        assert!(!r.is_symmetric().unwrap());
        assert!(r.is_transitive().unwrap());
        assert!(!r.is_equivalence().unwrap());
    }

    #[test]
    fn predicates_reject_non_square() {
        let r = rel(2, 3, &[]);
        let err = RelationError::NotSquare { dom: 2, cod: 3 };
        assert_eq!(r.is_reflexive(), Err(err.clone()));
        assert_eq!(r.is_symmetric(), Err(err.clone()));
        assert_eq!(r.is_transitive(), Err(err.clone()));
        assert_eq!(r.is_positive(), Err(err.clone()));
        assert_eq!(r.transitive_closure(), Err(err));
    }

    #[test]
    fn difunctional_examples() {
        assert!(rel(2, 3, &[]).is_difunctional());
        // (0,1),(1,1),(1,2) ∈ D forces (0,2).
        let d = rel(2, 3, &[(0, 0), (0, 1), (1, 1), (1, 2)]);
        assert!(!d.is_difunctional());
        let quantifier = d.pairs().all(|(x, v)| {
            d.pairs()
                .filter(|&(_, v2)| v2 == v)
                .all(|(u, _)| d.image(u).all(|y| d.contains(x, y)))
        });
        assert_eq!(quantifier, d.is_difunctional());
    }

    #[test]
    fn positivity_examples() {
        let swap = rel(2, 2, &[(0, 1), (1, 0)]);
        assert!(!swap.is_positive().unwrap());
        assert_eq!(swap.positive_witness().unwrap(), None);

        let empty = rel(3, 3, &[]);
        let u = empty.positive_witness().unwrap().unwrap();
        assert!(u.is_empty());

        // Reflexive path: positive but not transitive, so U = P fails.
        let path = rel(3, 3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)]);
        assert!(path.is_positive().unwrap());
        assert_ne!(compose(&path.opposite(), &path).unwrap(), path);
        let u = path.positive_witness().unwrap().unwrap();
        assert_eq!(compose(&u.opposite(), &u).unwrap(), path);
    }

    #[test]
    fn closure_examples() {
        let r = rel(3, 3, &[(0, 1), (1, 2)]);
        assert_eq!(r.transitive_closure().unwrap(), rel(3, 3, &[(0, 1), (1, 2), (0, 2)]));
        let t = rel(3, 3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(t.transitive_closure().unwrap(), t);
    }

    #[test]
    fn ordering_is_lexicographic_on_pairs() {
        let a = rel(2, 2, &[(0, 0)]);
        let b = rel(2, 2, &[(0, 0), (0, 1)]);
        let d = rel(2, 2, &[(0, 0), (1, 1)]);
        assert!(a < b);
        assert!(b < d);
        assert!(rel(2, 2, &[]) < a);
    }

    #[test]
    fn insert_out_of_range() {
        let mut r = rel(2, 2, &[]);
        assert!(matches!(r.insert(2, 0), Err(RelationError::OutOfRange { .. })));
        assert!(!r.contains(5, 5));
    }
}
