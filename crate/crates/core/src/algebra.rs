//! Finite algebras given by operation tables, their compatible relations and
//! congruences.
//!
//! An operation of arity `k` on a carrier of size `n` is a flat table of
//! length `n^k`, row-major by argument tuple: the entry for `(a_0, .., a_{k-1})`
//! sits at `Σ a_i · n^(k-1-i)`.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::relation::{Carrier, Relation, RelationError};

/// Largest supported operation arity.
pub const MAX_ARITY: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    DuplicateOperation(String),
    ArityTooLarge {
        op: String,
        arity: usize,
    },
    TableLength {
        op: String,
        expected: usize,
        found: usize,
    },
    EntryOutOfRange {
        op: String,
        index: usize,
        value: usize,
        size: usize,
    },
    UnknownOperation(String),
    WrongArgumentCount {
        op: String,
        arity: usize,
        given: usize,
    },
    ArgumentOutOfRange {
        op: String,
        arg: usize,
        size: usize,
    },
    SignatureMismatch,
    Relation(RelationError),
    /// A relation handed to `as_paired_object` is not compatible.
    NotCompatible,
    NotReflexive,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::DuplicateOperation(op) => write!(f, "operation `{op}` declared twice"),
            AlgebraError::ArityTooLarge { op, arity } => {
                write!(
                    f,
                    "operation `{op}` has arity {arity}, at most {MAX_ARITY} is supported"
                )
            }
            AlgebraError::TableLength { op, expected, found } => {
                write!(f, "operation `{op}`: table has {found} entries, expected {expected}")
            }
            AlgebraError::EntryOutOfRange { op, index, value, size } => write!(
                f,
                "operation `{op}`: entry {index} is {value}, outside carrier of size {size}"
            ),
            AlgebraError::UnknownOperation(op) => write!(f, "unknown operation `{op}`"),
            AlgebraError::WrongArgumentCount { op, arity, given } => {
                write!(f, "operation `{op}` takes {arity} arguments, {given} given")
            }
            AlgebraError::ArgumentOutOfRange { op, arg, size } => {
                write!(f, "operation `{op}`: argument {arg} outside carrier of size {size}")
            }
            AlgebraError::SignatureMismatch => write!(f, "algebras have different signatures"),
            AlgebraError::Relation(e) => write!(f, "{e}"),
            AlgebraError::NotCompatible => write!(f, "relation is not compatible with the operations"),
            AlgebraError::NotReflexive => write!(f, "relation is not reflexive"),
        }
    }
}

impl core::error::Error for AlgebraError {}

impl From<RelationError> for AlgebraError {
    fn from(e: RelationError) -> Self {
        AlgebraError::Relation(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

impl Operation {
    pub fn new(name: impl Into<String>, arity: usize, table: Vec<usize>) -> Self {
        Operation {
            name: name.into(),
            arity,
            table,
        }
    }

    /// Tabulates `f` over every argument tuple of a carrier of size `n`.
    pub fn from_fn(name: impl Into<String>, arity: usize, n: usize, mut f: impl FnMut(&[usize]) -> usize) -> Self {
        let mut table = Vec::with_capacity(n.pow(arity as u32));
        let mut args = vec![0; arity];
        for idx in 0..n.pow(arity as u32) {
            let mut rest = idx;
            for slot in args.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            table.push(f(&args));
        }
        Operation::new(name, arity, table)
    }
}

/// Operation symbols with arities, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub ops: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    name: String,
    carrier: Carrier,
    ops: Vec<Operation>,
}

impl Algebra {
    pub fn new(name: impl Into<String>, size: usize, ops: Vec<Operation>) -> Result<Self, AlgebraError> {
        let carrier = Carrier::new(size)?;
        let mut seen = BTreeSet::new();
        for op in &ops {
            if !seen.insert(op.name.as_str()) {
                return Err(AlgebraError::DuplicateOperation(op.name.clone()));
            }
            if op.arity > MAX_ARITY {
                return Err(AlgebraError::ArityTooLarge {
                    op: op.name.clone(),
                    arity: op.arity,
                });
            }
            let expected = size.pow(op.arity as u32);
            if op.table.len() != expected {
                return Err(AlgebraError::TableLength {
                    op: op.name.clone(),
                    expected,
                    found: op.table.len(),
                });
            }
            if let Some((index, &value)) = op.table.iter().enumerate().find(|(_, &v)| v >= size) {
                return Err(AlgebraError::EntryOutOfRange {
                    op: op.name.clone(),
                    index,
                    value,
                    size,
                });
            }
        }
        Ok(Algebra {
            name: name.into(),
            carrier,
            ops,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    pub fn signature(&self) -> Signature {
        Signature {
            ops: self.ops.iter().map(|o| (o.name.clone(), o.arity)).collect(),
        }
    }

    /// Same operation symbols and arities, in the same order.
    pub fn same_signature(&self, other: &Algebra) -> bool {
        self.ops.len() == other.ops.len()
            && self
                .ops
                .iter()
                .zip(&other.ops)
                .all(|(a, b)| a.name == b.name && a.arity == b.arity)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Table lookup by operation index. Arguments are not range-checked.
    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let n = self.size();
        let idx = args.iter().fold(0, |acc, &a| acc * n + a);
        self.ops[op].table[idx]
    }

    pub fn evaluate(&self, op: &str, args: &[usize]) -> Result<usize, AlgebraError> {
        let (i, o) = self
            .ops
            .iter()
            .enumerate()
            .find(|(_, o)| o.name == op)
            .ok_or_else(|| AlgebraError::UnknownOperation(op.to_string()))?;
        if args.len() != o.arity {
            return Err(AlgebraError::WrongArgumentCount {
                op: op.to_string(),
                arity: o.arity,
                given: args.len(),
            });
        }
        if let Some(&arg) = args.iter().find(|&&a| a >= self.size()) {
            return Err(AlgebraError::ArgumentOutOfRange {
                op: op.to_string(),
                arg,
                size: self.size(),
            });
        }
        Ok(self.apply(i, args))
    }

    /// Whether `rel` is closed under every operation applied coordinatewise.
    pub fn is_compatible(&self, rel: &Relation) -> Result<bool, AlgebraError> {
        is_compatible_between(self, self, rel)
    }

    /// Least compatible relation on `self` containing `seed`.
    pub fn compatible_close(&self, seed: &Relation) -> Result<Relation, AlgebraError> {
        compatible_close_between(self, self, seed)
    }

    /// Least congruence containing `(a, b)`.
    pub fn principal_congruence(&self, a: usize, b: usize) -> Result<Relation, AlgebraError> {
        let mut seed = Relation::diagonal(self.carrier);
        seed.insert(a, b)?;
        self.congruence_generated_by(&seed)
    }

    /// Least congruence containing `seed`: the fixpoint of compatible
    /// closure, symmetrisation and transitive closure.
    pub fn congruence_generated_by(&self, seed: &Relation) -> Result<Relation, AlgebraError> {
        let mut current = seed.union(&Relation::diagonal(self.carrier))?;
        loop {
            let closed = self.compatible_close(&current)?;
            let sym = closed.union(&closed.opposite())?;
            let next = sym.transitive_closure()?;
            if next == current {
                return Ok(current);
            }
            current = next;
        }
    }

    /// Join in the congruence lattice: transitive closure of the union.
    pub fn congruence_join(&self, a: &Relation, b: &Relation) -> Result<Relation, AlgebraError> {
        Ok(a.union(b)?.transitive_closure()?)
    }

    /// All congruences in lexicographic order, computed as the join-closure
    /// of the principal congruences.
    pub fn all_congruences(&self) -> Vec<Relation> {
        let n = self.size();
        let mut found: BTreeSet<Relation> = BTreeSet::new();
        found.insert(Relation::diagonal(self.carrier));
        let mut principals = BTreeSet::new();
        for a in 0..n {
            for b in a + 1..n {
                principals.insert(self.principal_congruence(a, b).expect("indices are in range"));
            }
        }
        let mut frontier: Vec<Relation> = principals.iter().cloned().collect();
        found.extend(principals.iter().cloned());
        while let Some(c) = frontier.pop() {
            for p in &principals {
                let j = self.congruence_join(&c, p).expect("same carrier");
                if found.insert(j.clone()) {
                    frontier.push(j);
                }
            }
        }
        found.into_iter().collect()
    }

    /// Checks `a ≤ c ⇒ a ∨ (b ∧ c) = (a ∨ b) ∧ c` over all congruence triples.
    pub fn congruence_lattice_is_modular(&self) -> bool {
        let cons = self.all_congruences();
        modularity_failure(self, &cons).is_none()
    }

    /// Packages a reflexive compatible relation `E` as an object whose
    /// elements are the pairs of `E`.
    pub fn as_paired_object(&self, e: &Relation) -> Result<PairedObject, AlgebraError> {
        if !self.is_compatible(e)? {
            return Err(AlgebraError::NotCompatible);
        }
        if !e.is_reflexive()? {
            return Err(AlgebraError::NotReflexive);
        }
        Ok(PairedObject::new(self.carrier, e))
    }
}

/// First triple `(a, b, c)` of congruences breaking the modular law.
pub fn modularity_failure(alg: &Algebra, cons: &[Relation]) -> Option<(usize, usize, usize)> {
    for (ia, a) in cons.iter().enumerate() {
        for (ic, c) in cons.iter().enumerate() {
            if !a.leq(c).expect("same carrier") {
                continue;
            }
            for (ib, b) in cons.iter().enumerate() {
                let left = alg
                    .congruence_join(a, &b.meet(c).expect("same carrier"))
                    .expect("same carrier");
                let right = alg
                    .congruence_join(a, b)
                    .expect("same carrier")
                    .meet(c)
                    .expect("same carrier");
                if left != right {
                    return Some((ia, ib, ic));
                }
            }
        }
    }
    None
}

fn check_between(a: &Algebra, b: &Algebra, rel: &Relation) -> Result<(), AlgebraError> {
    if !a.same_signature(b) {
        return Err(AlgebraError::SignatureMismatch);
    }
    if rel.dom() != a.carrier() || rel.cod() != b.carrier() {
        return Err(RelationError::ShapeMismatch {
            op: "compatibility",
            left: rel.shape(),
            right: (a.size(), b.size()),
        }
        .into());
    }
    Ok(())
}

/// Visits every `k`-tuple of indices into `0..len`, odometer order.
pub(crate) fn for_each_tuple(len: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut idx = vec![0usize; k];
    if k > 0 && len == 0 {
        return true;
    }
    loop {
        if !f(&idx) {
            return false;
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < len {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Whether `rel ⊆ A × B` is a subalgebra of the product.
pub fn is_compatible_between(a: &Algebra, b: &Algebra, rel: &Relation) -> Result<bool, AlgebraError> {
    check_between(a, b, rel)?;
    let pairs: Vec<(usize, usize)> = rel.pairs().collect();
    let mut left = [0usize; MAX_ARITY];
    let mut right = [0usize; MAX_ARITY];
    for (i, op) in a.ops.iter().enumerate() {
        let k = op.arity;
        let ok = for_each_tuple(pairs.len(), k, |t| {
            for (j, &p) in t.iter().enumerate() {
                left[j] = pairs[p].0;
                right[j] = pairs[p].1;
            }
            rel.contains(a.apply(i, &left[..k]), b.apply(i, &right[..k]))
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least subalgebra of `A × B` containing `seed`.
pub fn compatible_close_between(a: &Algebra, b: &Algebra, seed: &Relation) -> Result<Relation, AlgebraError> {
    check_between(a, b, seed)?;
    let pairs: Vec<(usize, usize)> = seed.pairs().collect();
    Ok(close_from(a, b, seed.clone(), pairs, 0))
}

/// Adds `extra` to an already compatible `closed` and closes again. Only
/// tuples involving a new pair need to be visited.
pub(crate) fn extend_closed(a: &Algebra, b: &Algebra, closed: &Relation, extra: (usize, usize)) -> Relation {
    let mut rel = closed.clone();
    if !rel.insert(extra.0, extra.1).expect("pair in range") {
        return rel;
    }
    let mut pairs: Vec<(usize, usize)> = closed.pairs().collect();
    let old = pairs.len();
    pairs.push(extra);
    close_from(a, b, rel, pairs, old)
}

/// Semi-naive fixpoint: every tuple visited uses at least one pair at index
/// `old` or later. Constants are applied only when `old == 0`.
fn close_from(a: &Algebra, b: &Algebra, mut rel: Relation, mut pairs: Vec<(usize, usize)>, mut old: usize) -> Relation {
    let mut left = [0usize; MAX_ARITY];
    let mut right = [0usize; MAX_ARITY];
    let mut constants = old == 0;
    loop {
        let len = pairs.len();
        let mut fresh = Vec::new();
        for (i, op) in a.ops.iter().enumerate() {
            let k = op.arity;
            if k == 0 && !constants {
                continue;
            }
            for_each_tuple(len, k, |t| {
                if k > 0 && t.iter().all(|&p| p < old) {
                    return true;
                }
                for (j, &p) in t.iter().enumerate() {
                    left[j] = pairs[p].0;
                    right[j] = pairs[p].1;
                }
                let x = a.apply(i, &left[..k]);
                let y = b.apply(i, &right[..k]);
                if rel.insert(x, y).expect("results stay in range") {
                    fresh.push((x, y));
                }
                true
            });
        }
        constants = false;
        if fresh.is_empty() {
            return rel;
        }
        old = len;
        pairs.extend(fresh);
    }
}

/// A compatible relation `E ≤ X × X` viewed as an object in its own right:
/// its elements are the pairs of `E`, indexed in lexicographic order, with
/// projections `e1`, `e2` back to `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedObject {
    base: Carrier,
    relation: Relation,
    pairs: Vec<(usize, usize)>,
    lookup: Vec<Option<usize>>,
}

impl PairedObject {
    fn new(base: Carrier, e: &Relation) -> Self {
        let pairs: Vec<(usize, usize)> = e.pairs().collect();
        let n = base.size();
        let mut lookup = vec![None; n * n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            lookup[a * n + b] = Some(i);
        }
        PairedObject {
            base,
            relation: e.clone(),
            pairs,
            lookup,
        }
    }

    pub fn base(&self) -> Carrier {
        self.base
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The carrier of pair indices. Non-empty because `E` is reflexive.
    pub fn carrier(&self) -> Carrier {
        Carrier::new(self.pairs.len()).expect("reflexive relations are non-empty")
    }

    pub fn e1(&self, i: usize) -> usize {
        self.pairs[i].0
    }

    pub fn e2(&self, i: usize) -> usize {
        self.pairs[i].1
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        if a >= self.base.size() || b >= self.base.size() {
            return None;
        }
        self.lookup[a * self.base.size() + b]
    }

    /// The subalgebra `E ≤ A × A` as an algebra on the pair indices, with
    /// operations acting coordinatewise.
    pub fn to_algebra(&self, base: &Algebra) -> Result<Algebra, AlgebraError> {
        let m = self.len();
        let mut ops = Vec::new();
        for (i, op) in base.operations().iter().enumerate() {
            let mut left = [0usize; MAX_ARITY];
            let mut right = [0usize; MAX_ARITY];
            let mut failure = None;
            let out = Operation::from_fn(op.name.clone(), op.arity, m, |args| {
                for (j, &p) in args.iter().enumerate() {
                    left[j] = self.pairs[p].0;
                    right[j] = self.pairs[p].1;
                }
                let x = base.apply(i, &left[..args.len()]);
                let y = base.apply(i, &right[..args.len()]);
                self.index_of(x, y).unwrap_or_else(|| {
                    failure = Some(());
                    0
                })
            });
            if failure.is_some() {
                return Err(AlgebraError::NotCompatible);
            }
            ops.push(out);
        }
        Algebra::new(base.name().to_string() + "/E", m, ops)
    }
}
