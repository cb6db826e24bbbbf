//! Ternary term operations: bounded clone generation and searches for the
//! Mal'tsev term `p` and the 3-permutability pair `(r, s)`.
//!
//! A ternary operation on a carrier of size `n` is a table of length `n³`,
//! entry `f(x, y, z)` at `x·n² + y·n + z`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{for_each_tuple, Algebra, MAX_ARITY};

/// A term over the signature in the variables `x`, `y`, `z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u8),
    App { op: String, args: Vec<Term> },
}

impl Term {
    pub fn eval(&self, alg: &Algebra, vars: [usize; 3]) -> Option<usize> {
        match self {
            Term::Var(i) => vars.get(*i as usize).copied(),
            Term::App { op, args } => {
                let mut vals = [0usize; MAX_ARITY];
                for (slot, a) in vals.iter_mut().zip(args) {
                    *slot = a.eval(alg, vars)?;
                }
                alg.evaluate(op, &vals[..args.len()]).ok()
            }
        }
    }

    /// The ternary table of this term on `alg`.
    pub fn tabulate(&self, alg: &Algebra) -> Option<Vec<usize>> {
        let n = alg.size();
        let mut out = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    out.push(self.eval(alg, [x, y, z])?);
                }
            }
        }
        Some(out)
    }
}

/// S-expression form: `(op arg ..)`, variables as `x`, `y`, `z`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => f.write_str(["x", "y", "z"].get(*i as usize).copied().unwrap_or("?")),
            Term::App { op, args } => {
                write!(f, "({op}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermFunction {
    pub table: Vec<usize>,
    pub term: Term,
}

impl TermFunction {
    /// Whether the table agrees with evaluating the term pointwise.
    pub fn verify(&self, alg: &Algebra) -> bool {
        self.term.tabulate(alg).as_deref() == Some(self.table.as_slice())
    }
}

#[inline]
fn at(table: &[usize], n: usize, x: usize, y: usize, z: usize) -> usize {
    table[(x * n + y) * n + z]
}

/// `p(x, y, y) = x` and `p(x, x, y) = y`.
pub fn is_maltsev(table: &[usize], n: usize) -> bool {
    (0..n).all(|x| (0..n).all(|y| at(table, n, x, y, y) == x && at(table, n, x, x, y) == y))
}

/// `r(x, y, y) = x`, `r(x, x, y) = s(x, y, y)`, `s(x, x, y) = y`.
pub fn is_3perm_pair(r: &[usize], s: &[usize], n: usize) -> bool {
    (0..n).all(|x| {
        (0..n).all(|y| at(r, n, x, y, y) == x && at(r, n, x, x, y) == at(s, n, x, y, y) && at(s, n, x, x, y) == y)
    })
}

#[derive(Clone, Debug)]
enum Derivation {
    Proj(u8),
    Apply { op: usize, args: Vec<usize> },
}

#[derive(Clone, Debug)]
struct Entry {
    table: Vec<usize>,
    derivation: Derivation,
}

/// The ternary term operations reachable from the projections, up to a
/// budget. Entries are exposed in canonical (table) order, so results do
/// not depend on generation order.
#[derive(Clone, Debug)]
pub struct TernaryClone {
    size: usize,
    op_names: Vec<String>,
    entries: Vec<Entry>,
    canonical: Vec<usize>,
    complete: bool,
}

impl TernaryClone {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether generation reached a fixpoint within the budget.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn carrier_size(&self) -> usize {
        self.size
    }

    /// Tables in canonical order.
    pub fn tables(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.canonical.iter().map(|&i| self.entries[i].table.as_slice())
    }

    pub fn contains(&self, table: &[usize]) -> bool {
        self.tables().any(|t| t == table)
    }

    /// The `i`-th function in canonical order, with its derivation.
    pub fn function(&self, i: usize) -> TermFunction {
        let e = self.canonical[i];
        TermFunction {
            table: self.entries[e].table.clone(),
            term: self.term_of(e),
        }
    }

    fn term_of(&self, e: usize) -> Term {
        match &self.entries[e].derivation {
            Derivation::Proj(i) => Term::Var(*i),
            Derivation::Apply { op, args } => Term::App {
                op: self.op_names[*op].clone(),
                args: args.iter().map(|&a| self.term_of(a)).collect(),
            },
        }
    }
}

/// Closes the three projections under the operations of `alg` applied
/// pointwise, stopping once `budget` functions exist and another is found.
/// Budgets below 3 are raised to 3.
pub fn generate_ternary_clone(alg: &Algebra, budget: usize) -> TernaryClone {
    let budget = budget.max(3);
    let n = alg.size();
    let cells = n * n * n;
    let mut entries: Vec<Entry> = Vec::new();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for i in 0..3u8 {
        let table: Vec<usize> = (0..cells)
            .map(|c| [c / (n * n), c / n % n, c % n][i as usize])
            .collect();
        if !index.contains_key(&table) {
            index.insert(table.clone(), entries.len());
            entries.push(Entry {
                table,
                derivation: Derivation::Proj(i),
            });
        }
    }
    let mut old = 0;
    let mut first = true;
    let mut complete = true;
    'rounds: loop {
        let len = entries.len();
        let mut added = false;
        for (op, o) in alg.operations().iter().enumerate() {
            let k = o.arity;
            if k == 0 && !first {
                continue;
            }
            let mut overflow = false;
            let mut fresh: Vec<Entry> = Vec::new();
            let base = entries.len();
            for_each_tuple(len, k, |t| {
                if k > 0 && t.iter().all(|&a| a < old) {
                    return true;
                }
                let mut vals = [0usize; MAX_ARITY];
                let table: Vec<usize> = (0..cells)
                    .map(|c| {
                        for (slot, &a) in vals.iter_mut().zip(t) {
                            *slot = entries[a].table[c];
                        }
                        alg.apply(op, &vals[..k])
                    })
                    .collect();
                if index.contains_key(&table) {
                    return true;
                }
                if index.len() >= budget {
                    overflow = true;
                    return false;
                }
                index.insert(table.clone(), base + fresh.len());
                fresh.push(Entry {
                    table,
                    derivation: Derivation::Apply { op, args: t.to_vec() },
                });
                true
            });
            added |= !fresh.is_empty();
            entries.extend(fresh);
            if overflow {
                complete = false;
                break 'rounds;
            }
        }
        first = false;
        if !added {
            break;
        }
        old = len;
    }
    let mut canonical: Vec<usize> = (0..entries.len()).collect();
    canonical.sort_by(|&a, &b| entries[a].table.cmp(&entries[b].table));
    TernaryClone {
        size: n,
        op_names: alg.operations().iter().map(|o| o.name.clone()).collect(),
        entries,
        canonical,
        complete,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermSearch<T> {
    Found(T),
    /// The whole clone was generated and nothing matched.
    NotFound {
        clone_size: usize,
    },
    /// Nothing matched in a clone cut off at `budget` functions.
    Inconclusive {
        budget: usize,
    },
}

impl<T> TermSearch<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            TermSearch::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, TermSearch::Found(_))
    }
}

fn miss<T>(clone: &TernaryClone, budget: usize) -> TermSearch<T> {
    if clone.is_complete() {
        TermSearch::NotFound {
            clone_size: clone.len(),
        }
    } else {
        TermSearch::Inconclusive { budget }
    }
}

/// Least (in table order) `p` in the clone with `p(x,y,y) = x = p(y,y,x)`.
pub fn find_maltsev_term(alg: &Algebra, budget: usize) -> TermSearch<TermFunction> {
    let clone = generate_ternary_clone(alg, budget);
    find_maltsev_in(&clone, budget)
}

pub fn find_maltsev_in(clone: &TernaryClone, budget: usize) -> TermSearch<TermFunction> {
    let n = clone.carrier_size();
    match clone.tables().position(|t| is_maltsev(t, n)) {
        Some(i) => TermSearch::Found(clone.function(i)),
        None => miss(clone, budget),
    }
}

/// Least pair `(r, s)` (by `r`, then `s`, in table order) satisfying the
/// 3-permutability identities.
pub fn find_3perm_terms(alg: &Algebra, budget: usize) -> TermSearch<(TermFunction, TermFunction)> {
    let clone = generate_ternary_clone(alg, budget);
    find_3perm_in(&clone, budget)
}

pub fn find_3perm_in(clone: &TernaryClone, budget: usize) -> TermSearch<(TermFunction, TermFunction)> {
    let n = clone.carrier_size();
    let binary = |t: &[usize], f: fn(&[usize], usize, usize, usize) -> usize| -> Vec<usize> {
        let mut out = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                out[x * n + y] = f(t, n, x, y);
            }
        }
        out
    };
    // s(x, y, y) for every s with s(x, x, y) = y, keeping the least s.
    let mut s_by_diag: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (i, t) in clone.tables().enumerate() {
        let ok = (0..n).all(|x| (0..n).all(|y| at(t, n, x, x, y) == y));
        if ok {
            s_by_diag.entry(binary(t, |t, n, x, y| at(t, n, x, y, y))).or_insert(i);
        }
    }
    for (i, t) in clone.tables().enumerate() {
        let ok = (0..n).all(|x| (0..n).all(|y| at(t, n, x, y, y) == x));
        if !ok {
            continue;
        }
        if let Some(&j) = s_by_diag.get(&binary(t, |t, n, x, y| at(t, n, x, x, y))) {
            return TermSearch::Found((clone.function(i), clone.function(j)));
        }
    }
    miss(clone, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Operation;
    use crate::corpus;
    use alloc::string::ToString;

    #[test]
    fn empty_signature_gives_projections() {
        let clone = generate_ternary_clone(&corpus::set2(), 5000);
        assert!(clone.is_complete());
        assert_eq!(clone.len(), 3);
    }

    #[test]
    fn semilattice_clone_has_seven_meets() {
        let clone = generate_ternary_clone(&corpus::semilattice2(), 5000);
        assert!(clone.is_complete());
        assert_eq!(clone.len(), 7);
        let expected: Vec<Vec<usize>> = (1u8..8)
            .map(|mask| {
                (0..8usize)
                    .map(|c| {
                        let v = [c >> 2 & 1, c >> 1 & 1, c & 1];
                        (0..3)
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| v[i])
                            .fold(1, |a, b| a & b)
                    })
                    .collect()
            })
            .collect();
        for t in &expected {
            assert!(clone.contains(t));
        }
    }

    #[test]
    fn z2_clone_contains_affine_sum() {
        let clone = generate_ternary_clone(&corpus::cyclic_group(2), 5000);
        assert!(clone.is_complete());
        assert!(clone.contains(&[0, 1, 1, 0, 1, 0, 0, 1]));
    }

    #[test]
    fn z2_maltsev_term() {
        let z2 = corpus::cyclic_group(2);
        let p = find_maltsev_term(&z2, 5000);
        let p = p.found().expect("Z2 has a Mal'tsev term");
        assert_eq!(p.table, [0, 1, 1, 0, 1, 0, 0, 1]);
        assert!(p.verify(&z2));
    }

    #[test]
    fn semilattice_has_no_maltsev_term() {
        assert_eq!(
            find_maltsev_term(&corpus::semilattice2(), 5000),
            TermSearch::NotFound { clone_size: 7 }
        );
        assert_eq!(
            find_3perm_terms(&corpus::semilattice2(), 5000),
            TermSearch::NotFound { clone_size: 7 }
        );
    }

    #[test]
    fn basic_maltsev_operation_is_found() {
        let n = 3;
        let p = Operation::from_fn("p", 3, n, |a| (a[0] + 2 * a[1] + a[2]) % n);
        let alg = Algebra::new("affine3", n, vec![p.clone()]).unwrap();
        let found = find_maltsev_term(&alg, 5000);
        assert_eq!(found.found().unwrap().table, p.table);
    }

    #[test]
    fn implication_algebra_has_3perm_terms() {
        let imp = corpus::implication2();
        let (r, s) = find_3perm_terms(&imp, 5000).found().cloned().expect("terms exist");
        assert!(is_3perm_pair(&r.table, &s.table, 2));
        assert!(r.verify(&imp) && s.verify(&imp));
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let z3 = corpus::cyclic_group(3);
        let clone = generate_ternary_clone(&z3, 4);
        assert!(!clone.is_complete());
        assert_eq!(clone.len(), 4);
        assert_eq!(find_maltsev_term(&z3, 4), TermSearch::Inconclusive { budget: 4 });
    }

    #[test]
    fn term_display() {
        let t = Term::App {
            op: "+".into(),
            args: vec![
                Term::Var(0),
                Term::App {
                    op: "0".into(),
                    args: vec![],
                },
            ],
        };
        assert_eq!(t.to_string(), "(+ x (0))");
    }
}
