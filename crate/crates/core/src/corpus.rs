//! Small reference algebras used throughout the checks and the bundled
//! suite corpus.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Algebra, Operation};

/// `Z_n` with binary `+`, unary `-` and the constant `0`.
pub fn cyclic_group(n: usize) -> Algebra {
    Algebra::new(
        format!("z{n}"),
        n,
        vec![
            Operation::from_fn("+", 2, n, |a| (a[0] + a[1]) % n),
            Operation::from_fn("-", 1, n, |a| (n - a[0]) % n),
            Operation::new("0", 0, vec![0]),
        ],
    )
    .expect("valid group tables")
}

/// The symmetric group on three letters as a size-6 group, elements
/// indexed by the permutations of `[0, 1, 2]` in lexicographic order.
pub fn symmetric_group3() -> Algebra {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("permutation");
    let mul = Operation::from_fn("*", 2, 6, |a| {
        let (p, q) = (perms[a[0]], perms[a[1]]);
        index([p[q[0]], p[q[1]], p[q[2]]])
    });
    let inv = Operation::from_fn("inv", 1, 6, |a| {
        let p = perms[a[0]];
        let mut q = [0; 3];
        for (i, &pi) in p.iter().enumerate() {
            q[pi] = i;
        }
        index(q)
    });
    Algebra::new("s3", 6, vec![mul, inv, Operation::new("e", 0, vec![0])]).expect("valid group tables")
}

/// `({0, 1}, ∧)`.
pub fn semilattice2() -> Algebra {
    Algebra::new(
        "semilattice2",
        2,
        vec![Operation::from_fn("meet", 2, 2, |a| a[0] & a[1])],
    )
    .expect("valid table")
}

/// `({0, 1}, →)` with `x → y = ¬x ∨ y`.
pub fn implication2() -> Algebra {
    Algebra::new("implication2", 2, vec![Operation::new("->", 2, vec![1, 1, 0, 1])]).expect("valid table")
}

/// A bare two-element set.
pub fn set2() -> Algebra {
    Algebra::new("set2", 2, vec![]).expect("valid algebra")
}

/// A four-element unary algebra whose congruence lattice is the pentagon.
pub fn n5_unary() -> Algebra {
    Algebra::new(
        "n5_unary",
        4,
        vec![
            Operation::new("f", 1, vec![0, 0, 2, 2]),
            Operation::new("g", 1, vec![2, 3, 0, 1]),
        ],
    )
    .expect("valid tables")
}

/// A four-element unary algebra with exactly two non-trivial congruences,
/// `{0,1,2}{3}` and `{0}{1}{2,3}`, which do not permute.
pub fn nonpermuting_unary() -> Algebra {
    Algebra::new("nonpermuting_unary", 4, vec![Operation::new("f", 1, vec![1, 2, 0, 0])]).expect("valid table")
}

/// The suite's default corpus.
pub fn bundled() -> Vec<Algebra> {
    vec![
        cyclic_group(2),
        cyclic_group(3),
        cyclic_group(4),
        semilattice2(),
        implication2(),
        set2(),
        n5_unary(),
    ]
}
