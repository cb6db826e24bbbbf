#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relshift_core::{Algebra, Carrier, Operation, Relation};

pub fn carrier(n: usize) -> Carrier {
    Carrier::new(n).unwrap()
}

/// Every relation on `n × m`.
pub fn all_relations(n: usize, m: usize) -> impl Iterator<Item = Relation> {
    let (cn, cm) = (carrier(n), carrier(m));
    (0..1u64 << (n * m)).map(move |mask| Relation::from_mask(cn, cm, mask))
}

pub fn random_relation(rng: &mut impl Rng, n: usize, m: usize, density: f64) -> Relation {
    Relation::from_fn(carrier(n), carrier(m), |_, _| rng.gen_bool(density))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Set partitions of `0..n` as block labellings.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=blocks {
            cur.push(b);
            go(i + 1, n, cur, blocks.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

pub fn partition_relation(labels: &[usize]) -> Relation {
    let c = carrier(labels.len());
    Relation::from_fn(c, c, |x, y| labels[x] == labels[y])
}

/// The algebra on `n` elements with one binary operation given by `table`.
pub fn binary_algebra(n: usize, table: Vec<usize>) -> Algebra {
    Algebra::new("bin", n, vec![Operation::new("*", 2, table)]).unwrap()
}

/// All `n^(n²)` one-binary-operation algebras on `n` elements.
pub fn all_binary_algebras(n: usize) -> impl Iterator<Item = Algebra> {
    let cells = n * n;
    (0..n.pow(cells as u32)).map(move |mut code| {
        let mut table = vec![0; cells];
        for slot in table.iter_mut() {
            *slot = code % n;
            code /= n;
        }
        binary_algebra(n, table)
    })
}

pub fn random_binary_algebra(rng: &mut impl Rng, n: usize) -> Algebra {
    binary_algebra(n, (0..n * n).map(|_| rng.gen_range(0..n)).collect())
}

/// Compatibility by the definition, over explicit argument tuples.
pub fn compatible_by_definition(alg: &Algebra, rel: &Relation) -> bool {
    let pairs: Vec<(usize, usize)> = rel.pairs().collect();
    alg.operations().iter().all(|op| {
        let k = op.arity;
        let total = pairs.len().pow(k as u32);
        (0..total).all(|mut code| {
            let mut l = Vec::with_capacity(k);
            let mut r = Vec::with_capacity(k);
            for _ in 0..k {
                let (a, b) = pairs[code % pairs.len()];
                code /= pairs.len();
                l.push(a);
                r.push(b);
            }
            l.reverse();
            r.reverse();
            rel.contains(alg.evaluate(&op.name, &l).unwrap(), alg.evaluate(&op.name, &r).unwrap())
        })
    })
}
