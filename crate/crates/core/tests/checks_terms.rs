mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use relshift_core::checks::{
    difunctional_all, goursat_identity_all, permutability, positive_are_equivalences, reflexive_are_equivalences,
    shifting_principle_reduction, PermutabilityKind,
};
use relshift_core::corpus;
use relshift_core::enumerate::enumerate_class;
use relshift_core::terms::{
    find_3perm_in, find_3perm_terms, find_maltsev_in, find_maltsev_term, generate_ternary_clone, is_3perm_pair,
    is_maltsev,
};
use relshift_core::{
    compose, shifting_lemma, shifting_lemma_forall, Algebra, Budget, ClassKind, ForallOutcome, Relation, RelationClass,
    SlResult,
};

/// A random triple on size `n` with `R ∧ S ≤ T` forced.
fn triple(rng: &mut impl Rng, n: usize) -> (Relation, Relation, Relation) {
    let r = random_relation(rng, n, n, 0.5);
    let s = random_relation(rng, n, n, 0.5);
    let t = random_relation(rng, n, n, 0.5).union(&r.meet(&s).unwrap()).unwrap();
    (r, s, t)
}

fn violates(r: &Relation, s: &Relation, t: &Relation, [x, y, u, v]: [usize; 4]) -> bool {
    r.contains(x, y)
        && t.contains(x, y)
        && s.contains(x, u)
        && s.contains(y, v)
        && r.contains(u, v)
        && !t.contains(u, v)
}

fn relabel_all(p: &[usize], rels: [&Relation; 3]) -> [Relation; 3] {
    rels.map(|r| r.relabel(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn relabelling_preserves_verdicts(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (r, s, t) = triple(&mut rng, 4);
        let mut perm: Vec<usize> = (0..4).collect();
        perm.shuffle(&mut rng);
        let [r2, s2, t2] = relabel_all(&perm, [&r, &s, &t]);
        let before = shifting_lemma(&r, &s, &t).unwrap();
        let after = shifting_lemma(&r2, &s2, &t2).unwrap();
        prop_assert_eq!(before.holds(), after.holds());
        if let SlResult::Violated([x, y, u, v]) = before {
            prop_assert!(violates(&r2, &s2, &t2, [perm[x], perm[y], perm[u], perm[v]]));
        }
    }

    #[test]
    fn enlarging_t_outside_r_keeps_holds(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (r, s, t) = triple(&mut rng, 4);
        // Extra pairs outside R leave every premise unchanged.
        let extra = random_relation(&mut rng, 4, 4, 0.4);
        let outside = Relation::from_fn(r.dom(), r.cod(), |x, y| extra.contains(x, y) && !r.contains(x, y));
        let bigger = t.union(&outside).unwrap();
        let small = shifting_lemma(&r, &s, &t).unwrap();
        let large = shifting_lemma(&r, &s, &bigger).unwrap();
        prop_assert!(!small.holds() || large.holds());
    }

    #[test]
    fn reduction_never_falsified(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (r, s, t) = triple(&mut rng, 4);
        prop_assert!(shifting_principle_reduction(&r, &s, &t).unwrap());
    }
}

#[test]
fn scan_agrees_with_nested_loops() {
    let mut rng = rng(41);
    for n in 1..=5 {
        for _ in 0..400 {
            let (r, s, t) = triple(&mut rng, n);
            let mut oracle = SlResult::Holds;
            'outer: for x in 0..n {
                for y in 0..n {
                    for u in 0..n {
                        for v in 0..n {
                            if violates(&r, &s, &t, [x, y, u, v]) {
                                oracle = SlResult::Violated([x, y, u, v]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
            assert_eq!(shifting_lemma(&r, &s, &t).unwrap(), oracle);
        }
    }
}

#[test]
fn forall_agrees_with_triple_loop() {
    let budget = Budget::default();
    let refl = RelationClass::REFLEXIVE;
    let mut rng = rng(42);
    let mut algebras: Vec<Algebra> = corpus::bundled().into_iter().filter(|a| a.size() <= 3).collect();
    algebras.extend((0..30).map(|_| random_binary_algebra(&mut rng, 3)));
    for alg in &algebras {
        let rels = enumerate_class(alg, refl, &budget).unwrap();
        let mut expected = None;
        let mut count = 0u64;
        'scan: for r in &rels {
            for s in &rels {
                for t in &rels {
                    if !r.meet(s).unwrap().leq(t).unwrap() {
                        continue;
                    }
                    count += 1;
                    if let SlResult::Violated(q) = shifting_lemma(r, s, t).unwrap() {
                        expected = Some((r.clone(), s.clone(), t.clone(), q));
                        break 'scan;
                    }
                }
            }
        }
        let got = shifting_lemma_forall(alg, refl, refl, refl, &budget).unwrap();
        match expected {
            None => assert_eq!(got, ForallOutcome::Holds { triples: count }),
            Some((r, s, t, quadruple)) => assert_eq!(got, ForallOutcome::Violated { r, s, t, quadruple }),
        }
    }
}

#[test]
fn forall_reports_budget() {
    let tight = Budget {
        max_triples: 1,
        ..Budget::default()
    };
    let out = shifting_lemma_forall(
        &corpus::cyclic_group(3),
        RelationClass::REFLEXIVE,
        RelationClass::REFLEXIVE,
        RelationClass::REFLEXIVE,
        &tight,
    )
    .unwrap();
    assert!(matches!(out, ForallOutcome::Inconclusive(_)));
    let unconstrained = RelationClass {
        kind: ClassKind::Arbitrary,
        compatible: false,
    };
    let out = shifting_lemma_forall(
        &corpus::n5_unary(),
        unconstrained,
        unconstrained,
        unconstrained,
        &Budget::default(),
    );
    assert!(matches!(out.unwrap(), ForallOutcome::Inconclusive(_)));
}

#[test]
fn group_congruences_two_permute() {
    for alg in [2, 3, 4, 5, 6]
        .map(corpus::cyclic_group)
        .into_iter()
        .chain([corpus::symmetric_group3()])
    {
        let cons = alg.all_congruences();
        for r in &cons {
            for s in &cons {
                let p = permutability(r, s).unwrap();
                assert_eq!(p.kind, PermutabilityKind::TwoPermute, "{}", alg.name());
                assert_eq!(p.rs, compose(r, s).unwrap());
            }
        }
    }
}

#[test]
fn nonpermuting_fixture() {
    let alg = corpus::nonpermuting_unary();
    let cons = alg.all_congruences();
    let nontrivial: Vec<&Relation> = cons.iter().filter(|c| c.len() != 4 && c.len() != 16).collect();
    assert_eq!(nontrivial.len(), 2);
    let p = permutability(nontrivial[0], nontrivial[1]).unwrap();
    assert_ne!(p.rs, p.sr);
    assert_ne!(p.kind, PermutabilityKind::TwoPermute);
    assert!(permutability(&Relation::full(alg.carrier(), alg.carrier()), nontrivial[0]).is_ok());
    let order = Relation::from_pairs(alg.carrier(), alg.carrier(), [(0, 0), (1, 1), (2, 2), (3, 3), (0, 1)]).unwrap();
    assert!(permutability(&order, nontrivial[0]).is_err());
}

/// Closure by repeated full passes over all argument tuples.
fn naive_clone(alg: &Algebra) -> BTreeSet<Vec<usize>> {
    let n = alg.size();
    let cells = n * n * n;
    let mut set: BTreeSet<Vec<usize>> = (0..3)
        .map(|i| (0..cells).map(|c| [c / (n * n), c / n % n, c % n][i]).collect())
        .collect();
    loop {
        let list: Vec<Vec<usize>> = set.iter().cloned().collect();
        let before = set.len();
        for (oi, op) in alg.operations().iter().enumerate() {
            let k = op.arity;
            for code in 0..list.len().pow(k as u32) {
                let mut args = Vec::new();
                let mut c = code;
                for _ in 0..k {
                    args.push(&list[c % list.len()]);
                    c /= list.len();
                }
                let table = (0..cells)
                    .map(|cell| {
                        let vals: Vec<usize> = args.iter().map(|a| a[cell]).collect();
                        alg.apply(oi, &vals)
                    })
                    .collect();
                set.insert(table);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

#[test]
fn clone_matches_naive_closure() {
    let mut algebras: Vec<Algebra> = all_binary_algebras(2).collect();
    algebras.extend(corpus::bundled().into_iter().filter(|a| a.size() == 2));
    for alg in &algebras {
        let clone = generate_ternary_clone(alg, 5000);
        assert!(clone.is_complete());
        let got: BTreeSet<Vec<usize>> = clone.tables().map(|t| t.to_vec()).collect();
        assert_eq!(got, naive_clone(alg));
        for i in 0..clone.len() {
            assert!(clone.function(i).verify(alg));
        }
    }
    assert_eq!(naive_clone(&corpus::semilattice2()).len(), 7);
    assert_eq!(naive_clone(&corpus::set2()).len(), 3);
}

#[test]
fn searches_match_exhaustive_scans_on_size_2() {
    for alg in all_binary_algebras(2).chain(corpus::bundled().into_iter().filter(|a| a.size() == 2)) {
        let tables: Vec<Vec<usize>> = naive_clone(&alg).into_iter().collect();
        let maltsev = tables.iter().find(|t| is_maltsev(t, 2));
        let found = find_maltsev_term(&alg, 5000);
        assert_eq!(found.found().map(|f| &f.table), maltsev);
        let pair = tables
            .iter()
            .flat_map(|r| tables.iter().map(move |s| (r, s)))
            .find(|(r, s)| is_3perm_pair(r, s, 2));
        let found = find_3perm_terms(&alg, 5000);
        assert_eq!(found.found().map(|(r, s)| (&r.table, &s.table)), pair);
    }
}

#[test]
fn maltsev_gives_a_3perm_pair() {
    let mut rng = rng(43);
    let mut algebras: Vec<Algebra> = corpus::bundled();
    algebras.push(corpus::symmetric_group3());
    algebras.extend((0..60).map(|_| random_binary_algebra(&mut rng, 3)));
    let mut seen = 0;
    for alg in &algebras {
        let clone = generate_ternary_clone(alg, 5000);
        if let Some(p) = find_maltsev_in(&clone, 5000).found() {
            assert!(p.verify(alg));
            let n = alg.size();
            let third: Vec<usize> = (0..n * n * n).map(|c| c % n).collect();
            assert!(is_3perm_pair(&p.table, &third, n));
            assert!(find_3perm_in(&clone, 5000).is_found());
            seen += 1;
        }
        if let Some((r, s)) = find_3perm_in(&clone, 5000).found() {
            assert!(r.verify(alg) && s.verify(alg));
            assert!(is_3perm_pair(&r.table, &s.table, alg.size()));
        }
    }
    assert!(seen >= 4);
}

#[test]
fn search_ignores_operation_order() {
    let mut rng = rng(44);
    let mut algebras = corpus::bundled();
    algebras.push(corpus::symmetric_group3());
    for alg in &algebras {
        let base_p = find_maltsev_term(alg, 5000).found().map(|f| f.table.clone());
        let base_rs = find_3perm_terms(alg, 5000)
            .found()
            .map(|(r, s)| (r.table.clone(), s.table.clone()));
        for _ in 0..4 {
            let mut ops = alg.operations().to_vec();
            ops.shuffle(&mut rng);
            let shuffled = Algebra::new(alg.name(), alg.size(), ops).unwrap();
            let p = find_maltsev_term(&shuffled, 5000);
            assert_eq!(p.found().map(|f| f.table.clone()), base_p);
            if let Some(f) = p.found() {
                assert!(f.verify(&shuffled));
            }
            let rs = find_3perm_terms(&shuffled, 5000);
            assert_eq!(rs.found().map(|(r, s)| (r.table.clone(), s.table.clone())), base_rs);
        }
    }
}

#[test]
fn term_conditions_imply_the_relational_ones() {
    let budget = Budget::default();
    let mut rng = rng(45);
    let mut algebras: Vec<Algebra> = all_binary_algebras(2).collect();
    algebras.extend(corpus::bundled());
    algebras.extend((0..60).map(|_| random_binary_algebra(&mut rng, 3)));
    let (refl, rp) = (RelationClass::REFLEXIVE, RelationClass::REFLEXIVE_POSITIVE);
    for alg in &algebras {
        let clone = generate_ternary_clone(alg, budget.clone_size);
        if find_maltsev_in(&clone, budget.clone_size).is_found() {
            assert!(difunctional_all(alg, alg, &budget).unwrap().holds());
            assert!(reflexive_are_equivalences(alg, &budget).unwrap().holds());
            assert!(shifting_lemma_forall(alg, refl, refl, refl, &budget).unwrap().holds());
        }
        if find_3perm_in(&clone, budget.clone_size).is_found() {
            assert!(goursat_identity_all(alg, alg, &budget).unwrap().holds());
            assert!(positive_are_equivalences(alg, &budget).unwrap().holds());
            assert!(shifting_lemma_forall(alg, rp, refl, rp, &budget).unwrap().holds());
            for e in enumerate_class(alg, refl, &budget).unwrap() {
                let op = e.opposite();
                let ee = compose(&e, &op).unwrap();
                assert!(ee.is_equivalence().unwrap());
                assert_eq!(ee, compose(&op, &e).unwrap());
            }
        }
    }
}

#[test]
fn semilattice_negative_control() {
    let sl = corpus::semilattice2();
    let clone = generate_ternary_clone(&sl, 5000);
    assert!(clone.is_complete());
    assert_eq!(clone.len(), 7);
    assert!(!find_3perm_in(&clone, 5000).is_found());
    assert!(!find_maltsev_in(&clone, 5000).is_found());
    let refl = RelationClass::REFLEXIVE;
    assert!(shifting_lemma_forall(&sl, refl, refl, refl, &Budget::default())
        .unwrap()
        .is_violated());
}
