mod common;

use common::*;
use proptest::prelude::*;
use relshift_core::{compose, Carrier, Relation};

/// Composite by the defining quantifier, independent of the bitset path.
fn compose_oracle(s: &Relation, r: &Relation) -> Relation {
    Relation::from_fn(r.dom(), s.cod(), |x, z| {
        r.cod().elements().any(|y| r.contains(x, y) && s.contains(y, z))
    })
}

fn relation_strategy(max: usize) -> impl Strategy<Value = Relation> {
    (1..=max, 1..=max)
        .prop_flat_map(|(n, m)| (Just(n), Just(m), proptest::collection::vec(any::<bool>(), n * m)))
        .prop_map(|(n, m, bits)| Relation::from_fn(carrier(n), carrier(m), |x, y| bits[x * m + y]))
}

/// Three relations `R: A→B`, `S: B→C`, `T: C→D`.
fn chain_strategy(max: usize) -> impl Strategy<Value = (Relation, Relation, Relation)> {
    (1..=max, 1..=max, 1..=max, 1..=max)
        .prop_flat_map(|(a, b, c, d)| {
            (
                Just((a, b, c, d)),
                proptest::collection::vec(any::<bool>(), a * b),
                proptest::collection::vec(any::<bool>(), b * c),
                proptest::collection::vec(any::<bool>(), c * d),
            )
        })
        .prop_map(|((a, b, c, d), rb, sb, tb)| {
            (
                Relation::from_fn(carrier(a), carrier(b), |x, y| rb[x * b + y]),
                Relation::from_fn(carrier(b), carrier(c), |x, y| sb[x * c + y]),
                Relation::from_fn(carrier(c), carrier(d), |x, y| tb[x * d + y]),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn compose_matches_quantifier((r, s, t) in chain_strategy(6)) {
        prop_assert_eq!(compose(&s, &r).unwrap(), compose_oracle(&s, &r));
        prop_assert_eq!(
            compose(&t, &compose(&s, &r).unwrap()).unwrap(),
            compose(&compose(&t, &s).unwrap(), &r).unwrap()
        );
    }

    #[test]
    fn opposite_reverses_composites((r, s, _t) in chain_strategy(6)) {
        let sr = compose(&s, &r).unwrap();
        prop_assert_eq!(sr.opposite(), compose(&r.opposite(), &s.opposite()).unwrap());
    }

    #[test]
    fn units_and_involution(r in relation_strategy(6)) {
        prop_assert_eq!(r.opposite().opposite(), r.clone());
        prop_assert_eq!(compose(&Relation::diagonal(r.cod()), &r).unwrap(), r.clone());
        prop_assert_eq!(compose(&r, &Relation::diagonal(r.dom())).unwrap(), r);
    }

    #[test]
    fn positive_relations_are_symmetric(r in relation_strategy(6)) {
        if r.is_square() {
            let p = compose(&r.opposite(), &r).unwrap();
            prop_assert!(p.is_positive().unwrap());
            prop_assert!(p.is_symmetric().unwrap());
            let u = p.positive_witness().unwrap().unwrap();
            prop_assert_eq!(compose(&u.opposite(), &u).unwrap(), p);
        }
    }

    #[test]
    fn closure_is_union_of_powers(r in relation_strategy(6)) {
        if r.is_square() {
            let mut acc = r.clone();
            let mut power = r.clone();
            for _ in 0..r.dom().size() {
                power = compose(&r, &power).unwrap();
                acc = acc.union(&power).unwrap();
            }
            prop_assert_eq!(r.transitive_closure().unwrap(), acc);
        }
    }

    #[test]
    fn difunctional_matches_quantifier(d in relation_strategy(4)) {
        let quantifier = d.pairs().all(|(x, v)| {
            d.dom().elements().all(|u| {
                !(d.contains(u, v)) || d.image(u).all(|y| d.contains(x, y))
            })
        });
        prop_assert_eq!(d.is_difunctional(), quantifier);
    }
}

#[test]
fn meet_and_union_match_pointwise_oracle() {
    let mut rng = rng(11);
    for _ in 0..2000 {
        let r = random_relation(&mut rng, 4, 4, 0.5);
        let s = random_relation(&mut rng, 4, 4, 0.5);
        let m = r.meet(&s).unwrap();
        let u = r.union(&s).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(m.contains(x, y), r.contains(x, y) && s.contains(x, y));
                assert_eq!(u.contains(x, y), r.contains(x, y) || s.contains(x, y));
            }
        }
        assert!(m.leq(&r).unwrap());
        assert!(r.leq(&u).unwrap());
    }
}

#[test]
fn symmetry_agrees_with_opposite_on_all_2x2() {
    let mut symmetric = 0;
    for r in all_relations(2, 2) {
        let scan = (0..2).all(|x| (0..2).all(|y| r.contains(x, y) == r.contains(y, x)));
        assert_eq!(r.is_symmetric().unwrap(), scan);
        assert_eq!(r.opposite() == r, scan);
        symmetric += scan as usize;
    }
    assert_eq!(symmetric, 8);
}

#[test]
fn equivalences_are_idempotent_and_self_witnessing() {
    let parts = partitions(4);
    assert_eq!(parts.len(), 15);
    for labels in &parts {
        let e = partition_relation(labels);
        assert!(e.is_equivalence().unwrap());
        assert_eq!(compose(&e, &e).unwrap(), e);
        assert!(e.is_positive().unwrap());
        assert_eq!(e.positive_witness().unwrap(), Some(e.clone()));
        assert_eq!(compose(&e.opposite(), &e).unwrap(), e);
    }
    for labels in partitions(3) {
        assert!(partition_relation(&labels).is_difunctional());
    }
}

#[test]
fn swap_is_not_positive_by_search() {
    let c2 = Carrier::new(2).unwrap();
    let swap = Relation::from_pairs(c2, c2, [(0, 1), (1, 0)]).unwrap();
    let found = all_relations(2, 2).any(|u| compose(&u.opposite(), &u).unwrap() == swap);
    assert!(!found);
    assert!(!swap.is_positive().unwrap());
}

#[test]
fn small_carriers_exhaustive_unit_and_involution() {
    for n in 1..=3 {
        for m in 1..=3 {
            for r in all_relations(n, m) {
                assert_eq!(r.opposite().opposite(), r);
                assert_eq!(compose(&Relation::diagonal(r.cod()), &r).unwrap(), r);
                assert_eq!(compose(&r, &Relation::diagonal(r.dom())).unwrap(), r);
            }
        }
    }
}

#[test]
fn transitive_relations_are_closure_fixpoints() {
    for r in all_relations(3, 3) {
        let closed = r.transitive_closure().unwrap();
        assert!(closed.is_transitive().unwrap());
        assert!(r.leq(&closed).unwrap());
        if r.is_transitive().unwrap() {
            assert_eq!(closed, r);
        }
    }
}
