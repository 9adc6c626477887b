use std::collections::HashSet;

use proptest::prelude::*;
use sumcol::{element_order_in, CanonicalDecomposition, EmbeddingMap, FreeMode, Order};

const B: i64 = 5;

fn groups() -> Vec<CanonicalDecomposition> {
    [
        (0, vec![(3, 2)]),
        (1, vec![(2, 1)]),
        (0, vec![(2, 1), (2, 1), (3, 1), (5, 1)]),
        (1, vec![(3, 1), (3, 2), (2, 1)]),
        (2, vec![(7, 1), (2, 1)]),
        (0, vec![(5, 2), (3, 3)]),
    ]
    .into_iter()
    .map(|(r, f)| CanonicalDecomposition::from_pairs(r, &f).unwrap())
    .collect()
}

/// Canonical representatives: torsion coefficients in `[0, order)`, free
/// coefficients in `[-B, B]`.
fn representatives(d: &CanonicalDecomposition) -> Vec<Vec<i64>> {
    let mut ranges: Vec<Vec<i64>> = d
        .primary_factors()
        .iter()
        .map(|f| (0..u64::try_from(f.order()).unwrap() as i64).collect())
        .collect();
    ranges.extend((0..d.free_rank()).map(|_| (-B..=B).collect()));
    let mut out = vec![vec![]];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                r.iter().map(move |&c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn injective_on_representatives() {
    for d in groups() {
        for mode in [FreeMode::Rational, FreeMode::Integer] {
            let m = EmbeddingMap::build(&d, mode).unwrap();
            let reps = representatives(&d);
            assert!(reps.len() <= 10_000);
            let images: HashSet<_> = reps.iter().map(|u| m.embed(u).unwrap()).collect();
            assert_eq!(images.len(), reps.len(), "{d}");
        }
    }
}

#[test]
fn orders_preserved_and_image_four_free() {
    for d in groups() {
        let m = EmbeddingMap::build(&d, FreeMode::Rational).unwrap();
        for u in representatives(&d) {
            let img = m.embed(&u).unwrap();
            assert_eq!(img.element_order(), element_order_in(&d, &u).unwrap());
            assert_ne!(img.element_order(), Order::finite(4));
        }
    }
}

#[test]
fn torsion_relations_respected() {
    for d in groups() {
        let m = EmbeddingMap::build(&d, FreeMode::Rational).unwrap();
        for (img, f) in m.generator_images().iter().zip(d.primary_factors()) {
            assert!(img
                .scalar_mul(num_bigint::BigInt::from(f.order()))
                .is_zero());
        }
    }
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-1000i64..1000, n)
}

proptest! {
    #[test]
    fn embed_is_a_homomorphism(which in 0usize..6, u in coeffs(4), v in coeffs(4)) {
        let d = &groups()[which];
        let n = d.generator_count();
        let m = EmbeddingMap::build(d, FreeMode::Integer).unwrap();
        let (u, v) = (&u[..n], &v[..n]);
        let sum: Vec<i64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
        prop_assert_eq!(
            m.embed(&sum).unwrap(),
            m.embed(u).unwrap().add(&m.embed(v).unwrap()).unwrap()
        );
        prop_assert_eq!(m.embed(u).unwrap().element_order(), element_order_in(d, u).unwrap());
    }
}
