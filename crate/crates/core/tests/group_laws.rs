use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sumcol::{AmbientElement, AmbientSignature, FreeMode, Order, PruferCoord};

fn signature(mode: FreeMode) -> Arc<AmbientSignature> {
    AmbientSignature::new(vec![3, 5, 3, 7], 3, 2, mode).unwrap()
}

fn element(sig: Arc<AmbientSignature>) -> impl Strategy<Value = AmbientElement> {
    let primes = sig.prufer_factors().to_vec();
    let s = sig.order_two_count();
    let r = sig.free_rank();
    let integer = sig.free_mode() == FreeMode::Integer;
    (
        proptest::collection::vec((0u32..4, 0i64..400), primes.len()),
        proptest::collection::vec(any::<bool>(), s),
        proptest::collection::vec((-30i64..30, 1i64..7), r),
    )
        .prop_map(move |(d, t, q)| {
            let dmap: BTreeMap<usize, PruferCoord> = d
                .iter()
                .enumerate()
                .map(|(i, &(k, num))| {
                    let p = primes[i];
                    (i, PruferCoord::new(num, BigInt::from(p).pow(k), p).unwrap())
                })
                .collect();
            let q = q
                .into_iter()
                .map(|(n, m)| BigRational::new(n.into(), if integer { 1 } else { m }.into()))
                .collect();
            AmbientElement::new(&sig, dmap, t, q).unwrap()
        })
}

fn rational() -> impl Strategy<Value = AmbientElement> {
    element(signature(FreeMode::Rational))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn abelian_group_laws(a in rational(), b in rational(), c in rational()) {
        let zero = a.signature().zero();
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&zero).unwrap(), a.clone());
        prop_assert!(a.add(&a.negate()).unwrap().is_zero());
    }
}

proptest! {
    #[test]
    fn scalar_mul_is_repeated_addition(a in rational()) {
        let mut acc = a.signature().zero();
        for n in 0..=20 {
            prop_assert_eq!(a.scalar_mul(n), acc.clone());
            acc = acc.add(&a).unwrap();
        }
    }

    #[test]
    fn negative_multiples(a in rational(), n in -20i64..0) {
        prop_assert_eq!(a.scalar_mul(n), a.scalar_mul(-n).negate());
    }

    #[test]
    fn no_element_of_order_four(a in element(signature(FreeMode::Integer)), b in rational()) {
        for x in [a, b] {
            if x.scalar_mul(4).is_zero() {
                prop_assert!(x.double().is_zero());
            }
            prop_assert_ne!(x.element_order(), Order::finite(4));
        }
    }

    #[test]
    fn order_matches_repeated_addition(a in rational()) {
        match a.element_order() {
            Order::Infinite => prop_assert!(a.q_part().iter().any(|v| *v != BigRational::from_integer(0.into()))),
            Order::Finite(n) => {
                let n: u64 = n.try_into().unwrap();
                let mut acc = a.clone();
                let mut k = 1u64;
                while !acc.is_zero() {
                    acc = acc.add(&a).unwrap();
                    k += 1;
                }
                prop_assert_eq!(k, n);
            }
        }
    }

    #[test]
    fn text_round_trip_keeps_profiles(a in rational(), b in element(signature(FreeMode::Integer))) {
        for x in [a, b] {
            let back = AmbientElement::parse(&x.to_string(), x.signature()).unwrap();
            prop_assert_eq!(back.d_profile(), x.d_profile());
            prop_assert_eq!(back.q_profile(), x.q_profile());
            prop_assert_eq!(back.d_support(), x.d_support());
            prop_assert_eq!(back, x);
        }
    }

    #[test]
    fn doubling_keeps_prufer_support(a in rational()) {
        prop_assert_eq!(a.double().d_support(), a.d_support());
    }
}
