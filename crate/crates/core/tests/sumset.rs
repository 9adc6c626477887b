mod common;

use sumcol::sumset::{all_colourings_forced, find_mono_pair_sumset, min_colours_avoiding};
use sumcol::{ColouringTable, FiniteGroupSpec, MinColours, Verdict};

fn z(orders: &[u64]) -> FiniteGroupSpec {
    FiniteGroupSpec::new(orders.to_vec()).unwrap()
}

#[test]
fn witnesses_avoid_and_verdicts_are_monotone() {
    for orders in [
        vec![4],
        vec![2, 2],
        vec![2, 4],
        vec![3, 3],
        vec![8],
        vec![4, 4],
        vec![2, 2, 2, 2],
        vec![5],
        vec![4, 4, 2],
        vec![4, 4, 4],
        vec![8, 8],
        vec![2, 4, 8],
        vec![3, 9],
        vec![27],
        vec![7],
    ] {
        let g = z(&orders);
        let mut forced_at = Vec::new();
        for c in 1..=3 {
            let out = all_colourings_forced(&g, c, 10_000_000).unwrap();
            if let Verdict::NotForced(w) = &out.verdict {
                assert_eq!(find_mono_pair_sumset(&g, w).unwrap(), None);
                assert!(w.num_colours() as u32 <= c);
            }
            assert_ne!(out.verdict, Verdict::Unknown);
            forced_at.push(out.verdict == Verdict::Forced);
        }
        // forced at c implies forced at every smaller c
        for c in 1..forced_at.len() {
            if forced_at[c] {
                assert!(forced_at[c - 1]);
            }
        }
        match min_colours_avoiding(&g, 10_000_000).result {
            MinColours::Found { colours, witness } => {
                assert_eq!(find_mono_pair_sumset(&g, &witness).unwrap(), None);
                let k = colours as usize;
                if k <= forced_at.len() {
                    assert!(!forced_at[k - 1]);
                    assert!(forced_at[..k - 1].iter().all(|&f| f));
                }
            }
            MinColours::Unknown { .. } => panic!("budget hit on {orders:?}"),
        }
    }
}

#[test]
fn agrees_with_brute_force_enumeration() {
    for orders in [
        vec![4],
        vec![2, 2],
        vec![2],
        vec![3],
        vec![6],
        vec![2, 4],
        vec![8],
        vec![3, 3],
        vec![2, 2, 2],
        vec![7],
    ] {
        let g = z(&orders);
        for c in 1..=3 {
            let brute = common::brute_force_avoiding(&orders, c);
            let out = all_colourings_forced(&g, c, u64::MAX).unwrap();
            assert_eq!(
                brute.is_none(),
                out.verdict == Verdict::Forced,
                "{orders:?} c={c}"
            );
        }
    }
}

#[test]
fn invariant_under_coordinate_permutation() {
    for orders in [vec![4, 4], vec![4, 4, 2]] {
        let g = z(&orders);
        let MinColours::Found { witness: w, .. } = min_colours_avoiding(&g, 10_000_000).result
        else {
            panic!("budget hit on {orders:?}");
        };
        // swap the two Z/4 coordinates
        let permuted: Vec<u32> = (0..g.size())
            .map(|i| {
                let mut c = g.coords(i);
                c.swap(0, 1);
                w.colour_of(g.index(&c))
            })
            .collect();
        assert_eq!(
            find_mono_pair_sumset(&g, &ColouringTable::new(permuted)).unwrap(),
            None
        );
        // negation is an automorphism too
        let negated: Vec<u32> = (0..g.size()).map(|i| w.colour_of(g.neg(i))).collect();
        assert_eq!(
            find_mono_pair_sumset(&g, &ColouringTable::new(negated)).unwrap(),
            None
        );
    }
}

#[test]
fn budget_exhaustion_is_unknown() {
    let g = z(&[4, 4]);
    let out = all_colourings_forced(&g, 2, 0).unwrap();
    assert_eq!(out.verdict, Verdict::Unknown);
    assert_eq!(out.nodes, 0);
    let out = all_colourings_forced(&g, 1, 1).unwrap();
    assert_eq!(out.verdict, Verdict::Unknown);
}
